#ifndef PPLIST_RANDOM_HPP
#define PPLIST_RANDOM_HPP

#include <array>
#include <cstdint>
#include <span>

namespace pplist {

/// Source of uniform random bytes. Every operation that samples takes one
/// explicitly so tests can inject a seeded stream.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Kernel CSPRNG (getrandom(2)).
class SystemRandom final : public RandomSource {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic stream: SHA-256(seed || counter) blocks. Test use only.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed);

    void fill(std::span<std::uint8_t> out) override;

private:
    std::array<std::uint8_t, 32> seed_{};
    std::uint64_t counter_ = 0;
};

/// Process-wide system source.
RandomSource& system_random();

}  // namespace pplist

#endif  // PPLIST_RANDOM_HPP
