#include "pplist/random.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <system_error>

#include <blst.h>
#include <blst_aux.h>

namespace pplist {

void SystemRandom::fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        ssize_t n = ::getrandom(out.data() + done, out.size() - done, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::system_error(errno, std::generic_category(), "getrandom");
        }
        done += static_cast<std::size_t>(n);
    }
}

SeededRandom::SeededRandom(std::uint64_t seed) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
    blst_sha256(seed_.data(), buf, sizeof buf);
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
    std::uint8_t block_in[40];
    std::uint8_t block[32];
    std::memcpy(block_in, seed_.data(), 32);
    std::size_t done = 0;
    while (done < out.size()) {
        for (int i = 0; i < 8; ++i)
            block_in[32 + i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
        ++counter_;
        blst_sha256(block, block_in, sizeof block_in);
        std::size_t take = std::min(out.size() - done, sizeof block);
        std::memcpy(out.data() + done, block, take);
        done += take;
    }
}

RandomSource& system_random() {
    static SystemRandom rng;
    return rng;
}

}  // namespace pplist
