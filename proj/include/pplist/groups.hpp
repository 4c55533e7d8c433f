#ifndef PPLIST_GROUPS_HPP
#define PPLIST_GROUPS_HPP

// Asymmetric bilinear group e: G1 x G2 -> Gt over BLS12-381.
//
// Group operations are written additively (operator+ for the group law,
// operator* for exponentiation by a Scalar), so the protocol's g2^x is
// `g2 * x` and Y^a * g2^b is `Y * a + g2 * b`. Gt is written
// multiplicatively.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <blst.h>

#include "pplist/random.hpp"

namespace pplist {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_hex(ByteView bytes);
/// Lowercase or uppercase hex, even length. Throws Error otherwise.
Bytes from_hex(std::string_view hex);
inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Element of Z_q, q the prime order of G1, G2 and Gt.
class Scalar {
public:
    static constexpr std::size_t kEncodedSize = 32;

    Scalar();  // zero

    static Scalar from_u64(std::uint64_t v);
    /// Canonical 32-byte big-endian encoding; values >= q are rejected.
    static Scalar from_bytes(ByteView bytes);
    static Scalar from_hex(std::string_view hex);
    /// Big-endian bytes of any length reduced mod q.
    static Scalar reduce(ByteView bytes);
    /// Uniform in [0, q) from 512 random bits.
    static Scalar random(RandomSource& rng);
    /// Uniform in [1, q).
    static Scalar random_nonzero(RandomSource& rng);

    std::array<std::uint8_t, kEncodedSize> to_bytes() const;
    std::string to_hex() const;

    bool is_zero() const;
    /// Throws Error on zero.
    Scalar inverse() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
    friend bool operator==(const Scalar& a, const Scalar& b);

    const blst_fr& raw() const { return v_; }
    /// Little-endian canonical form consumed by blst's point multiplication.
    blst_scalar to_blst() const;

private:
    blst_fr v_;
};

class G1 {
public:
    static constexpr std::size_t kEncodedSize = 48;

    G1();  // identity
    static G1 generator();
    /// Compressed encoding. Rejects non-canonical, off-curve and
    /// out-of-subgroup input with Error.
    static G1 from_bytes(ByteView bytes);
    static G1 from_hex(std::string_view hex);

    std::array<std::uint8_t, kEncodedSize> to_bytes() const;
    std::string to_hex() const;
    bool is_identity() const;

    friend G1 operator+(const G1& a, const G1& b);
    friend G1 operator-(const G1& a, const G1& b);
    G1 operator-() const;
    G1& operator+=(const G1& b) { return *this = *this + b; }
    friend G1 operator*(const G1& p, const Scalar& s);
    friend bool operator==(const G1& a, const G1& b);

    const blst_p1& raw() const { return p_; }
    static G1 from_raw(const blst_p1& p) {
        G1 out;
        out.p_ = p;
        return out;
    }

private:
    blst_p1 p_;
};

class G2 {
public:
    static constexpr std::size_t kEncodedSize = 96;

    G2();  // identity
    static G2 generator();
    static G2 from_bytes(ByteView bytes);
    static G2 from_hex(std::string_view hex);

    std::array<std::uint8_t, kEncodedSize> to_bytes() const;
    std::string to_hex() const;
    bool is_identity() const;

    friend G2 operator+(const G2& a, const G2& b);
    friend G2 operator-(const G2& a, const G2& b);
    G2 operator-() const;
    G2& operator+=(const G2& b) { return *this = *this + b; }
    friend G2 operator*(const G2& p, const Scalar& s);
    friend bool operator==(const G2& a, const G2& b);

    const blst_p2& raw() const { return p_; }

private:
    blst_p2 p_;
};

/// Target group, written multiplicatively.
class Gt {
public:
    static constexpr std::size_t kEncodedSize = 576;

    Gt();  // one
    /// 12 big-endian Fp coordinates; each must be canonical and the result
    /// must lie in the order-q subgroup.
    static Gt from_bytes(ByteView bytes);

    Bytes to_bytes() const;
    bool is_one() const;
    Gt pow(const Scalar& e) const;
    Gt inverse() const;

    friend Gt operator*(const Gt& a, const Gt& b);
    friend bool operator==(const Gt& a, const Gt& b);

private:
    friend Gt pairing(const G1& p, const G2& q);
    blst_fp12 f_;
};

Gt pairing(const G1& p, const G2& q);

/// prod_i e(P_i, Q_i) == 1 using one final exponentiation. Empty input is
/// rejected with Error.
bool pairing_product_is_identity(std::span<const std::pair<G1, G2>> pairs);

struct GroupParams {
    std::string curve;
    Bytes order;  // q, big-endian
    G1 g1;
    G2 g2;
    Gt gt;  // e(g1, g2)
    std::string tag_h1;
    std::string tag_h2;
    std::string tag_h3;
};

inline constexpr std::string_view kTagH1 = "PPLIST-H1";
inline constexpr std::string_view kTagH2 = "PPLIST-H2";
inline constexpr std::string_view kTagH3 = "PPLIST-H3";
inline constexpr std::string_view kTagFiatShamir = "PPLIST-FS";

/// Builds the public parameters. Deterministic; includes the pairing of the
/// generators so the non-degeneracy check is part of setup.
GroupParams setup();

/// H1: (C1, C2, m) -> G1 via RFC 9380 hash-to-curve (SSWU, SHA-256).
G1 hash_h1(const G2& c1, const G2& c2, ByteView m);
/// H2: (Y, AgY) -> Z_q. AgY is encoded in route order. Throws Error
/// "empty key set" when agy is empty.
Scalar hash_h2(const G2& y, std::span<const G2> agy);
/// count(agy) || enc(agy[0]) || ... || enc(agy[d-1]), the key-set part of
/// the H2 input. Lets a caller hashing every key of a route encode it once.
Bytes encode_key_list(std::span<const G2> agy);
Scalar hash_h2_encoded(const G2& y, ByteView encoded_key_list);
/// H3: (x, m) -> Z_q.
Scalar hash_h3(const Scalar& x, ByteView m);

/// Tag-separated hash into Z_q: a 64-byte expand_message_xmd output with
/// DST = tag, reduced mod q. Shared by H2, H3 and the Fiat-Shamir challenge.
Scalar hash_to_scalar(std::string_view tag, ByteView payload);

/// 4-byte big-endian length prefix followed by the bytes.
void append_length_prefixed(Bytes& out, ByteView bytes);
void append_u32(Bytes& out, std::uint32_t v);

}  // namespace pplist

#endif  // PPLIST_GROUPS_HPP
