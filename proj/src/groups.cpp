#include "pplist/groups.hpp"

#include <algorithm>
#include <cstring>

#include <blst.h>
#include <blst_aux.h>

namespace pplist {

namespace {

constexpr std::string_view kHashToG1Suite = "PPLIST-H1_BLS12381G1_XMD:SHA-256_SSWU_RO_";

// r = 0x73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001
constexpr std::array<std::uint8_t, 32> kOrder = {
    0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8, 0x08, 0x09, 0xa1, 0xd8, 0x05,
    0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe, 0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01};

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

void require_size(ByteView bytes, std::size_t want, const char* what) {
    if (bytes.size() != want)
        throw Error(std::string(what) + ": expected " + std::to_string(want) + " bytes, got " +
                    std::to_string(bytes.size()));
}

}  // namespace

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error("hex: odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_digit(hex[2 * i]);
        int lo = hex_digit(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error("hex: invalid digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

void append_u32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void append_length_prefixed(Bytes& out, ByteView bytes) {
    append_u32(out, static_cast<std::uint32_t>(bytes.size()));
    out.insert(out.end(), bytes.begin(), bytes.end());
}

// ---- Scalar ----

Scalar::Scalar() { std::memset(&v_, 0, sizeof v_); }

Scalar Scalar::from_u64(std::uint64_t v) {
    const std::uint64_t limbs[4] = {v, 0, 0, 0};
    Scalar out;
    blst_fr_from_uint64(&out.v_, limbs);
    return out;
}

Scalar Scalar::from_bytes(ByteView bytes) {
    require_size(bytes, kEncodedSize, "scalar");
    blst_scalar s;
    blst_scalar_from_bendian(&s, bytes.data());
    if (!blst_scalar_fr_check(&s)) throw Error("scalar: not a canonical value mod q");
    Scalar out;
    blst_fr_from_scalar(&out.v_, &s);
    return out;
}

Scalar Scalar::from_hex(std::string_view hex) { return from_bytes(pplist::from_hex(hex)); }

Scalar Scalar::reduce(ByteView bytes) {
    blst_scalar s;
    blst_scalar_from_be_bytes(&s, bytes.data(), bytes.size());
    Scalar out;
    blst_fr_from_scalar(&out.v_, &s);
    return out;
}

Scalar Scalar::random(RandomSource& rng) {
    std::array<std::uint8_t, 64> wide{};
    rng.fill(wide);
    return reduce(wide);
}

Scalar Scalar::random_nonzero(RandomSource& rng) {
    for (;;) {
        Scalar s = random(rng);
        if (!s.is_zero()) return s;
    }
}

blst_scalar Scalar::to_blst() const {
    blst_scalar s;
    blst_scalar_from_fr(&s, &v_);
    return s;
}

std::array<std::uint8_t, Scalar::kEncodedSize> Scalar::to_bytes() const {
    blst_scalar s = to_blst();
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_bendian_from_scalar(out.data(), &s);
    return out;
}

std::string Scalar::to_hex() const { return pplist::to_hex(to_bytes()); }

bool Scalar::is_zero() const {
    blst_scalar s = to_blst();
    return std::all_of(std::begin(s.b), std::end(s.b), [](auto b) { return b == 0; });
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error("scalar: inverse of zero");
    Scalar out;
    blst_fr_inverse(&out.v_, &v_);
    return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar out;
    blst_fr_add(&out.v_, &a.v_, &b.v_);
    return out;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    Scalar out;
    blst_fr_sub(&out.v_, &a.v_, &b.v_);
    return out;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar out;
    blst_fr_mul(&out.v_, &a.v_, &b.v_);
    return out;
}

Scalar Scalar::operator-() const {
    Scalar out;
    blst_fr_cneg(&out.v_, &v_, true);
    return out;
}

bool operator==(const Scalar& a, const Scalar& b) { return a.to_bytes() == b.to_bytes(); }

// ---- G1 ----

G1::G1() { std::memset(&p_, 0, sizeof p_); }

G1 G1::generator() {
    G1 out;
    out.p_ = *blst_p1_generator();
    return out;
}

G1 G1::from_bytes(ByteView bytes) {
    require_size(bytes, kEncodedSize, "G1 element");
    blst_p1_affine aff;
    if (blst_p1_uncompress(&aff, bytes.data()) != BLST_SUCCESS)
        throw Error("G1 element: invalid encoding or not on curve");
    if (!blst_p1_affine_in_g1(&aff)) throw Error("G1 element: not in prime-order subgroup");
    G1 out;
    blst_p1_from_affine(&out.p_, &aff);
    auto again = out.to_bytes();
    if (!std::equal(again.begin(), again.end(), bytes.begin()))
        throw Error("G1 element: non-canonical encoding");
    return out;
}

G1 G1::from_hex(std::string_view hex) { return from_bytes(pplist::from_hex(hex)); }

std::array<std::uint8_t, G1::kEncodedSize> G1::to_bytes() const {
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_p1_compress(out.data(), &p_);
    return out;
}

std::string G1::to_hex() const { return pplist::to_hex(to_bytes()); }

bool G1::is_identity() const { return blst_p1_is_inf(&p_); }

G1 operator+(const G1& a, const G1& b) {
    G1 out;
    blst_p1_add_or_double(&out.p_, &a.p_, &b.p_);
    return out;
}

G1 G1::operator-() const {
    G1 out = *this;
    blst_p1_cneg(&out.p_, true);
    return out;
}

G1 operator-(const G1& a, const G1& b) { return a + (-b); }

G1 operator*(const G1& p, const Scalar& s) {
    blst_scalar k = s.to_blst();
    G1 out;
    blst_p1_mult(&out.p_, &p.p_, k.b, 255);
    return out;
}

bool operator==(const G1& a, const G1& b) { return blst_p1_is_equal(&a.p_, &b.p_); }

// ---- G2 ----

G2::G2() { std::memset(&p_, 0, sizeof p_); }

G2 G2::generator() {
    G2 out;
    out.p_ = *blst_p2_generator();
    return out;
}

G2 G2::from_bytes(ByteView bytes) {
    require_size(bytes, kEncodedSize, "G2 element");
    blst_p2_affine aff;
    if (blst_p2_uncompress(&aff, bytes.data()) != BLST_SUCCESS)
        throw Error("G2 element: invalid encoding or not on curve");
    if (!blst_p2_affine_in_g2(&aff)) throw Error("G2 element: not in prime-order subgroup");
    G2 out;
    blst_p2_from_affine(&out.p_, &aff);
    auto again = out.to_bytes();
    if (!std::equal(again.begin(), again.end(), bytes.begin()))
        throw Error("G2 element: non-canonical encoding");
    return out;
}

G2 G2::from_hex(std::string_view hex) { return from_bytes(pplist::from_hex(hex)); }

std::array<std::uint8_t, G2::kEncodedSize> G2::to_bytes() const {
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_p2_compress(out.data(), &p_);
    return out;
}

std::string G2::to_hex() const { return pplist::to_hex(to_bytes()); }

bool G2::is_identity() const { return blst_p2_is_inf(&p_); }

G2 operator+(const G2& a, const G2& b) {
    G2 out;
    blst_p2_add_or_double(&out.p_, &a.p_, &b.p_);
    return out;
}

G2 G2::operator-() const {
    G2 out = *this;
    blst_p2_cneg(&out.p_, true);
    return out;
}

G2 operator-(const G2& a, const G2& b) { return a + (-b); }

G2 operator*(const G2& p, const Scalar& s) {
    blst_scalar k = s.to_blst();
    G2 out;
    blst_p2_mult(&out.p_, &p.p_, k.b, 255);
    return out;
}

bool operator==(const G2& a, const G2& b) { return blst_p2_is_equal(&a.p_, &b.p_); }

// ---- Gt ----

Gt::Gt() : f_(*blst_fp12_one()) {}

Gt Gt::from_bytes(ByteView bytes) {
    require_size(bytes, kEncodedSize, "Gt element");
    Gt out;
    const std::uint8_t* in = bytes.data();
    // Same coordinate order as blst_bendian_from_fp12.
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                blst_fp& fp = out.f_.fp6[j].fp2[i].fp[k];
                blst_fp_from_bendian(&fp, in);
                std::uint8_t again[48];
                blst_bendian_from_fp(again, &fp);
                if (std::memcmp(again, in, 48) != 0) throw Error("Gt element: non-canonical coordinate");
                in += 48;
            }
        }
    }
    if (!blst_fp12_in_group(&out.f_)) throw Error("Gt element: not in prime-order subgroup");
    return out;
}

Bytes Gt::to_bytes() const {
    Bytes out(kEncodedSize);
    blst_bendian_from_fp12(out.data(), &f_);
    return out;
}

bool Gt::is_one() const { return blst_fp12_is_one(&f_); }

Gt Gt::pow(const Scalar& e) const {
    auto bits = e.to_bytes();
    Gt acc;
    for (auto byte : bits) {
        for (int b = 7; b >= 0; --b) {
            blst_fp12_sqr(&acc.f_, &acc.f_);
            if ((byte >> b) & 1) blst_fp12_mul(&acc.f_, &acc.f_, &f_);
        }
    }
    return acc;
}

Gt Gt::inverse() const {
    Gt out;
    blst_fp12_inverse(&out.f_, &f_);
    return out;
}

Gt operator*(const Gt& a, const Gt& b) {
    Gt out;
    blst_fp12_mul(&out.f_, &a.f_, &b.f_);
    return out;
}

bool operator==(const Gt& a, const Gt& b) { return blst_fp12_is_equal(&a.f_, &b.f_); }

Gt pairing(const G1& p, const G2& q) {
    blst_p1_affine pa;
    blst_p2_affine qa;
    blst_p1_to_affine(&pa, &p.raw());
    blst_p2_to_affine(&qa, &q.raw());
    Gt out;
    blst_fp12 ml;
    blst_miller_loop(&ml, &qa, &pa);
    blst_final_exp(&out.f_, &ml);
    return out;
}

bool pairing_product_is_identity(std::span<const std::pair<G1, G2>> pairs) {
    if (pairs.empty()) throw Error("pairing product: empty input");
    blst_fp12 acc = *blst_fp12_one();
    for (const auto& [p, q] : pairs) {
        // a pair with an identity side contributes e(.,.) = 1
        if (p.is_identity() || q.is_identity()) continue;
        blst_p1_affine pa;
        blst_p2_affine qa;
        blst_p1_to_affine(&pa, &p.raw());
        blst_p2_to_affine(&qa, &q.raw());
        blst_fp12 ml;
        blst_miller_loop(&ml, &qa, &pa);
        blst_fp12_mul(&acc, &acc, &ml);
    }
    blst_fp12 out;
    blst_final_exp(&out, &acc);
    return blst_fp12_is_one(&out);
}

GroupParams setup() {
    GroupParams params;
    params.curve = "BLS12-381";
    params.order.assign(kOrder.begin(), kOrder.end());
    params.g1 = G1::generator();
    params.g2 = G2::generator();
    params.gt = pairing(params.g1, params.g2);
    if (params.gt.is_one()) throw Error("setup: degenerate pairing");
    params.tag_h1 = kTagH1;
    params.tag_h2 = kTagH2;
    params.tag_h3 = kTagH3;
    return params;
}

// ---- hashes ----

Scalar hash_to_scalar(std::string_view tag, ByteView payload) {
    Bytes msg;
    msg.reserve(tag.size() + payload.size());
    msg.insert(msg.end(), tag.begin(), tag.end());
    msg.insert(msg.end(), payload.begin(), payload.end());
    std::array<std::uint8_t, 64> wide{};
    blst_expand_message_xmd(wide.data(), wide.size(), msg.data(), msg.size(),
                            reinterpret_cast<const std::uint8_t*>(tag.data()), tag.size());
    return Scalar::reduce(wide);
}

G1 hash_h1(const G2& c1, const G2& c2, ByteView m) {
    Bytes msg(kTagH1.begin(), kTagH1.end());
    msg.reserve(msg.size() + 3 * 4 + 2 * G2::kEncodedSize + m.size());
    append_length_prefixed(msg, c1.to_bytes());
    append_length_prefixed(msg, c2.to_bytes());
    append_length_prefixed(msg, m);
    blst_p1 out;
    blst_hash_to_g1(&out, msg.data(), msg.size(),
                    reinterpret_cast<const std::uint8_t*>(kHashToG1Suite.data()), kHashToG1Suite.size(),
                    nullptr, 0);
    G1 h = G1::from_raw(out);
    if (h.is_identity()) throw Error("hash_h1: identity output");
    return h;
}

Bytes encode_key_list(std::span<const G2> agy) {
    Bytes out;
    out.reserve(4 + agy.size() * G2::kEncodedSize);
    append_u32(out, static_cast<std::uint32_t>(agy.size()));
    for (const auto& y : agy) {
        auto enc = y.to_bytes();
        out.insert(out.end(), enc.begin(), enc.end());
    }
    return out;
}

Scalar hash_h2_encoded(const G2& y, ByteView encoded_key_list) {
    if (encoded_key_list.size() < 4 ||
        (encoded_key_list[0] | encoded_key_list[1] | encoded_key_list[2] | encoded_key_list[3]) == 0)
        throw Error("empty key set");
    Bytes payload;
    payload.reserve(G2::kEncodedSize + encoded_key_list.size());
    auto enc = y.to_bytes();
    payload.insert(payload.end(), enc.begin(), enc.end());
    payload.insert(payload.end(), encoded_key_list.begin(), encoded_key_list.end());
    return hash_to_scalar(kTagH2, payload);
}

Scalar hash_h2(const G2& y, std::span<const G2> agy) {
    if (agy.empty()) throw Error("empty key set");
    return hash_h2_encoded(y, encode_key_list(agy));
}

Scalar hash_h3(const Scalar& x, ByteView m) {
    Bytes payload;
    auto enc = x.to_bytes();
    payload.insert(payload.end(), enc.begin(), enc.end());
    append_length_prefixed(payload, m);
    return hash_to_scalar(kTagH3, payload);
}

}  // namespace pplist
