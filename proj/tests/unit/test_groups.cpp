#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "pplist/groups.hpp"

using namespace pplist;

namespace {

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

template <std::size_t N>
Bytes to_vec(const std::array<std::uint8_t, N>& a) {
    return Bytes(a.begin(), a.end());
}

}  // namespace

TEST_CASE("setup is deterministic and non-degenerate", "[groups]") {
    const GroupParams a = setup();
    const GroupParams b = setup();

    CHECK(a.g1.to_bytes() == b.g1.to_bytes());
    CHECK(a.g2.to_bytes() == b.g2.to_bytes());
    CHECK(a.order == b.order);
    CHECK_FALSE(a.gt.is_one());
    CHECK_FALSE(a.g1.is_identity());
    CHECK_FALSE(a.g2.is_identity());
    CHECK(a.tag_h1 == "PPLIST-H1");
    CHECK(a.tag_h2 == "PPLIST-H2");
    CHECK(a.tag_h3 == "PPLIST-H3");

    // q >= 2^250: the leading byte of the 32-byte order is >= 0x04
    REQUIRE(a.order.size() == 32);
    CHECK(a.order[0] >= 0x04);

    // -1 mod q encodes as q - 1, and g * (q - 1) = -g in both source groups
    const Scalar minus_one = -Scalar::from_u64(1);
    Bytes q_minus_one = a.order;
    q_minus_one.back() -= 1;
    CHECK(to_vec(minus_one.to_bytes()) == q_minus_one);
    CHECK(a.g1 * minus_one == -a.g1);
    CHECK(a.g2 * minus_one == -a.g2);
}

TEST_CASE("pairing is bilinear", "[groups]") {
    SeededRandom rng(1);
    const G1 g1 = G1::generator();
    const G2 g2 = G2::generator();
    const Gt base = pairing(g1, g2);

    SECTION("exponent on either side, and in Gt") {
        for (int i = 0; i < 3; ++i) {
            Scalar a = Scalar::random(rng), b = Scalar::random(rng);
            Gt lhs = pairing(g1 * a, g2 * b);
            CHECK(lhs == pairing(g1 * b, g2 * a));
            CHECK(lhs == base.pow(a * b));
        }
    }

    SECTION("100 random pairs: e(g1^a, g2^b) = e(g1^ab, g2)") {
        for (int i = 0; i < 100; ++i) {
            Scalar a = Scalar::random(rng), b = Scalar::random(rng);
            REQUIRE(pairing(g1 * a, g2 * b) == pairing(g1 * (a * b), g2));
        }
    }

    SECTION("small exponents against repeated multiplication in Gt") {
        Gt acc;
        for (int i = 0; i < 6; ++i) acc = acc * base;
        CHECK(pairing(oracle::repeated_add(g1, 2), oracle::repeated_add(g2, 3)) == acc);
    }
}

TEST_CASE("pairing_product_is_identity", "[groups]") {
    SeededRandom rng(2);
    const G1 g1 = G1::generator();
    const G2 g2 = G2::generator();

    const std::pair<G1, G2> cancel[] = {{g1, g2}, {-g1, g2}};
    CHECK(pairing_product_is_identity(cancel));

    const std::pair<G1, G2> single[] = {{g1, g2}};
    CHECK_FALSE(pairing_product_is_identity(single));

    for (int i = 0; i < 5; ++i) {
        Scalar a = Scalar::random(rng), b = Scalar::random(rng);
        const std::pair<G1, G2> pairs[] = {{g1 * a, g2 * b}, {g1 * (-(a * b)), g2}};
        CHECK(pairing_product_is_identity(pairs));
        const std::pair<G1, G2> off_by_one[] = {{g1 * a, g2 * b}, {g1 * (-(a * b) + Scalar::from_u64(1)), g2}};
        CHECK_FALSE(pairing_product_is_identity(off_by_one));
    }

    CHECK_THROWS_AS(pairing_product_is_identity({}), Error);
}

TEST_CASE("hash_h1", "[groups][hash]") {
    const G2 c1 = G2::generator() * Scalar::from_u64(11);
    const G2 c2 = G2::generator() * Scalar::from_u64(12);

    G1 h = hash_h1(c1, c2, bytes_of("a"));
    CHECK(h == hash_h1(c1, c2, bytes_of("a")));
    CHECK_FALSE(h == hash_h1(c1, c2, bytes_of("b")));
    CHECK_FALSE(h == hash_h1(c2, c1, bytes_of("a")));
    CHECK_FALSE(h.is_identity());

    G1 empty = hash_h1(c1, c2, {});
    CHECK_FALSE(empty.is_identity());
    CHECK_NOTHROW(G1::from_bytes(empty.to_bytes()));
}

TEST_CASE("hash_h2", "[groups][hash]") {
    SeededRandom rng(3);
    std::vector<G2> agy;
    for (int i = 0; i < 3; ++i) agy.push_back(G2::generator() * Scalar::random_nonzero(rng));

    Scalar h = hash_h2(agy[0], agy);
    CHECK(h == hash_h2(agy[0], agy));

    auto replaced = agy;
    replaced[2] = G2::generator() * Scalar::random_nonzero(rng);
    CHECK_FALSE(h == hash_h2(agy[0], replaced));

    std::vector<G2> pair = {agy[0], agy[1]};
    std::vector<G2> reversed = {agy[1], agy[0]};
    CHECK_FALSE(hash_h2(agy[0], pair) == hash_h2(agy[0], reversed));

    CHECK(hash_h2_encoded(agy[1], encode_key_list(agy)) == hash_h2(agy[1], agy));

    CHECK_THROWS_WITH(hash_h2(agy[0], std::vector<G2>{}), "empty key set");
}

TEST_CASE("hash_h3", "[groups][hash]") {
    const Scalar x1 = Scalar::from_u64(42), x2 = Scalar::from_u64(43);
    Scalar k = hash_h3(x1, bytes_of("order-1"));
    CHECK(k == hash_h3(x1, bytes_of("order-1")));
    CHECK_FALSE(k == hash_h3(x1, bytes_of("order-2")));
    CHECK_FALSE(k == hash_h3(x2, bytes_of("order-1")));
    CHECK_FALSE(hash_h3(x1, {}).is_zero());
}

TEST_CASE("hash tags separate domains", "[groups][hash]") {
    SeededRandom rng(4);
    for (int i = 0; i < 100; ++i) {
        Bytes payload(1 + i % 80);
        rng.fill(payload);
        REQUIRE_FALSE(hash_to_scalar(kTagH2, payload) == hash_to_scalar(kTagH3, payload));
        REQUIRE_FALSE(hash_to_scalar(kTagH2, payload) == hash_to_scalar(kTagFiatShamir, payload));
    }
}

TEST_CASE("scalar arithmetic and encoding", "[groups][scalar]") {
    SeededRandom rng(5);
    CHECK(Scalar().is_zero());
    CHECK(Scalar::from_u64(3) * Scalar::from_u64(5) == Scalar::from_u64(15));
    CHECK(Scalar::from_u64(3) - Scalar::from_u64(5) == -Scalar::from_u64(2));

    for (int i = 0; i < 1000; ++i) {
        Scalar s = Scalar::random(rng);
        REQUIRE(Scalar::from_bytes(s.to_bytes()) == s);
        REQUIRE(Scalar::from_hex(s.to_hex()) == s);
        if (!s.is_zero()) REQUIRE(s * s.inverse() == Scalar::from_u64(1));
    }

    CHECK_THROWS_AS(Scalar().inverse(), Error);
    CHECK(Scalar::from_bytes(Bytes(32, 0)).is_zero());

    // q itself and 2^256 - 1 are not canonical
    const GroupParams params = setup();
    CHECK_THROWS_AS(Scalar::from_bytes(params.order), Error);
    CHECK_THROWS_AS(Scalar::from_bytes(Bytes(32, 0xff)), Error);
    CHECK_THROWS_AS(Scalar::from_bytes(Bytes(31, 0)), Error);
    CHECK_THROWS_AS(Scalar::from_hex("zz"), Error);
}

TEST_CASE("group elements round-trip through their encodings", "[groups][encoding]") {
    SeededRandom rng(6);
    const GroupParams params = setup();

    for (int i = 0; i < 1000; ++i) {
        G1 p = params.g1 * Scalar::random(rng);
        auto enc = p.to_bytes();
        REQUIRE(G1::from_bytes(enc) == p);
        REQUIRE(G1::from_bytes(enc).to_bytes() == enc);
    }
    for (int i = 0; i < 1000; ++i) {
        G2 p = params.g2 * Scalar::random(rng);
        auto enc = p.to_bytes();
        REQUIRE(G2::from_bytes(enc) == p);
        REQUIRE(G2::from_bytes(enc).to_bytes() == enc);
    }
    for (int i = 0; i < 1000; ++i) {
        Gt t = params.gt.pow(Scalar::random(rng));
        Bytes enc = t.to_bytes();
        REQUIRE(Gt::from_bytes(enc) == t);
        REQUIRE(Gt::from_bytes(enc).to_bytes() == enc);
    }

    CHECK(G1::from_bytes(G1().to_bytes()).is_identity());
    CHECK(G2::from_bytes(G2().to_bytes()).is_identity());
}

TEST_CASE("decoding rejects malformed elements", "[groups][encoding]") {
    SECTION("wrong length") {
        CHECK_THROWS_AS(G1::from_bytes(Bytes(47, 0)), Error);
        CHECK_THROWS_AS(G2::from_bytes(Bytes(97, 0)), Error);
        CHECK_THROWS_AS(Gt::from_bytes(Bytes(575, 0)), Error);
    }

    SECTION("compression flag missing") {
        auto enc = G1::generator().to_bytes();
        enc[0] &= 0x7f;
        CHECK_THROWS_AS(G1::from_bytes(enc), Error);
    }

    SECTION("x coordinate >= p") {
        // p = 0x1a0111ea...; 0x1fff... with the compression bit set exceeds it
        Bytes g1(48, 0xff);
        g1[0] = 0x80 | 0x1f;
        CHECK_THROWS_AS(G1::from_bytes(g1), Error);
        Bytes g2(96, 0xff);
        g2[0] = 0x80 | 0x1f;
        CHECK_THROWS_AS(G2::from_bytes(g2), Error);
    }

    SECTION("infinity flag with stray bits") {
        Bytes inf(48, 0);
        inf[0] = 0xc0;
        inf[47] = 1;
        CHECK_THROWS_AS(G1::from_bytes(inf), Error);
    }

    SECTION("small x values are off-curve or outside the subgroup") {
        int off_curve = 0, off_subgroup = 0;
        for (std::uint8_t x = 1; x < 40; ++x) {
            Bytes enc(48, 0);
            enc[0] = 0x80;
            enc[47] = x;
            try {
                G1::from_bytes(enc);
                FAIL("accepted x = " << int(x));
            } catch (const Error& e) {
                std::string what = e.what();
                if (what.find("subgroup") != std::string::npos)
                    ++off_subgroup;
                else
                    ++off_curve;
            }
        }
        CHECK(off_curve > 0);
        CHECK(off_subgroup > 0);
    }

    SECTION("Gt outside the subgroup or non-canonical") {
        Bytes one = Gt().to_bytes();
        Bytes bumped = one;
        bumped[47] ^= 0x02;  // 1 -> 3 in the first coordinate
        CHECK_THROWS_AS(Gt::from_bytes(bumped), Error);
        Bytes big = one;
        std::fill(big.begin(), big.begin() + 48, 0xff);
        CHECK_THROWS_AS(Gt::from_bytes(big), Error);
    }

    SECTION("bad hex") {
        CHECK_THROWS_AS(from_hex("abc"), Error);
        CHECK_THROWS_AS(from_hex("0g"), Error);
        CHECK(from_hex("00FFa0") == Bytes{0x00, 0xff, 0xa0});
    }
}

TEST_CASE("seeded randomness is reproducible", "[groups][random]") {
    SeededRandom a(99), b(99), c(100);
    Scalar sa = Scalar::random(a), sb = Scalar::random(b), sc = Scalar::random(c);
    CHECK(sa == sb);
    CHECK_FALSE(sa == sc);

    std::set<std::string> seen;
    auto& sys = system_random();
    for (int i = 0; i < 100; ++i) seen.insert(Scalar::random(sys).to_hex());
    CHECK(seen.size() == 100);
}
