#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pplist/aggregate.hpp"

using namespace pplist;

namespace {

ByteView msg(std::string_view s) { return as_bytes(s); }

struct Route {
    std::vector<KeyPair> stations;
    std::vector<PublicKey> pubs;
};

Route make_route(std::size_t d, RandomSource& rng) {
    Route r;
    for (std::size_t i = 0; i < d; ++i) {
        r.stations.push_back(KeyPair::generate(Role::station, rng));
        r.pubs.push_back(r.stations.back().public_key());
    }
    return r;
}

struct Order {
    KeyPair user;
    KeyPair tracer;
    Bytes m;
    Pseudonym pseudonym;
};

Order make_order(RandomSource& rng, std::string_view m = "order-1") {
    Order o{KeyPair::generate(Role::user, rng), KeyPair::generate(Role::tracer, rng), Bytes(m.begin(), m.end()), {}};
    o.pseudonym = derive_pseudonym(o.user, o.tracer.public_key(), o.m);
    return o;
}

std::vector<PartialSignature> sign_all(const Route& r, const RouteAggregate& agg, const Order& o) {
    std::vector<PartialSignature> parts;
    for (std::size_t i = 0; i < r.stations.size(); ++i)
        parts.push_back(station_sign(r.stations[i], agg, i + 1, o.pseudonym, o.m));
    return parts;
}

}  // namespace

TEST_CASE("aggregate_keys", "[aggregate]") {
    SeededRandom rng(30);
    const G2 g2 = G2::generator();

    SECTION("d = 1") {
        Route r = make_route(1, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        const G2 keys[] = {r.pubs[0].y()};
        CHECK(agg.coefficients[0] == hash_h2(keys[0], keys));
        CHECK(agg.ya == r.pubs[0].y() * agg.coefficients[0]);
        CHECK(route_aggregate_is_consistent(agg));
    }

    SECTION("small exponents with forced coefficients") {
        const G2 route[] = {oracle::repeated_add(g2, 2), oracle::repeated_add(g2, 3)};
        const Scalar h[] = {Scalar::from_u64(5), Scalar::from_u64(7)};
        RouteAggregate agg = aggregate_keys_with_coefficients(route, h);
        CHECK(agg.ya == oracle::repeated_add(g2, 2 * 5 + 3 * 7));
        CHECK_FALSE(route_aggregate_is_consistent(agg));
    }

    SECTION("coefficients are H2(Y_i, AgY) over the ordered list") {
        Route r = make_route(4, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        G2 expect;
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(agg.coefficients[i] == hash_h2(agg.route[i], agg.route));
            expect = expect + agg.route[i] * agg.coefficients[i];
        }
        CHECK(agg.ya == expect);

        // reordering the route changes the coefficients
        std::vector<G2> swapped = agg.route;
        std::swap(swapped[0], swapped[1]);
        CHECK_FALSE(aggregate_keys(swapped).coefficients[1] == agg.coefficients[0]);
    }

    SECTION("a repeated station gets one coefficient per occurrence") {
        Route r = make_route(2, rng);
        std::vector<PublicKey> pubs = {r.pubs[0], r.pubs[1], r.pubs[0]};
        RouteAggregate agg = aggregate_keys(pubs);
        CHECK(agg.coefficients[0] == agg.coefficients[2]);
        CHECK(agg.ya == r.pubs[0].y() * (agg.coefficients[0] + agg.coefficients[0]) + r.pubs[1].y() * agg.coefficients[1]);
    }

    SECTION("rejections") {
        CHECK_THROWS_WITH(aggregate_keys(std::span<const PublicKey>{}), Catch::Matchers::ContainsSubstring("empty key set"));
        KeyPair user = KeyPair::generate(Role::user, rng);
        const PublicKey wrong[] = {user.public_key()};
        CHECK_THROWS_AS(aggregate_keys(wrong), Error);
    }
}

TEST_CASE("station_sign", "[aggregate]") {
    SeededRandom rng(31);
    Order o = make_order(rng);
    const G1 h1 = hash_h1(o.pseudonym.c1, o.pseudonym.c2, o.m);

    SECTION("h * x = 1 gives H1 itself") {
        KeyPair station = KeyPair::from_secret(Role::station, Scalar::from_u64(2));
        const G2 route[] = {station.y()};
        const Scalar h[] = {Scalar::from_u64(2).inverse()};
        RouteAggregate agg = aggregate_keys_with_coefficients(route, h);
        CHECK(station_sign(station, agg, 1, o.pseudonym, o.m).sig == h1);
    }

    SECTION("x = 2, h = 3 gives H1^6") {
        KeyPair station = KeyPair::from_secret(Role::station, Scalar::from_u64(2));
        const G2 route[] = {station.y()};
        const Scalar h[] = {Scalar::from_u64(3)};
        RouteAggregate agg = aggregate_keys_with_coefficients(route, h);
        PartialSignature part = station_sign(station, agg, 1, o.pseudonym, o.m);
        CHECK(part.position == 1);
        CHECK(part.sig == oracle::repeated_add(h1, 6));
    }

    SECTION("wrong position or out of range") {
        Route r = make_route(3, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        CHECK_THROWS_WITH(station_sign(r.stations[0], agg, 2, o.pseudonym, o.m), "station not at position 2");
        CHECK_THROWS_AS(station_sign(r.stations[0], agg, 0, o.pseudonym, o.m), Error);
        CHECK_THROWS_AS(station_sign(r.stations[0], agg, 4, o.pseudonym, o.m), Error);
        CHECK_THROWS_AS(station_sign(o.user, agg, 1, o.pseudonym, o.m), Error);
    }

    SECTION("verify_partial localizes a bad part") {
        Route r = make_route(3, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        auto parts = sign_all(r, agg, o);
        for (const auto& p : parts) CHECK(verify_partial(p, agg, o.pseudonym, o.m));
        parts[1].sig = parts[1].sig + G1::generator();
        CHECK_FALSE(verify_partial(parts[1], agg, o.pseudonym, o.m));
        PartialSignature misplaced = parts[0];
        misplaced.position = 3;
        CHECK_FALSE(verify_partial(misplaced, agg, o.pseudonym, o.m));
    }
}

TEST_CASE("aggregate and verify", "[aggregate]") {
    SeededRandom rng(32);
    Order o = make_order(rng);

    SECTION("honest routes verify for several lengths") {
        for (std::size_t d : {1u, 2u, 3u, 7u, 16u}) {
            Route r = make_route(d, rng);
            RouteAggregate agg = aggregate_keys(r.pubs);
            auto sig = aggregate_signatures(sign_all(r, agg, o), d);
            INFO("d = " << d);
            CHECK(verify_aggregate(sig, o.pseudonym, agg.ya, o.m));
        }
    }

    SECTION("two stations against the scalar oracle") {
        KeyPair s1 = KeyPair::from_secret(Role::station, Scalar::from_u64(11));
        KeyPair s2 = KeyPair::from_secret(Role::station, Scalar::from_u64(13));
        const PublicKey pubs[] = {s1.public_key(), s2.public_key()};
        RouteAggregate agg = aggregate_keys(pubs);
        const PartialSignature parts[] = {station_sign(s1, agg, 1, o.pseudonym, o.m),
                                          station_sign(s2, agg, 2, o.pseudonym, o.m)};
        auto sig = aggregate_signatures(parts, 2);
        const Scalar e = agg.coefficients[0] * Scalar::from_u64(11) + agg.coefficients[1] * Scalar::from_u64(13);
        CHECK(sig.sigma == hash_h1(o.pseudonym.c1, o.pseudonym.c2, o.m) * e);
        CHECK(agg.ya == G2::generator() * e);
    }

    SECTION("order of parts does not matter") {
        Route r = make_route(6, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        auto parts = sign_all(r, agg, o);
        auto reference = aggregate_signatures(parts, 6);
        std::mt19937 shuffle_rng(5);
        for (int i = 0; i < 5; ++i) {
            std::shuffle(parts.begin(), parts.end(), shuffle_rng);
            CHECK(aggregate_signatures(parts, 6) == reference);
        }
    }

    SECTION("missing, duplicate and out-of-range parts") {
        Route r = make_route(4, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        auto parts = sign_all(r, agg, o);

        auto missing = parts;
        missing.erase(missing.begin() + 2);
        CHECK_THROWS_WITH(aggregate_signatures(missing, 4), Catch::Matchers::ContainsSubstring("missing positions 3"));

        auto dup = parts;
        dup.push_back(parts[1]);
        CHECK_THROWS_WITH(aggregate_signatures(dup, 4), Catch::Matchers::ContainsSubstring("duplicate positions 2"));

        auto out = parts;
        out.push_back({9, parts[0].sig});
        CHECK_THROWS_WITH(aggregate_signatures(out, 4), Catch::Matchers::ContainsSubstring("9"));
    }

    SECTION("tampering rejects") {
        Route r = make_route(3, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        auto sig = aggregate_signatures(sign_all(r, agg, o), 3);
        REQUIRE(verify_aggregate(sig, o.pseudonym, agg.ya, o.m));

        Bytes m2 = o.m;
        m2.back() ^= 1;
        Verdict v = verify_aggregate(sig, o.pseudonym, agg.ya, m2);
        CHECK_FALSE(v);
        CHECK(v.reason == "invalid aggregate signature");

        Pseudonym p2 = o.pseudonym;
        p2.c1 = p2.c1 + G2::generator();
        CHECK_FALSE(verify_aggregate(sig, p2, agg.ya, o.m));
        p2 = o.pseudonym;
        p2.c2 = p2.c2 + G2::generator();
        CHECK_FALSE(verify_aggregate(sig, p2, agg.ya, o.m));

        CHECK_FALSE(verify_aggregate(sig, o.pseudonym, agg.ya + G2::generator(), o.m));
        CHECK_FALSE(verify_aggregate({sig.sigma + G1::generator()}, o.pseudonym, agg.ya, o.m));
        CHECK_FALSE(verify_aggregate({G1()}, o.pseudonym, agg.ya, o.m));
    }

    SECTION("a strict subset of the route does not verify against the full YA") {
        Route r = make_route(5, rng);
        RouteAggregate agg = aggregate_keys(r.pubs);
        auto parts = sign_all(r, agg, o);
        SignatureAccumulator partial(5);
        for (std::size_t i = 0; i < 4; ++i) partial.absorb(parts[i]);
        CHECK_FALSE(verify_aggregate({partial.running()}, o.pseudonym, agg.ya, o.m));

        // the same stations aggregated as their own route get different coefficients
        std::vector<PublicKey> sub(r.pubs.begin(), r.pubs.begin() + 4);
        RouteAggregate sub_agg = aggregate_keys(sub);
        CHECK_FALSE(sub_agg.coefficients[0] == agg.coefficients[0]);
        CHECK_FALSE(verify_aggregate({partial.running()}, o.pseudonym, sub_agg.ya, o.m));
    }

    SECTION("rogue key: Y' = g2^a - Y_1 with unit coefficients would pass, H2 coefficients do not") {
        Route r = make_route(1, rng);
        const Scalar a = Scalar::random_nonzero(rng);
        const G2 rogue = G2::generator() * a - r.pubs[0].y();
        const G2 route[] = {r.pubs[0].y(), rogue};
        const G1 h1 = hash_h1(o.pseudonym.c1, o.pseudonym.c2, o.m);
        const AggregateSignature forged{h1 * a};

        const Scalar ones[] = {Scalar::from_u64(1), Scalar::from_u64(1)};
        CHECK(verify_aggregate(forged, o.pseudonym, aggregate_keys_with_coefficients(route, ones).ya, o.m));
        CHECK_FALSE(verify_aggregate(forged, o.pseudonym, aggregate_keys(route).ya, o.m));
    }
}

TEST_CASE("SignatureAccumulator", "[aggregate]") {
    SeededRandom rng(33);
    Order o = make_order(rng);
    Route r = make_route(4, rng);
    RouteAggregate agg = aggregate_keys(r.pubs);
    auto parts = sign_all(r, agg, o);

    SignatureAccumulator acc(4);
    CHECK_FALSE(acc.complete());
    CHECK_THROWS_WITH(acc.finish(), Catch::Matchers::ContainsSubstring("missing"));
    for (std::size_t i : {2u, 0u, 3u}) acc.absorb(parts[i]);
    CHECK_THROWS_AS(acc.absorb(parts[0]), Error);
    CHECK_THROWS_AS(acc.absorb({5, parts[0].sig}), Error);

    SignatureAccumulator back = SignatureAccumulator::from_text(acc.to_text());
    CHECK(back.positions() == acc.positions());
    CHECK(back.running() == acc.running());
    CHECK(back.route_length() == 4);

    back.absorb(parts[1]);
    CHECK(back.complete());
    CHECK(back.finish() == aggregate_signatures(parts, 4));
    CHECK(SignatureAccumulator::from_text(back.to_text()).finish() == back.finish());

    CHECK_THROWS_AS(SignatureAccumulator(0), Error);
    CHECK_THROWS_AS(SignatureAccumulator::from_text("d: 2\npositions: 1 1\nsigma: " + G1().to_hex() + "\n"), Error);
    CHECK_THROWS_AS(SignatureAccumulator::from_text("d: 2\npositions: 3\nsigma: " + G1().to_hex() + "\n"), Error);
    SignatureAccumulator empty = SignatureAccumulator::from_text("d: 2\npositions:\nsigma: " + G1().to_hex() + "\n");
    CHECK(empty.positions().empty());
}

TEST_CASE("partial signature lines", "[aggregate]") {
    SeededRandom rng(34);
    Order o = make_order(rng);
    Route r = make_route(2, rng);
    RouteAggregate agg = aggregate_keys(r.pubs);
    PartialSignature part = station_sign(r.stations[1], agg, 2, o.pseudonym, o.m);

    std::string line = format_partial_signature(part);
    CHECK(line == "2 " + part.sig.to_hex());
    PartialSignature back = parse_partial_signature(line);
    CHECK(back.position == 2);
    CHECK(back.sig == part.sig);
    CHECK_THROWS_AS(parse_partial_signature("2"), Error);
    CHECK_THROWS_AS(parse_partial_signature("x " + part.sig.to_hex()), Error);
    CHECK_THROWS_AS(parse_partial_signature("0 " + part.sig.to_hex()), Error);
}

// reference values from tests/vectors/gen_vectors.py
TEST_CASE("fixed route vector", "[aggregate][vectors]") {
    KeyPair user = KeyPair::from_secret(Role::user, Scalar::from_u64(0x1234567));
    KeyPair tracer = KeyPair::from_secret(Role::tracer, Scalar::from_u64(0x89abcdef));
    const Bytes m = {'o', 'r', 'd', 'e', 'r', '-', '0', '0', '0', '1'};
    Pseudonym ps = derive_pseudonym(user, tracer.public_key(), m);

    KeyPair s1 = KeyPair::from_secret(Role::station, Scalar::from_u64(11));
    KeyPair s2 = KeyPair::from_secret(Role::station, Scalar::from_u64(13));
    const PublicKey pubs[] = {s1.public_key(), s2.public_key()};
    RouteAggregate agg = aggregate_keys(pubs);
    CHECK(agg.coefficients[0].to_hex() == "6d2e4b60c3d9c58902d674fe1d95108203c74193d01f356c6e76b1d3457fcf35");
    CHECK(agg.coefficients[1].to_hex() == "57fbe1b75eda7bc31cacb500d6e27f7b7b740ce0445d927b8e626ae42bc67a6d");
    CHECK(agg.ya.to_hex() ==
          "a8022b15d5403edd14d477f1051ab4e4c6dc6cb9b6debe6ec67ffb883061e9960d48932e4c9ac1ee3fd0a26359d02f7c"
          "0e23a0614a9132b8a9d8ec395c46b0dbcaa9832ff1a761a77b88fa1f6357c191e95e64b993d40c8a1749d56f1f468e96");

    const PartialSignature parts[] = {station_sign(s1, agg, 1, ps, m), station_sign(s2, agg, 2, ps, m)};
    auto sig = aggregate_signatures(parts, 2);
    CHECK(sig.sigma.to_hex() ==
          "abeee42bc5f68a5d4089398a5229cd0d4545c9b3c73e1d43320f549831b1b7916d99de11757ecc42e5f4b70226bfa185");
    CHECK(verify_aggregate(sig, ps, agg.ya, m));
}
