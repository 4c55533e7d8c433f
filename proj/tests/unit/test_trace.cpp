#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pplist/registry.hpp"
#include "pplist/trace.hpp"

using namespace pplist;
using fixture::Delivery;
using fixture::TempDir;

namespace {

DeliveryRecord delivered(const Delivery& d, std::uint64_t id = 0) {
    return {id, RecordStatus::delivered, d.pseudonym, d.m, d.agg.route, d.agg.ya, d.sigma};
}

}  // namespace

TEST_CASE("open_pseudonym", "[trace]") {
    const G2 g2 = G2::generator();
    // x_u = 2, x_t = 3, k = 5
    Pseudonym p{oracle::repeated_add(g2, 5), oracle::repeated_add(g2, 17)};
    CHECK(open_pseudonym(Scalar::from_u64(3), p) == oracle::repeated_add(g2, 2));
}

TEST_CASE("trace", "[trace]") {
    SeededRandom rng(50);

    SECTION("returns the user's key for every route length") {
        for (std::size_t d : {1u, 2u, 5u}) {
            Delivery x = Delivery::make(d, rng);
            PublicKey found = trace(x.tracer, delivered(x));
            CHECK(found == x.user.public_key());
            CHECK(found.role() == Role::user);
        }
    }

    SECTION("through a ledger") {
        TempDir dir;
        Ledger ledger(dir / "ledger.tsv");
        Delivery x = Delivery::make(3, rng);
        auto id = ledger.create_record(x.pseudonym, x.m, x.route);
        CHECK_THROWS_WITH(trace(x.tracer, ledger.find_record(id)),
                          Catch::Matchers::StartsWith("untraceable: invalid record"));
        ledger.complete_record(id, x.sigma);
        CHECK(trace(x.tracer, ledger.find_record(id)) == x.user.public_key());
    }

    SECTION("tampered records are untraceable") {
        Delivery x = Delivery::make(2, rng);
        DeliveryRecord r = delivered(x);
        r.message.push_back('!');
        CHECK_THROWS_WITH(trace(x.tracer, r), "untraceable: invalid record");

        r = delivered(x);
        r.sigma->sigma = r.sigma->sigma + G1::generator();
        CHECK_THROWS_WITH(trace(x.tracer, r), "untraceable: invalid record");

        r = delivered(x);
        r.pseudonym.c2 = r.pseudonym.c2 + G2::generator();
        CHECK_THROWS_WITH(trace(x.tracer, r), "untraceable: invalid record");
    }

    SECTION("a different tracer opens to someone else") {
        Delivery x = Delivery::make(1, rng);
        KeyPair other = KeyPair::generate(Role::tracer, rng);
        CHECK_FALSE(trace(other, delivered(x)) == x.user.public_key());
    }

    SECTION("role check") {
        Delivery x = Delivery::make(1, rng);
        CHECK_THROWS_WITH(trace(x.user, delivered(x)), Catch::Matchers::ContainsSubstring("expected a tracer key"));
    }
}
