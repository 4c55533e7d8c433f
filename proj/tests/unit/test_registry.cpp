#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "fixtures.hpp"
#include "pplist/registry.hpp"

using namespace pplist;
using fixture::Delivery;
using fixture::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) { return read_text_file(p); }

void write_raw(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

}  // namespace

TEST_CASE("ledger file lifecycle", "[registry]") {
    SeededRandom rng(40);
    TempDir dir;
    const auto path = dir / "ledger.tsv";

    SECTION("missing file is created empty") {
        Ledger ledger(path);
        CHECK(ledger.size() == 0);
        CHECK(std::filesystem::exists(path));
        CHECK(slurp(path).empty());
        CHECK_THROWS_AS(ledger.find_record(0), NotFound);
    }

    SECTION("ids start at 0 and records survive a reopen byte for byte") {
        std::vector<Delivery> ds;
        {
            Ledger ledger(path);
            for (std::size_t i = 0; i < 3; ++i) {
                ds.push_back(Delivery::make(i + 1, rng, "order-" + std::to_string(i)));
                CHECK(ledger.create_record(ds[i].pseudonym, ds[i].m, ds[i].route) == i);
            }
            ledger.complete_record(1, ds[1].sigma);
        }
        const std::string before = slurp(path);
        Ledger reopened(path);
        REQUIRE(reopened.size() == 3);
        CHECK(reopened.find_record(0).status == RecordStatus::routed);
        CHECK(reopened.find_record(1).status == RecordStatus::delivered);
        CHECK(reopened.find_record(1).sigma == std::optional(ds[1].sigma));
        CHECK(reopened.find_record(2).route.size() == 3);
        CHECK(reopened.find_record(2).ya == ds[2].agg.ya);
        CHECK(reopened.find_record(2).message == ds[2].m);

        // rewrite the same records through the formatter and compare bytes
        std::string again;
        for (const auto& r : reopened.records()) again += format_record_line(r) + "\n";
        CHECK(again == before);

        Ledger twice(path);
        CHECK(twice.records() == reopened.records());
    }

    SECTION("record lines round trip") {
        Delivery d = Delivery::make(4, rng);
        DeliveryRecord r{7, RecordStatus::delivered, d.pseudonym, d.m, d.agg.route, d.agg.ya, d.sigma};
        CHECK(parse_record_line(format_record_line(r)) == r);
        r.status = RecordStatus::routed;
        r.sigma.reset();
        const std::string line = format_record_line(r);
        CHECK(line.substr(line.size() - 2) == "\t-");
        CHECK(parse_record_line(line) == r);
        CHECK_THROWS_AS(parse_record_line("1\trouted"), Error);
    }

    SECTION("corrupt line is reported by number") {
        Delivery d = Delivery::make(1, rng);
        {
            Ledger ledger(path);
            ledger.create_record(d.pseudonym, d.m, d.route);
            ledger.create_record(d.pseudonym, d.m, d.route);
        }
        std::string text = slurp(path);
        auto second = text.find('\n') + 1;
        auto tab = text.find('\t', text.find('\t', second) + 1);  // start of c1 on line 2
        text[tab + 5] = 'z';
        write_raw(path, text);
        CHECK_THROWS_WITH(Ledger(path), Catch::Matchers::StartsWith("ledger line 2:"));
    }

    SECTION("load rejects broken invariants") {
        Delivery d = Delivery::make(2, rng);
        DeliveryRecord r{0, RecordStatus::routed, d.pseudonym, d.m, d.agg.route, d.agg.ya, std::nullopt};

        DeliveryRecord bad_ya = r;
        bad_ya.ya = bad_ya.ya + G2::generator();
        write_raw(path, format_record_line(bad_ya) + "\n");
        CHECK_THROWS_WITH(Ledger(path), Catch::Matchers::StartsWith("record 0:"));

        DeliveryRecord delivered_no_sig = r;
        delivered_no_sig.status = RecordStatus::delivered;
        write_raw(path, format_record_line(delivered_no_sig) + "\n");
        CHECK_THROWS_AS(Ledger(path), Error);

        DeliveryRecord second = r;
        write_raw(path, format_record_line(r) + "\n" + format_record_line(second) + "\n");
        CHECK_THROWS_WITH(Ledger(path), Catch::Matchers::ContainsSubstring("id not greater"));

        DeliveryRecord forged = r;
        forged.status = RecordStatus::delivered;
        forged.sigma = AggregateSignature{d.sigma.sigma + G1::generator()};
        write_raw(path, format_record_line(forged) + "\n");
        CHECK_THROWS_WITH(Ledger(path), Catch::Matchers::ContainsSubstring("invalid aggregate signature"));
        Ledger lenient(path, LedgerOptions{false});
        CHECK(lenient.size() == 1);
    }
}

TEST_CASE("ledger operations", "[registry]") {
    SeededRandom rng(41);
    TempDir dir;
    const auto path = dir / "ledger.tsv";
    Ledger ledger(path);

    Delivery a = Delivery::make(3, rng, "order-a");
    Delivery b = Delivery::make(2, rng, "order-b");
    const auto ida = ledger.create_record(a.pseudonym, a.m, a.route);
    const auto idb = ledger.create_record(b.pseudonym, b.m, b.route);
    const auto ida2 = ledger.create_record(a.pseudonym, a.m, a.route);
    CHECK(ida == 0);
    CHECK(idb == 1);
    CHECK(ida2 == 2);

    SECTION("completion") {
        CHECK_THROWS_WITH(ledger.complete_record(idb, a.sigma),
                          Catch::Matchers::ContainsSubstring("invalid aggregate signature"));
        CHECK(ledger.find_record(idb).status == RecordStatus::routed);

        const std::string before = slurp(path);
        ledger.complete_record(ida, a.sigma);
        CHECK(ledger.find_record(ida).status == RecordStatus::delivered);
        CHECK_THROWS_WITH(ledger.complete_record(ida, a.sigma), Catch::Matchers::ContainsSubstring("already delivered"));
        CHECK_THROWS_AS(ledger.complete_record(99, a.sigma), NotFound);

        // only the completed line changed
        const std::string after = slurp(path);
        CHECK(after.substr(after.find('\n')) == before.substr(before.find('\n')));
        CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));

        Ledger reopened(path);
        CHECK(reopened.records() == ledger.records());
    }

    SECTION("lookups") {
        auto found = ledger.find_records(a.pseudonym, a.m);
        REQUIRE(found.size() == 2);
        CHECK(found[0].id == ida);
        CHECK(found[1].id == ida2);
        CHECK_THROWS_AS(ledger.find_records(a.pseudonym, b.m), NotFound);
        CHECK_THROWS_AS(ledger.find_record(3), NotFound);
        CHECK(ledger.find_record(idb).route == b.agg.route);
    }

    SECTION("wrong-role route is refused and leaves the file alone") {
        const std::string before = slurp(path);
        const PublicKey bad[] = {a.user.public_key()};
        CHECK_THROWS_AS(ledger.create_record(a.pseudonym, a.m, bad), Error);
        CHECK(slurp(path) == before);
        CHECK(ledger.size() == 3);
    }

    SECTION("a record reports its route aggregate") {
        auto agg = ledger.find_record(ida).route_aggregate();
        CHECK(agg.ya == a.agg.ya);
        CHECK(agg.coefficients == a.agg.coefficients);
    }
}
