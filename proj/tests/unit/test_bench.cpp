#include <catch2/catch_amalgamated.hpp>

#include "pplist/bench.hpp"
#include "pplist/groups.hpp"

using namespace pplist;
using namespace pplist::bench;

TEST_CASE("parse_cases", "[bench]") {
    auto cases = parse_cases("20:10,100:50", 3);
    REQUIRE(cases.size() == 2);
    CHECK(cases[0].n == 20);
    CHECK(cases[0].d == 10);
    CHECK(cases[1].n == 100);
    CHECK(cases[1].repetitions == 3);

    CHECK_THROWS_AS(parse_cases("", 1), Error);
    CHECK_THROWS_AS(parse_cases("10:20", 1), Error);
    CHECK_THROWS_AS(parse_cases("10:0", 1), Error);
    CHECK_THROWS_AS(parse_cases("10", 1), Error);
    CHECK_THROWS_AS(parse_cases("a:b", 1), Error);
    CHECK_THROWS_AS(parse_cases("4:2", 0), Error);
    CHECK_NOTHROW(validate({5, 5, 1}));
}

TEST_CASE("phase labels", "[bench]") {
    CHECK(phase_label(Phase::setup) == "Setup");
    CHECK(phase_label(Phase::trace) == "Trace");
    for (std::size_t i = 0; i < kPhaseCount; ++i) CHECK_FALSE(phase_label(static_cast<Phase>(i)).empty());
}

TEST_CASE("run_bench and render_report", "[bench]") {
    SeededRandom rng(60);
    const BenchCase cases[] = {{4, 2, 2}, {6, 3, 2}};
    BenchReport report = run_bench(cases, 1, rng);
    REQUIRE(report.cases.size() == 2);
    for (const auto& c : report.cases) {
        for (std::size_t p = 0; p < kPhaseCount; ++p) {
            REQUIRE(c.samples_ms[p].size() == 2);
            for (double s : c.samples_ms[p]) CHECK(s >= 0.0);
        }
    }
    CHECK(report.cases[0].mean_ms(Phase::sign) > 0.0);

    const std::string text = render_report(report);
    CHECK(text == render_report(report));
    for (std::size_t i = 0; i < kPhaseCount; ++i)
        CHECK(text.find(std::string(phase_label(static_cast<Phase>(i)))) != std::string::npos);
    CHECK(text.find("n=4,d=2") != std::string::npos);
}
