#ifndef PPLIST_BENCH_HPP
#define PPLIST_BENCH_HPP

// Per-phase timing of the full protocol for (n stations, route length d)
// cases, reported with the same phase rows as the original evaluation.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pplist/random.hpp"

namespace pplist::bench {

enum class Phase : std::size_t {
    setup,
    station_keygen,
    user_keygen,
    trace_keygen,
    pseudonym,
    key_aggregation,
    sign,
    ownership_verify,
    verify,
    trace,
};

inline constexpr std::size_t kPhaseCount = 10;

std::string_view phase_label(Phase phase);

struct BenchCase {
    std::size_t n = 0;  // stations
    std::size_t d = 0;  // route length
    std::size_t repetitions = 10;
};

/// "20:10,100:50" -> cases with the given repetition count. Throws
/// pplist::Error unless 1 <= d <= n and repetitions >= 1.
std::vector<BenchCase> parse_cases(std::string_view spec, std::size_t repetitions);
void validate(const BenchCase& c);

struct CaseResult {
    BenchCase params;
    std::array<std::vector<double>, kPhaseCount> samples_ms;  // one per repetition

    double mean_ms(Phase phase) const;
};

struct BenchReport {
    std::vector<CaseResult> cases;
    std::size_t warmup = 0;
    std::string environment;
};

/// Runs each case sequentially: `warmup` untimed rounds, then
/// `repetitions` timed rounds with fresh keys every round.
BenchReport run_bench(std::span<const BenchCase> cases, std::size_t warmup, RandomSource& rng);

/// Table of mean milliseconds, one row per phase and one column per case.
/// Pure function of the report.
std::string render_report(const BenchReport& report);

}  // namespace pplist::bench

#endif  // PPLIST_BENCH_HPP
