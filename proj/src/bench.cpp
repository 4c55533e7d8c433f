#include "pplist/bench.hpp"

#include <chrono>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>

#include "pplist/aggregate.hpp"
#include "pplist/groups.hpp"
#include "pplist/keys.hpp"
#include "pplist/pseudonym.hpp"
#include "pplist/registry.hpp"
#include "pplist/trace.hpp"

namespace pplist::bench {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::array<std::string_view, kPhaseCount> kLabels = {
    "Setup",
    "Station-Key-Generation",
    "User-Key-Generation",
    "Trace-Key-Generation",
    "User-Pseudonym",
    "Public-Key-Aggregation",
    "Sign",
    "User-Ownership-Verify",
    "Verify",
    "Trace",
};

template <class F>
double time_ms(F&& f) {
    auto start = Clock::now();
    f();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Any failure inside a timed round is a bug, not a measurement.
void check(bool ok, const char* what) {
    if (!ok) throw Error(std::string("bench: ") + what);
}

std::array<double, kPhaseCount> run_round(const BenchCase& c, RandomSource& rng) {
    std::array<double, kPhaseCount> t{};
    auto at = [&](Phase p) -> double& { return t[static_cast<std::size_t>(p)]; };

    GroupParams params;
    at(Phase::setup) = time_ms([&] { params = setup(); });

    std::vector<KeyPair> stations;
    stations.reserve(c.n);
    at(Phase::station_keygen) = time_ms([&] {
        for (std::size_t i = 0; i < c.n; ++i) stations.push_back(KeyPair::generate(Role::station, rng));
    });

    std::optional<KeyPair> user, tracer;
    at(Phase::user_keygen) = time_ms([&] { user = KeyPair::generate(Role::user, rng); });
    at(Phase::trace_keygen) = time_ms([&] { tracer = KeyPair::generate(Role::tracer, rng); });

    const std::string order = "order-" + Scalar::random(rng).to_hex().substr(0, 16);
    const ByteView m = as_bytes(order);
    const PublicKey tracer_pub = tracer->public_key();

    Pseudonym pseudonym;
    at(Phase::pseudonym) = time_ms([&] { pseudonym = derive_pseudonym(*user, tracer_pub, m); });

    // route: d stations spread evenly over the n registered ones
    std::vector<std::size_t> chosen(c.d);
    for (std::size_t i = 0; i < c.d; ++i) chosen[i] = i * c.n / c.d;
    std::vector<PublicKey> route;
    route.reserve(c.d);
    for (auto idx : chosen) route.push_back(stations[idx].public_key());

    RouteAggregate agg;
    at(Phase::key_aggregation) = time_ms([&] { agg = aggregate_keys(route); });

    AggregateSignature sigma;
    at(Phase::sign) = time_ms([&] {
        SignatureAccumulator acc(c.d);
        for (std::size_t i = 0; i < c.d; ++i)
            acc.absorb(station_sign(stations[chosen[i]], agg, i + 1, pseudonym, m));
        sigma = acc.finish();
    });

    bool proof_ok = false;
    at(Phase::ownership_verify) = time_ms([&] {
        auto commitment = prove_commit(*user, tracer_pub, pseudonym, rng);
        Scalar c_challenge = challenge(rng);
        auto response = prove_respond(commitment, c_challenge, *user, m);
        OwnershipTranscript transcript{pseudonym,           commitment.v1_point(), commitment.v2_point(),
                                       c_challenge,         response.r1,           response.r2};
        proof_ok = static_cast<bool>(verify_proof(tracer_pub, transcript));
    });
    check(proof_ok, "ownership proof rejected");

    bool sig_ok = false;
    at(Phase::verify) = time_ms([&] { sig_ok = static_cast<bool>(verify_aggregate(sigma, pseudonym, agg.ya, m)); });
    check(sig_ok, "aggregate signature rejected");

    DeliveryRecord record;
    record.status = RecordStatus::delivered;
    record.pseudonym = pseudonym;
    record.message.assign(m.begin(), m.end());
    record.route = agg.route;
    record.ya = agg.ya;
    record.sigma = sigma;
    std::optional<PublicKey> traced;
    at(Phase::trace) = time_ms([&] { traced = trace(*tracer, record); });
    check(traced->y() == user->y(), "trace returned the wrong user");

    return t;
}

}  // namespace

std::string_view phase_label(Phase phase) { return kLabels[static_cast<std::size_t>(phase)]; }

void validate(const BenchCase& c) {
    if (c.d < 1 || c.d > c.n)
        throw Error("bench case " + std::to_string(c.n) + ":" + std::to_string(c.d) + ": need 1 <= d <= n");
    if (c.repetitions < 1) throw Error("bench: repetitions must be >= 1");
}

std::vector<BenchCase> parse_cases(std::string_view spec, std::size_t repetitions) {
    std::vector<BenchCase> out;
    std::istringstream in{std::string(spec)};
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("bench case '" + item + "': expected n:d");
        BenchCase c;
        try {
            std::size_t used = 0;
            c.n = std::stoul(item.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument("n");
            std::string d_part = item.substr(colon + 1);
            c.d = std::stoul(d_part, &used);
            if (used != d_part.size()) throw std::invalid_argument("d");
        } catch (const std::logic_error&) {
            throw Error("bench case '" + item + "': expected n:d");
        }
        c.repetitions = repetitions;
        validate(c);
        out.push_back(c);
    }
    if (out.empty()) throw Error("bench: no cases");
    return out;
}

double CaseResult::mean_ms(Phase phase) const {
    const auto& s = samples_ms[static_cast<std::size_t>(phase)];
    if (s.empty()) return 0.0;
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

BenchReport run_bench(std::span<const BenchCase> cases, std::size_t warmup, RandomSource& rng) {
    BenchReport report;
    report.warmup = warmup;
    std::ostringstream env;
    env << "curve BLS12-381 (blst), ";
#if defined(__clang__)
    env << "clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
    env << "gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#else
    env << "unknown compiler";
#endif
    env << ", single thread, sequential repetitions";
    report.environment = env.str();

    for (const auto& c : cases) {
        validate(c);
        CaseResult result;
        result.params = c;
        for (std::size_t i = 0; i < warmup; ++i) run_round(c, rng);
        for (std::size_t r = 0; r < c.repetitions; ++r) {
            auto t = run_round(c, rng);
            for (std::size_t p = 0; p < kPhaseCount; ++p) result.samples_ms[p].push_back(t[p]);
        }
        report.cases.push_back(std::move(result));
    }
    return report;
}

std::string render_report(const BenchReport& report) {
    std::string out = "Times(ms), mean per phase\n";
    out += "environment: " + report.environment + "\n";
    char buf[64];
    std::string header = "Phase";
    header.resize(24, ' ');
    out += header;
    for (const auto& c : report.cases) {
        std::snprintf(buf, sizeof buf, " | n=%zu,d=%zu", c.params.n, c.params.d);
        std::string col = buf;
        if (col.size() < 16) col.resize(16, ' ');
        out += col;
    }
    out += "\n";
    for (std::size_t p = 0; p < kPhaseCount; ++p) {
        std::string row(kLabels[p]);
        row.resize(24, ' ');
        for (const auto& c : report.cases) {
            std::snprintf(buf, sizeof buf, " | %13.3f", c.mean_ms(static_cast<Phase>(p)));
            row += buf;
        }
        out += row + "\n";
    }
    out += "repetitions:";
    for (const auto& c : report.cases) out += " " + std::to_string(c.params.repetitions);
    out += ", warm-up rounds: " + std::to_string(report.warmup) + "\n";
    return out;
}

}  // namespace pplist::bench
