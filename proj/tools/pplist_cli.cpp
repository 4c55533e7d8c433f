// pplist: command-line driver for the delivery lifecycle and the benchmark.
//
// Exit status: 0 success, 1 failure (including a rejected signature, proof
// or trace), 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pplist/aggregate.hpp"
#include "pplist/bench.hpp"
#include "pplist/groups.hpp"
#include "pplist/keys.hpp"
#include "pplist/pseudonym.hpp"
#include "pplist/registry.hpp"
#include "pplist/trace.hpp"

namespace fs = std::filesystem;
using namespace pplist;

namespace {

// Failure that should end the command with status 1 and a one-line reason.
struct Rejected {
    std::string reason;
};

std::string read_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw Error(std::string("unexpected end of input waiting for ") + what);
    return line;
}

void emit(const std::string& line) {
    std::cout << line << '\n';
    std::cout.flush();
}

PublicKey read_role_pub(const fs::path& path, Role role, const char* what) {
    PublicKey pk = read_public_key_file(path);
    require_role(pk.role(), role, what);
    return pk;
}

KeyPair read_role_key(const fs::path& path, Role role, const char* what) {
    KeyPair kp = read_key_file(path);
    require_role(kp.role(), role, what);
    return kp;
}

// ---- subcommands ----

void cmd_setup() {
    GroupParams p = setup();
    emit("curve: " + p.curve);
    emit("order: " + to_hex(p.order));
    emit("g1: " + p.g1.to_hex());
    emit("g2: " + p.g2.to_hex());
    emit("gt: " + to_hex(p.gt.to_bytes()));
    emit("h1: " + p.tag_h1);
    emit("h2: " + p.tag_h2);
    emit("h3: " + p.tag_h3);
}

void cmd_keygen(const std::string& role, const fs::path& out, const fs::path& pub_out) {
    KeyPair kp = KeyPair::generate(parse_role(role), system_random());
    write_text_file(out, format_key_file(kp));
    if (!pub_out.empty()) write_text_file(pub_out, format_public_key_file(kp.public_key()));
    emit(kp.y().to_hex());
}

void cmd_pseudonym(const fs::path& user, const fs::path& tracer_pub, const fs::path& message, const fs::path& out) {
    KeyPair u = read_key_file(user);
    Pseudonym p = derive_pseudonym(u, read_public_key_file(tracer_pub), read_binary_file(message));
    write_text_file(out, format_pseudonym_file(p));
}

void cmd_route(const fs::path& ledger_path, const fs::path& pseudonym, const fs::path& message,
               const std::vector<fs::path>& stations) {
    std::vector<PublicKey> route;
    route.reserve(stations.size());
    for (const auto& s : stations) route.push_back(read_role_pub(s, Role::station, "route"));
    Ledger ledger(ledger_path);
    auto id = ledger.create_record(parse_pseudonym_file(read_text_file(pseudonym)), read_binary_file(message), route);
    emit(std::to_string(id));
}

void cmd_sign(const fs::path& ledger_path, std::uint64_t id, const fs::path& station, std::size_t position,
              const fs::path& accumulate) {
    Ledger ledger(ledger_path);
    DeliveryRecord record = ledger.find_record(id);
    if (record.status == RecordStatus::delivered) throw Error("record " + std::to_string(id) + ": already delivered");
    KeyPair s = read_role_key(station, Role::station, "sign");
    RouteAggregate agg = record.route_aggregate();
    PartialSignature part = station_sign(s, agg, position, record.pseudonym, record.message);

    if (accumulate.empty()) {
        emit(format_partial_signature(part));
        return;
    }
    SignatureAccumulator acc = fs::exists(accumulate) ? SignatureAccumulator::from_text(read_text_file(accumulate))
                                                      : SignatureAccumulator(agg.size());
    if (acc.route_length() != agg.size())
        throw Error("accumulator is for a route of " + std::to_string(acc.route_length()) + ", record has " +
                    std::to_string(agg.size()));
    acc.absorb(part);
    write_text_file(accumulate, acc.to_text());
    if (!acc.complete()) {
        emit("signed position " + std::to_string(position) + " (" + std::to_string(acc.positions().size()) + "/" +
             std::to_string(agg.size()) + ")");
        return;
    }
    try {
        ledger.complete_record(id, acc.finish());
    } catch (const NotFound&) {
        throw;
    } catch (const Error& e) {
        throw Rejected{e.what()};
    }
    emit("record " + std::to_string(id) + " delivered");
}

void cmd_aggregate(const fs::path& ledger_path, std::uint64_t id, const std::vector<fs::path>& part_files) {
    Ledger ledger(ledger_path);
    DeliveryRecord record = ledger.find_record(id);
    std::vector<PartialSignature> parts;
    for (const auto& f : part_files) {
        std::istringstream in(read_text_file(f));
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) parts.push_back(parse_partial_signature(line));
    }
    AggregateSignature sigma = aggregate_signatures(parts, record.route.size());
    try {
        ledger.complete_record(id, sigma);
    } catch (const NotFound&) {
        throw;
    } catch (const Error& e) {
        throw Rejected{e.what()};
    }
    emit("record " + std::to_string(id) + " delivered");
}

void cmd_verify(const fs::path& ledger_path, std::uint64_t id) {
    Ledger ledger(ledger_path, LedgerOptions{false});
    DeliveryRecord record = ledger.find_record(id);
    if (!record.sigma) throw Rejected{"record " + std::to_string(id) + " not delivered"};
    Verdict v = verify_aggregate(*record.sigma, record.pseudonym, record.ya, record.message);
    if (!v) throw Rejected{v.reason};
    emit("valid");
}

void cmd_prove(const fs::path& user_path, const fs::path& tracer_pub_path, const fs::path& pseudonym_path,
               const fs::path& message, bool fiat_shamir, const std::string& context) {
    KeyPair user = read_key_file(user_path);
    PublicKey tracer_pub = read_public_key_file(tracer_pub_path);
    Pseudonym claimed = parse_pseudonym_file(read_text_file(pseudonym_path));
    Bytes m = read_binary_file(message);
    if (!(derive_pseudonym(user, tracer_pub, m) == claimed))
        throw Error("pseudonym does not belong to this user and message");

    if (fiat_shamir) {
        OwnershipTranscript t = prove_noninteractive(user, tracer_pub, m, system_random(), as_bytes(context));
        std::cout << format_transcript_file(t);
        std::cout.flush();
        return;
    }
    OwnershipCommitment state = prove_commit(user, tracer_pub, claimed, system_random());
    emit(format_commit_message(state));
    Scalar c = parse_challenge_message(read_line(std::cin, "challenge"));
    emit(format_response_message(prove_respond(state, c, user, m)));
}

void cmd_prove_verify(const fs::path& tracer_pub_path, const fs::path& pseudonym_path, bool fiat_shamir,
                      const fs::path& transcript, const std::string& context) {
    PublicKey tracer_pub = read_role_pub(tracer_pub_path, Role::tracer, "prove-verify");
    Pseudonym pseudonym = parse_pseudonym_file(read_text_file(pseudonym_path));

    Verdict v;
    if (fiat_shamir) {
        std::string text;
        if (transcript.empty() || transcript == "-") {
            std::ostringstream buf;
            buf << std::cin.rdbuf();
            text = buf.str();
        } else {
            text = read_text_file(transcript);
        }
        OwnershipTranscript t = parse_transcript_file(text);
        if (!(t.pseudonym == pseudonym)) throw Rejected{"transcript is for a different pseudonym"};
        v = verify_noninteractive(tracer_pub, t, as_bytes(context));
    } else {
        auto [v1, v2] = parse_commit_message(read_line(std::cin, "commitment"));
        Scalar c = challenge(system_random());
        emit(format_challenge_message(c));
        OwnershipResponse r = parse_response_message(read_line(std::cin, "response"));
        v = verify_proof(tracer_pub, {pseudonym, v1, v2, c, r.r1, r.r2});
    }
    if (!v) throw Rejected{"ownership proof rejected: " + v.reason};
    std::cerr << "accepted\n";
}

void cmd_trace(const fs::path& tracer_path, const fs::path& ledger_path, std::uint64_t id) {
    KeyPair tracer = read_key_file(tracer_path);
    Ledger ledger(ledger_path, LedgerOptions{false});
    DeliveryRecord record = ledger.find_record(id);
    try {
        emit(trace(tracer, record).y().to_hex());
    } catch (const Error& e) {
        if (std::string_view(e.what()).starts_with("untraceable")) throw Rejected{e.what()};
        throw;
    }
}

void cmd_bench(const std::string& cases, std::size_t reps, std::size_t warmup, const fs::path& out) {
    auto parsed = bench::parse_cases(cases, reps);
    bench::BenchReport report = bench::run_bench(parsed, warmup, system_random());
    std::string text = bench::render_report(report);
    if (!out.empty()) write_text_file(out, text);
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pplist: pseudonymous delivery records with route multi-signatures"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    fs::path user, tracer, tracer_pub, pseudonym, message, out, pub_out, ledger, station, accumulate, transcript;
    std::string role, context, cases = "20:10,100:50,200:100";
    std::vector<fs::path> stations, parts;
    std::uint64_t record = 0;
    std::size_t position = 0, reps = 10, warmup = 2;
    bool fiat_shamir = false;

    auto* setup_cmd = app.add_subcommand("setup", "Print the group parameters");

    auto* keygen = app.add_subcommand("keygen", "Generate a key pair; prints the public key");
    keygen->add_option("--role", role, "station, user or tracer")->required()->check(CLI::IsMember({"station", "user", "tracer"}));
    keygen->add_option("--out", out, "Key file")->required();
    keygen->add_option("--pub-out", pub_out, "Also write the public key file");

    auto* pseudonym_cmd = app.add_subcommand("pseudonym", "Derive the pseudonym for an order");
    pseudonym_cmd->add_option("--user", user)->required()->check(CLI::ExistingFile);
    pseudonym_cmd->add_option("--tracer-pub", tracer_pub)->required()->check(CLI::ExistingFile);
    pseudonym_cmd->add_option("--message-file", message)->required()->check(CLI::ExistingFile);
    pseudonym_cmd->add_option("--out", out)->required();

    auto* route = app.add_subcommand("route", "Record a route for an order; prints the record id");
    route->add_option("--ledger", ledger)->required();
    route->add_option("--pseudonym", pseudonym)->required()->check(CLI::ExistingFile);
    route->add_option("--message-file", message)->required()->check(CLI::ExistingFile);
    route->add_option("--stations", stations, "Station key files in delivery order")->required()->check(CLI::ExistingFile);

    auto* sign = app.add_subcommand("sign", "Sign as the station at a route position");
    sign->add_option("--ledger", ledger)->required()->check(CLI::ExistingFile);
    sign->add_option("--record", record)->required();
    sign->add_option("--station", station)->required()->check(CLI::ExistingFile);
    sign->add_option("--position", position, "1-based")->required()->check(CLI::PositiveNumber);
    sign->add_option("--accumulate", accumulate, "Running signature file; completes the record when full");

    auto* aggregate = app.add_subcommand("aggregate", "Combine partial signatures and complete the record");
    aggregate->add_option("--ledger", ledger)->required()->check(CLI::ExistingFile);
    aggregate->add_option("--record", record)->required();
    aggregate->add_option("--parts", parts, "Files of 'position signature' lines")->required()->check(CLI::ExistingFile);

    auto* verify = app.add_subcommand("verify", "Check a record's aggregate signature");
    verify->add_option("--ledger", ledger)->required()->check(CLI::ExistingFile);
    verify->add_option("--record", record)->required();

    auto* prove = app.add_subcommand("prove", "Prove pseudonym ownership over stdin/stdout");
    prove->add_option("--user", user)->required()->check(CLI::ExistingFile);
    prove->add_option("--tracer-pub", tracer_pub)->required()->check(CLI::ExistingFile);
    prove->add_option("--pseudonym", pseudonym)->required()->check(CLI::ExistingFile);
    prove->add_option("--message-file", message)->required()->check(CLI::ExistingFile);
    prove->add_flag("--fiat-shamir", fiat_shamir, "Write a non-interactive transcript instead");
    prove->add_option("--context", context, "Bound into the Fiat-Shamir challenge");

    auto* prove_verify = app.add_subcommand("prove-verify", "Verify an ownership proof over stdin/stdout");
    prove_verify->add_option("--tracer-pub", tracer_pub)->required()->check(CLI::ExistingFile);
    prove_verify->add_option("--pseudonym", pseudonym)->required()->check(CLI::ExistingFile);
    prove_verify->add_flag("--fiat-shamir", fiat_shamir, "Read a transcript instead of running the protocol");
    prove_verify->add_option("--transcript", transcript, "Transcript file (default stdin)");
    prove_verify->add_option("--context", context);

    auto* trace_cmd = app.add_subcommand("trace", "Open a delivered record's pseudonym; prints the user key");
    trace_cmd->add_option("--tracer", tracer)->required()->check(CLI::ExistingFile);
    trace_cmd->add_option("--ledger", ledger)->required()->check(CLI::ExistingFile);
    trace_cmd->add_option("--record", record)->required();

    auto* bench_cmd = app.add_subcommand("bench", "Time every phase for (n, d) cases");
    bench_cmd->add_option("--cases", cases, "n:d pairs")
        ->capture_default_str()
        ->check(CLI::Validator(
            [](std::string& spec) {
                try {
                    bench::parse_cases(spec, 1);
                } catch (const Error& e) {
                    return std::string(e.what());
                }
                return std::string();
            },
            "N:D[,N:D...]"));
    bench_cmd->add_option("--reps", reps)->capture_default_str()->check(CLI::PositiveNumber);
    bench_cmd->add_option("--warmup", warmup)->capture_default_str();
    bench_cmd->add_option("--out", out, "Also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*setup_cmd) cmd_setup();
        else if (*keygen) cmd_keygen(role, out, pub_out);
        else if (*pseudonym_cmd) cmd_pseudonym(user, tracer_pub, message, out);
        else if (*route) cmd_route(ledger, pseudonym, message, stations);
        else if (*sign) cmd_sign(ledger, record, station, position, accumulate);
        else if (*aggregate) cmd_aggregate(ledger, record, parts);
        else if (*verify) cmd_verify(ledger, record);
        else if (*prove) cmd_prove(user, tracer_pub, pseudonym, message, fiat_shamir, context);
        else if (*prove_verify) cmd_prove_verify(tracer_pub, pseudonym, fiat_shamir, transcript, context);
        else if (*trace_cmd) cmd_trace(tracer, ledger, record);
        else if (*bench_cmd) cmd_bench(cases, reps, warmup, out);
    } catch (const Rejected& r) {
        std::cerr << r.reason << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "pplist: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
