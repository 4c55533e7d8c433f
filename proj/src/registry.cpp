#include "pplist/registry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pplist {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

std::string record_tag(std::uint64_t id) { return "record " + std::to_string(id); }

}  // namespace

std::string_view status_name(RecordStatus status) {
    return status == RecordStatus::delivered ? "delivered" : "routed";
}

RouteAggregate DeliveryRecord::route_aggregate() const {
    RouteAggregate agg = aggregate_keys(std::span<const G2>(route));
    if (!(agg.ya == ya)) throw Error(record_tag(id) + ": ya does not match route");
    return agg;
}

bool operator==(const DeliveryRecord& a, const DeliveryRecord& b) {
    return a.id == b.id && a.status == b.status && a.pseudonym == b.pseudonym && a.message == b.message &&
           a.route == b.route && a.ya == b.ya && a.sigma == b.sigma;
}

std::string format_record_line(const DeliveryRecord& r) {
    std::string line;
    line += std::to_string(r.id);
    line += '\t';
    line += status_name(r.status);
    line += '\t';
    line += r.pseudonym.c1.to_hex();
    line += '\t';
    line += r.pseudonym.c2.to_hex();
    line += '\t';
    line += to_hex(r.message);
    line += '\t';
    line += std::to_string(r.route.size());
    line += '\t';
    for (std::size_t i = 0; i < r.route.size(); ++i) {
        if (i) line += ' ';
        line += r.route[i].to_hex();
    }
    line += '\t';
    line += r.ya.to_hex();
    line += '\t';
    line += r.sigma ? r.sigma->sigma.to_hex() : "-";
    return line;
}

DeliveryRecord parse_record_line(std::string_view line) {
    auto f = split(line, '\t');
    if (f.size() != 9) throw Error("expected 9 tab-separated fields, got " + std::to_string(f.size()));
    DeliveryRecord r;
    r.id = parse_u64(f[0], "record id");
    if (f[1] == "routed")
        r.status = RecordStatus::routed;
    else if (f[1] == "delivered")
        r.status = RecordStatus::delivered;
    else
        throw Error("bad status '" + std::string(f[1]) + "'");
    r.pseudonym = {G2::from_hex(f[2]), G2::from_hex(f[3])};
    r.message = from_hex(f[4]);
    const std::uint64_t d = parse_u64(f[5], "route length");
    if (d == 0) throw Error("empty route");
    auto keys = split(f[6], ' ');
    if (keys.size() != d)
        throw Error("route length " + std::to_string(d) + " but " + std::to_string(keys.size()) + " keys");
    r.route.reserve(keys.size());
    for (auto k : keys) r.route.push_back(G2::from_hex(k));
    r.ya = G2::from_hex(f[7]);
    if (f[8] != "-") r.sigma = AggregateSignature{G1::from_hex(f[8])};
    return r;
}

Ledger::Ledger(std::filesystem::path path, LedgerOptions options) : path_(std::move(path)), options_(options) {
    if (!std::filesystem::exists(path_)) {
        std::ofstream create(path_, std::ios::binary);
        if (!create) throw Error("cannot create ledger " + path_.string());
        return;
    }
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error("cannot open ledger " + path_.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        DeliveryRecord r;
        try {
            r = parse_record_line(line);
        } catch (const Error& e) {
            throw Error("ledger line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!records_.empty() && r.id <= records_.back().id)
            throw Error(record_tag(r.id) + ": id not greater than previous record " +
                        std::to_string(records_.back().id));
        if ((r.status == RecordStatus::delivered) != r.sigma.has_value())
            throw Error(record_tag(r.id) + ": status " + std::string(status_name(r.status)) +
                        (r.sigma ? " with" : " without") + " a signature");
        r.route_aggregate();  // throws on ya mismatch
        if (options_.strict && r.sigma && !verify_aggregate(*r.sigma, r.pseudonym, r.ya, r.message))
            throw Error(record_tag(r.id) + ": invalid aggregate signature");
        records_.push_back(std::move(r));
    }
}

void Ledger::append_line(const std::string& line) {
    const auto old_size = std::filesystem::file_size(path_);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (out) {
        out << line << '\n';
        out.flush();
    }
    if (!out) {
        out.close();
        std::error_code ec;
        std::filesystem::resize_file(path_, old_size, ec);
        throw Error("ledger: append to " + path_.string() + " failed");
    }
}

void Ledger::rewrite(const std::vector<DeliveryRecord>& records) {
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        for (const auto& r : records) out << format_record_line(r) << '\n';
        out.flush();
        if (!out) throw Error("ledger: write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) throw Error("ledger: replace " + path_.string() + " failed: " + ec.message());
}

std::uint64_t Ledger::create_record(const Pseudonym& pseudonym, ByteView m, std::span<const PublicKey> route) {
    for (const auto& pk : route) require_role(pk.role(), Role::station, "route");
    std::vector<G2> keys;
    keys.reserve(route.size());
    for (const auto& pk : route) keys.push_back(pk.y());
    return create_record(pseudonym, m, keys);
}

std::uint64_t Ledger::create_record(const Pseudonym& pseudonym, ByteView m, std::span<const G2> route) {
    RouteAggregate agg = aggregate_keys(route);
    std::lock_guard lock(mu_);
    DeliveryRecord r;
    r.id = records_.empty() ? 0 : records_.back().id + 1;
    r.status = RecordStatus::routed;
    r.pseudonym = pseudonym;
    r.message.assign(m.begin(), m.end());
    r.route = std::move(agg.route);
    r.ya = agg.ya;
    append_line(format_record_line(r));
    records_.push_back(std::move(r));
    return records_.back().id;
}

void Ledger::complete_record(std::uint64_t id, const AggregateSignature& sigma) {
    std::lock_guard lock(mu_);
    auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.id == id; });
    if (it == records_.end()) throw NotFound(record_tag(id) + ": not found");
    if (it->status == RecordStatus::delivered) throw Error(record_tag(id) + ": already delivered");
    if (options_.strict && !verify_aggregate(sigma, it->pseudonym, it->ya, it->message))
        throw Error(record_tag(id) + ": invalid aggregate signature");
    auto updated = records_;
    auto& r = updated[static_cast<std::size_t>(it - records_.begin())];
    r.status = RecordStatus::delivered;
    r.sigma = sigma;
    rewrite(updated);
    records_ = std::move(updated);
}

DeliveryRecord Ledger::find_record(std::uint64_t id) const {
    std::lock_guard lock(mu_);
    auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.id == id; });
    if (it == records_.end()) throw NotFound(record_tag(id) + ": not found");
    return *it;
}

std::vector<DeliveryRecord> Ledger::find_records(const Pseudonym& pseudonym, ByteView m) const {
    std::lock_guard lock(mu_);
    std::vector<DeliveryRecord> out;
    for (const auto& r : records_)
        if (r.pseudonym == pseudonym && std::equal(r.message.begin(), r.message.end(), m.begin(), m.end()))
            out.push_back(r);
    if (out.empty()) throw NotFound("no record for this pseudonym and message");
    return out;
}

std::vector<DeliveryRecord> Ledger::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t Ledger::size() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

}  // namespace pplist
