#include "pplist/aggregate.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "text_fields.hpp"

namespace pplist {

namespace {

std::string join_positions(const std::vector<std::size_t>& positions) {
    std::string out;
    for (auto p : positions) {
        if (!out.empty()) out += ",";
        out += std::to_string(p);
    }
    return out;
}

std::size_t parse_position(std::string_view word, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size())
        throw Error(std::string(what) + ": bad position '" + std::string(word) + "'");
    return value;
}

}  // namespace

RouteAggregate aggregate_keys(std::span<const PublicKey> route) {
    std::vector<G2> keys;
    keys.reserve(route.size());
    for (const auto& pk : route) {
        require_role(pk.role(), Role::station, "route");
        keys.push_back(pk.y());
    }
    return aggregate_keys(keys);
}

RouteAggregate aggregate_keys(std::span<const G2> route) {
    if (route.empty()) throw Error("route: empty key set");
    Bytes encoded = encode_key_list(route);
    std::vector<Scalar> coefficients;
    coefficients.reserve(route.size());
    for (const auto& y : route) coefficients.push_back(hash_h2_encoded(y, encoded));
    return aggregate_keys_with_coefficients(route, coefficients);
}

RouteAggregate aggregate_keys_with_coefficients(std::span<const G2> route, std::span<const Scalar> coefficients) {
    if (route.empty()) throw Error("route: empty key set");
    if (route.size() != coefficients.size()) throw Error("route: coefficient count does not match route length");
    RouteAggregate agg;
    agg.route.assign(route.begin(), route.end());
    agg.coefficients.assign(coefficients.begin(), coefficients.end());
    for (std::size_t i = 0; i < route.size(); ++i) {
        if (route[i].is_identity()) throw Error("route: identity key at position " + std::to_string(i + 1));
        agg.ya += route[i] * coefficients[i];
    }
    return agg;
}

bool route_aggregate_is_consistent(const RouteAggregate& agg) {
    if (agg.route.empty()) return false;
    RouteAggregate again = aggregate_keys(std::span<const G2>(agg.route));
    if (!(again.ya == agg.ya) || again.coefficients.size() != agg.coefficients.size()) return false;
    for (std::size_t i = 0; i < again.coefficients.size(); ++i)
        if (!(again.coefficients[i] == agg.coefficients[i])) return false;
    return true;
}

PartialSignature station_sign(const KeyPair& station, const RouteAggregate& agg, std::size_t position,
                              const Pseudonym& pseudonym, ByteView m) {
    require_role(station.role(), Role::station, "sign");
    if (position < 1 || position > agg.size())
        throw Error("position " + std::to_string(position) + " outside route of length " +
                    std::to_string(agg.size()));
    if (!(agg.route[position - 1] == station.y())) throw Error("station not at position " + std::to_string(position));
    const Scalar exponent = agg.coefficients[position - 1] * station.secret();
    return {position, hash_h1(pseudonym.c1, pseudonym.c2, m) * exponent};
}

AggregateSignature aggregate_signatures(std::span<const PartialSignature> parts, std::size_t d) {
    std::map<std::size_t, std::size_t> seen;
    for (const auto& p : parts) ++seen[p.position];
    std::vector<std::size_t> missing, duplicate, unexpected;
    for (std::size_t i = 1; i <= d; ++i) {
        auto it = seen.find(i);
        if (it == seen.end())
            missing.push_back(i);
        else if (it->second > 1)
            duplicate.push_back(i);
    }
    for (const auto& [pos, count] : seen)
        if (pos < 1 || pos > d) unexpected.push_back(pos);
    if (!missing.empty() || !duplicate.empty() || !unexpected.empty()) {
        std::string msg = "aggregate: bad partial signature set";
        if (!missing.empty()) msg += "; missing positions " + join_positions(missing);
        if (!duplicate.empty()) msg += "; duplicate positions " + join_positions(duplicate);
        if (!unexpected.empty()) msg += "; out-of-range positions " + join_positions(unexpected);
        throw Error(msg);
    }
    AggregateSignature out;
    for (const auto& p : parts) out.sigma += p.sig;
    return out;
}

SignatureAccumulator::SignatureAccumulator(std::size_t d) : d_(d) {
    if (d == 0) throw Error("accumulator: empty route");
}

void SignatureAccumulator::absorb(const PartialSignature& part) {
    if (part.position < 1 || part.position > d_)
        throw Error("accumulator: position " + std::to_string(part.position) + " outside route of length " +
                    std::to_string(d_));
    if (!positions_.insert(part.position).second)
        throw Error("accumulator: position " + std::to_string(part.position) + " already signed");
    running_ += part.sig;
}

AggregateSignature SignatureAccumulator::finish() const {
    if (!complete()) {
        std::vector<std::size_t> missing;
        for (std::size_t i = 1; i <= d_; ++i)
            if (!positions_.count(i)) missing.push_back(i);
        throw Error("accumulator: missing positions " + join_positions(missing));
    }
    return {running_};
}

std::string SignatureAccumulator::to_text() const {
    std::string out = "d: " + std::to_string(d_) + "\npositions:";
    for (auto p : positions_) out += " " + std::to_string(p);
    out += "\nsigma: " + running_.to_hex() + "\n";
    return out;
}

SignatureAccumulator SignatureAccumulator::from_text(std::string_view text) {
    constexpr std::string_view what = "accumulator file";
    auto fields = detail::parse_fields(text, what);
    SignatureAccumulator acc(parse_position(detail::field(fields, "d", what), "accumulator"));
    std::istringstream words(detail::field(fields, "positions", what));
    std::string w;
    while (words >> w) {
        auto pos = parse_position(w, "accumulator");
        if (pos < 1 || pos > acc.d_ || !acc.positions_.insert(pos).second)
            throw Error("accumulator file: bad position list");
    }
    acc.running_ = G1::from_hex(detail::field(fields, "sigma", what));
    return acc;
}

Verdict verify_aggregate(const AggregateSignature& sig, const Pseudonym& pseudonym, const G2& ya, ByteView m) {
    if (pseudonym.c1.is_identity() || pseudonym.c2.is_identity())
        return Verdict::reject("pseudonym has an identity component");
    if (ya.is_identity()) return Verdict::reject("aggregated key is the identity");
    const std::pair<G1, G2> pairs[] = {
        {sig.sigma, -G2::generator()},
        {hash_h1(pseudonym.c1, pseudonym.c2, m), ya},
    };
    if (!pairing_product_is_identity(pairs)) return Verdict::reject("invalid aggregate signature");
    return Verdict::accept();
}

Verdict verify_partial(const PartialSignature& part, const RouteAggregate& agg, const Pseudonym& pseudonym,
                       ByteView m) {
    if (part.position < 1 || part.position > agg.size())
        return Verdict::reject("position " + std::to_string(part.position) + " outside route");
    const std::size_t i = part.position - 1;
    const std::pair<G1, G2> pairs[] = {
        {part.sig, -G2::generator()},
        {hash_h1(pseudonym.c1, pseudonym.c2, m), agg.route[i] * agg.coefficients[i]},
    };
    if (!pairing_product_is_identity(pairs))
        return Verdict::reject("invalid partial signature at position " + std::to_string(part.position));
    return Verdict::accept();
}

std::string format_partial_signature(const PartialSignature& part) {
    return std::to_string(part.position) + " " + part.sig.to_hex();
}

PartialSignature parse_partial_signature(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string pos, hex, extra;
    if (!(in >> pos >> hex) || (in >> extra)) throw Error("partial signature: expected 'position sig_hex'");
    PartialSignature part{parse_position(pos, "partial signature"), G1::from_hex(hex)};
    if (part.position == 0) throw Error("partial signature: positions start at 1");
    return part;
}

}  // namespace pplist
