#ifndef PPLIST_AGGREGATE_HPP
#define PPLIST_AGGREGATE_HPP

// Multi-signature over a delivery route with rogue-key resistant key
// aggregation: h_i = H2(Y_i, AgY), YA = sum_i Y_i * h_i,
// Sig_i = H1(C1, C2, m) * (h_i * x_i), sigma = sum_i Sig_i.
//
// Positions are 1-based throughout (position i signs with route[i - 1]).

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pplist/groups.hpp"
#include "pplist/keys.hpp"
#include "pplist/pseudonym.hpp"
#include "pplist/verdict.hpp"

namespace pplist {

struct RouteAggregate {
    std::vector<G2> route;  // AgY in delivery order
    std::vector<Scalar> coefficients;
    G2 ya;

    std::size_t size() const { return route.size(); }
};

/// Throws Error for an empty route or a non-station key.
RouteAggregate aggregate_keys(std::span<const PublicKey> route);
RouteAggregate aggregate_keys(std::span<const G2> route);
/// YA computed from caller-supplied coefficients instead of H2.
RouteAggregate aggregate_keys_with_coefficients(std::span<const G2> route, std::span<const Scalar> coefficients);
/// Recomputes h_i and YA from the route.
bool route_aggregate_is_consistent(const RouteAggregate& agg);

struct PartialSignature {
    std::size_t position = 0;
    G1 sig;
};

struct AggregateSignature {
    G1 sigma;

    friend bool operator==(const AggregateSignature& a, const AggregateSignature& b) { return a.sigma == b.sigma; }
};

/// Throws Error "station not at position" when station's key differs from
/// route[position - 1], and for a position outside 1..d.
PartialSignature station_sign(const KeyPair& station, const RouteAggregate& agg, std::size_t position,
                              const Pseudonym& pseudonym, ByteView m);

/// Needs exactly one part for each position 1..d; otherwise throws Error
/// listing the missing and duplicated positions.
AggregateSignature aggregate_signatures(std::span<const PartialSignature> parts, std::size_t d);

/// Running product handed from station to station along the route.
class SignatureAccumulator {
public:
    explicit SignatureAccumulator(std::size_t d);

    /// Throws Error for an out-of-range or already absorbed position.
    void absorb(const PartialSignature& part);
    bool complete() const { return positions_.size() == d_; }
    std::size_t route_length() const { return d_; }
    const std::set<std::size_t>& positions() const { return positions_; }
    const G1& running() const { return running_; }
    /// Throws Error naming missing positions if incomplete.
    AggregateSignature finish() const;

    // "d: <n>", "positions: <i> <j> ...", "sigma: <hex>"
    std::string to_text() const;
    static SignatureAccumulator from_text(std::string_view text);

private:
    std::size_t d_;
    std::set<std::size_t> positions_;
    G1 running_;
};

/// e(sigma, g2^-1) * e(H1(C1, C2, m), YA) == 1.
Verdict verify_aggregate(const AggregateSignature& sig, const Pseudonym& pseudonym, const G2& ya, ByteView m);

/// e(Sig_i, g2) == e(H1(C1, C2, m), Y_i * h_i). Debug aid for localizing a
/// bad station in a failing chain.
Verdict verify_partial(const PartialSignature& part, const RouteAggregate& agg, const Pseudonym& pseudonym,
                       ByteView m);

/// "position sig_hex"
std::string format_partial_signature(const PartialSignature& part);
PartialSignature parse_partial_signature(std::string_view line);

}  // namespace pplist

#endif  // PPLIST_AGGREGATE_HPP
