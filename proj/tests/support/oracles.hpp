#ifndef PPLIST_TESTS_ORACLES_HPP
#define PPLIST_TESTS_ORACLES_HPP

// Reference computations that avoid the code paths under test: small
// exponents are applied by repeated group addition instead of scalar
// multiplication, and witnesses are recovered from transcripts with plain
// field arithmetic.

#include <cstdint>
#include <stdexcept>

#include "pplist/groups.hpp"
#include "pplist/pseudonym.hpp"

namespace pplist::oracle {

/// P added to itself e times (identity for e = 0).
template <class Point>
Point repeated_add(const Point& p, std::uint64_t e) {
    Point acc;
    for (std::uint64_t i = 0; i < e; ++i) acc = acc + p;
    return acc;
}

struct Witness {
    Scalar k;
    Scalar user_secret;
};

/// Two accepting transcripts on one commitment with distinct challenges
/// determine (k, x_u): k = (r1 - r1') / (c' - c), x_u = (r2 - r2') / (c' - c).
inline Witness extract_witness(const OwnershipTranscript& a, const OwnershipTranscript& b) {
    if (!(a.v1 == b.v1) || !(a.v2 == b.v2)) throw std::invalid_argument("transcripts use different commitments");
    if (a.c == b.c) throw std::invalid_argument("challenges must differ");
    const Scalar denom_inv = (b.c - a.c).inverse();
    return {(a.r1 - b.r1) * denom_inv, (a.r2 - b.r2) * denom_inv};
}

}  // namespace pplist::oracle

#endif  // PPLIST_TESTS_ORACLES_HPP
