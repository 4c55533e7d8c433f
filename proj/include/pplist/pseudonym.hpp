#ifndef PPLIST_PSEUDONYM_HPP
#define PPLIST_PSEUDONYM_HPP

// Order-bound pseudonyms (C1, C2) = (g2^k, Y_t^k * g2^x_u) with
// k = H3(x_u || m), and the three-move proof of knowledge of (k, x_u).

#include <string>
#include <string_view>
#include <utility>

#include "pplist/groups.hpp"
#include "pplist/keys.hpp"
#include "pplist/verdict.hpp"

namespace pplist {

struct Pseudonym {
    G2 c1;
    G2 c2;

    friend bool operator==(const Pseudonym& a, const Pseudonym& b) { return a.c1 == b.c1 && a.c2 == b.c2; }
};

/// k = H3(x_u, m). If that is zero, rehashes over m || ctr for
/// ctr = 0, 1, ... until non-zero.
Scalar derive_order_secret(const Scalar& user_secret, ByteView m);

/// Throws Error unless user has role user and tracer_pub role tracer.
Pseudonym derive_pseudonym(const KeyPair& user, const PublicKey& tracer_pub, ByteView m);

/// C1 = g2 * k, C2 = tracer_y * k + g2 * user_secret, with k supplied.
Pseudonym pseudonym_from_exponents(const G2& tracer_y, const Scalar& k, const Scalar& user_secret);

/// "c1: <hex>" / "c2: <hex>". Parsing rejects identity components.
std::string format_pseudonym_file(const Pseudonym& p);
Pseudonym parse_pseudonym_file(std::string_view text);

struct OwnershipResponse;

/// First prover message (V1, V2) plus the prover's secret nonces. Move-only
/// and single-use: prove_respond consumes it.
class OwnershipCommitment {
public:
    OwnershipCommitment(OwnershipCommitment&& other) noexcept;
    OwnershipCommitment& operator=(OwnershipCommitment&& other) noexcept;
    OwnershipCommitment(const OwnershipCommitment&) = delete;
    OwnershipCommitment& operator=(const OwnershipCommitment&) = delete;
    ~OwnershipCommitment();

    const G2& v1_point() const { return v1_point_; }
    const G2& v2_point() const { return v2_point_; }
    bool consumed() const { return consumed_; }

private:
    OwnershipCommitment(const Scalar& v1, const Scalar& v2, const G2& tracer_y);

    Scalar v1_;
    Scalar v2_;
    G2 v1_point_;
    G2 v2_point_;
    bool consumed_ = false;

    friend OwnershipCommitment prove_commit_with(const PublicKey&, const Scalar&, const Scalar&);
    friend OwnershipResponse prove_respond(OwnershipCommitment&, const Scalar&, const KeyPair&, ByteView);
};

struct OwnershipResponse {
    Scalar r1;
    Scalar r2;
};

struct OwnershipTranscript {
    Pseudonym pseudonym;
    G2 v1;
    G2 v2;
    Scalar c;
    Scalar r1;
    Scalar r2;
};

/// Step 1: fresh v1, v2; V1 = g2^v1, V2 = Y_t^v1 * g2^v2.
OwnershipCommitment prove_commit(const KeyPair& user, const PublicKey& tracer_pub, const Pseudonym& pseudonym,
                                 RandomSource& rng);
/// Step 1 with chosen nonces.
OwnershipCommitment prove_commit_with(const PublicKey& tracer_pub, const Scalar& v1, const Scalar& v2);

/// Step 2: verifier's uniform challenge.
Scalar challenge(RandomSource& rng);

/// Step 3: r1 = v1 - c*k, r2 = v2 - c*x_u. Throws Error
/// "commitment already consumed" on a second call.
OwnershipResponse prove_respond(OwnershipCommitment& state, const Scalar& c, const KeyPair& user, ByteView m);

/// Step 4: V1 == g2^r1 * C1^c and V2 == Y_t^r1 * g2^r2 * C2^c.
Verdict verify_proof(const PublicKey& tracer_pub, const OwnershipTranscript& t);

/// Witness-free transcript for a challenge fixed in advance.
OwnershipTranscript simulate_transcript(const PublicKey& tracer_pub, const Pseudonym& pseudonym, const Scalar& c,
                                        RandomSource& rng);

// Non-interactive variant: c = H(TAG_FS || C1 || C2 || V1 || V2 || context).
Scalar fiat_shamir_challenge(const Pseudonym& pseudonym, const G2& v1, const G2& v2, ByteView context);
OwnershipTranscript prove_noninteractive(const KeyPair& user, const PublicKey& tracer_pub, ByteView m,
                                         RandomSource& rng, ByteView context = {});
/// Checks that c is the Fiat-Shamir challenge, then verify_proof.
Verdict verify_noninteractive(const PublicKey& tracer_pub, const OwnershipTranscript& t, ByteView context = {});

// Transcript file: c1, c2, v1, v2, c, r1, r2 as "name: <hex>" lines.
std::string format_transcript_file(const OwnershipTranscript& t);
OwnershipTranscript parse_transcript_file(std::string_view text);

// Interactive wire messages, one line each without the trailing newline.
std::string format_commit_message(const OwnershipCommitment& commitment);
std::pair<G2, G2> parse_commit_message(std::string_view line);
std::string format_challenge_message(const Scalar& c);
Scalar parse_challenge_message(std::string_view line);
std::string format_response_message(const OwnershipResponse& response);
OwnershipResponse parse_response_message(std::string_view line);

}  // namespace pplist

#endif  // PPLIST_PSEUDONYM_HPP
