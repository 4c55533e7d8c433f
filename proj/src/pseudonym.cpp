#include "pplist/pseudonym.hpp"

#include <sstream>
#include <vector>

#include "text_fields.hpp"

namespace pplist {

namespace {

std::vector<std::string> split_words(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

void require_word_count(const std::vector<std::string>& words, std::size_t n, const char* what) {
    if (words.size() != n)
        throw Error(std::string(what) + " message: expected " + std::to_string(n) + " hex fields, got " +
                    std::to_string(words.size()));
}

}  // namespace

Scalar derive_order_secret(const Scalar& user_secret, ByteView m) {
    Scalar k = hash_h3(user_secret, m);
    if (!k.is_zero()) return k;
    Bytes salted(m.begin(), m.end());
    salted.push_back(0);
    for (unsigned ctr = 0;; ++ctr) {
        salted.back() = static_cast<std::uint8_t>(ctr);
        k = hash_h3(user_secret, salted);
        if (!k.is_zero()) return k;
        if (ctr == 0xff) salted.push_back(0);
    }
}

Pseudonym pseudonym_from_exponents(const G2& tracer_y, const Scalar& k, const Scalar& user_secret) {
    const G2 g2 = G2::generator();
    return {g2 * k, tracer_y * k + g2 * user_secret};
}

Pseudonym derive_pseudonym(const KeyPair& user, const PublicKey& tracer_pub, ByteView m) {
    require_role(user.role(), Role::user, "pseudonym");
    require_role(tracer_pub.role(), Role::tracer, "pseudonym");
    Scalar k = derive_order_secret(user.secret(), m);
    return pseudonym_from_exponents(tracer_pub.y(), k, user.secret());
}

std::string format_pseudonym_file(const Pseudonym& p) {
    return "c1: " + p.c1.to_hex() + "\nc2: " + p.c2.to_hex() + "\n";
}

Pseudonym parse_pseudonym_file(std::string_view text) {
    auto fields = detail::parse_fields(text, "pseudonym file");
    Pseudonym p{G2::from_hex(detail::field(fields, "c1", "pseudonym file")),
                G2::from_hex(detail::field(fields, "c2", "pseudonym file"))};
    if (p.c1.is_identity() || p.c2.is_identity()) throw Error("pseudonym file: identity component");
    return p;
}

// ---- ownership proof ----

OwnershipCommitment::OwnershipCommitment(const Scalar& v1, const Scalar& v2, const G2& tracer_y)
    : v1_(v1), v2_(v2) {
    const G2 g2 = G2::generator();
    v1_point_ = g2 * v1;
    v2_point_ = tracer_y * v1 + g2 * v2;
}

OwnershipCommitment::OwnershipCommitment(OwnershipCommitment&& other) noexcept
    : v1_(other.v1_),
      v2_(other.v2_),
      v1_point_(other.v1_point_),
      v2_point_(other.v2_point_),
      consumed_(other.consumed_) {
    other.v1_ = Scalar();
    other.v2_ = Scalar();
    other.consumed_ = true;
}

OwnershipCommitment& OwnershipCommitment::operator=(OwnershipCommitment&& other) noexcept {
    if (this != &other) {
        v1_ = other.v1_;
        v2_ = other.v2_;
        v1_point_ = other.v1_point_;
        v2_point_ = other.v2_point_;
        consumed_ = other.consumed_;
        other.v1_ = Scalar();
        other.v2_ = Scalar();
        other.consumed_ = true;
    }
    return *this;
}

OwnershipCommitment::~OwnershipCommitment() {
    v1_ = Scalar();
    v2_ = Scalar();
}

OwnershipCommitment prove_commit(const KeyPair& user, const PublicKey& tracer_pub, const Pseudonym& pseudonym,
                                 RandomSource& rng) {
    require_role(user.role(), Role::user, "prove");
    if (pseudonym.c1.is_identity() || pseudonym.c2.is_identity()) throw Error("prove: identity pseudonym");
    return prove_commit_with(tracer_pub, Scalar::random(rng), Scalar::random(rng));
}

OwnershipCommitment prove_commit_with(const PublicKey& tracer_pub, const Scalar& v1, const Scalar& v2) {
    require_role(tracer_pub.role(), Role::tracer, "prove");
    return OwnershipCommitment(v1, v2, tracer_pub.y());
}

Scalar challenge(RandomSource& rng) { return Scalar::random(rng); }

OwnershipResponse prove_respond(OwnershipCommitment& state, const Scalar& c, const KeyPair& user, ByteView m) {
    if (state.consumed_) throw Error("commitment already consumed");
    require_role(user.role(), Role::user, "prove");
    state.consumed_ = true;
    Scalar k = derive_order_secret(user.secret(), m);
    OwnershipResponse out{state.v1_ - c * k, state.v2_ - c * user.secret()};
    state.v1_ = Scalar();
    state.v2_ = Scalar();
    return out;
}

Verdict verify_proof(const PublicKey& tracer_pub, const OwnershipTranscript& t) {
    if (tracer_pub.role() != Role::tracer) return Verdict::reject("verifier key is not a tracer key");
    if (t.pseudonym.c1.is_identity() || t.pseudonym.c2.is_identity())
        return Verdict::reject("pseudonym has an identity component");
    const G2 g2 = G2::generator();
    if (!(t.v1 == g2 * t.r1 + t.pseudonym.c1 * t.c)) return Verdict::reject("V1 != g2^r1 * C1^c");
    if (!(t.v2 == tracer_pub.y() * t.r1 + g2 * t.r2 + t.pseudonym.c2 * t.c))
        return Verdict::reject("V2 != Y_t^r1 * g2^r2 * C2^c");
    return Verdict::accept();
}

OwnershipTranscript simulate_transcript(const PublicKey& tracer_pub, const Pseudonym& pseudonym, const Scalar& c,
                                        RandomSource& rng) {
    const G2 g2 = G2::generator();
    OwnershipTranscript t;
    t.pseudonym = pseudonym;
    t.c = c;
    t.r1 = Scalar::random(rng);
    t.r2 = Scalar::random(rng);
    t.v1 = g2 * t.r1 + pseudonym.c1 * c;
    t.v2 = tracer_pub.y() * t.r1 + g2 * t.r2 + pseudonym.c2 * c;
    return t;
}

Scalar fiat_shamir_challenge(const Pseudonym& pseudonym, const G2& v1, const G2& v2, ByteView context) {
    Bytes payload;
    for (const G2* p : {&pseudonym.c1, &pseudonym.c2, &v1, &v2}) {
        auto enc = p->to_bytes();
        payload.insert(payload.end(), enc.begin(), enc.end());
    }
    append_length_prefixed(payload, context);
    return hash_to_scalar(kTagFiatShamir, payload);
}

OwnershipTranscript prove_noninteractive(const KeyPair& user, const PublicKey& tracer_pub, ByteView m,
                                         RandomSource& rng, ByteView context) {
    OwnershipTranscript t;
    t.pseudonym = derive_pseudonym(user, tracer_pub, m);
    auto commitment = prove_commit(user, tracer_pub, t.pseudonym, rng);
    t.v1 = commitment.v1_point();
    t.v2 = commitment.v2_point();
    t.c = fiat_shamir_challenge(t.pseudonym, t.v1, t.v2, context);
    auto response = prove_respond(commitment, t.c, user, m);
    t.r1 = response.r1;
    t.r2 = response.r2;
    return t;
}

Verdict verify_noninteractive(const PublicKey& tracer_pub, const OwnershipTranscript& t, ByteView context) {
    if (!(t.c == fiat_shamir_challenge(t.pseudonym, t.v1, t.v2, context)))
        return Verdict::reject("challenge is not the Fiat-Shamir hash of the commitment");
    return verify_proof(tracer_pub, t);
}

std::string format_transcript_file(const OwnershipTranscript& t) {
    std::string out;
    out += "c1: " + t.pseudonym.c1.to_hex() + "\n";
    out += "c2: " + t.pseudonym.c2.to_hex() + "\n";
    out += "v1: " + t.v1.to_hex() + "\n";
    out += "v2: " + t.v2.to_hex() + "\n";
    out += "c: " + t.c.to_hex() + "\n";
    out += "r1: " + t.r1.to_hex() + "\n";
    out += "r2: " + t.r2.to_hex() + "\n";
    return out;
}

OwnershipTranscript parse_transcript_file(std::string_view text) {
    constexpr std::string_view what = "transcript file";
    auto fields = detail::parse_fields(text, what);
    auto get = [&](const char* name) -> const std::string& { return detail::field(fields, name, what); };
    OwnershipTranscript t;
    t.pseudonym = {G2::from_hex(get("c1")), G2::from_hex(get("c2"))};
    t.v1 = G2::from_hex(get("v1"));
    t.v2 = G2::from_hex(get("v2"));
    t.c = Scalar::from_hex(get("c"));
    t.r1 = Scalar::from_hex(get("r1"));
    t.r2 = Scalar::from_hex(get("r2"));
    return t;
}

std::string format_commit_message(const OwnershipCommitment& commitment) {
    return commitment.v1_point().to_hex() + " " + commitment.v2_point().to_hex();
}

std::pair<G2, G2> parse_commit_message(std::string_view line) {
    auto words = split_words(line);
    require_word_count(words, 2, "commit");
    return {G2::from_hex(words[0]), G2::from_hex(words[1])};
}

std::string format_challenge_message(const Scalar& c) { return c.to_hex(); }

Scalar parse_challenge_message(std::string_view line) {
    auto words = split_words(line);
    require_word_count(words, 1, "challenge");
    return Scalar::from_hex(words[0]);
}

std::string format_response_message(const OwnershipResponse& response) {
    return response.r1.to_hex() + " " + response.r2.to_hex();
}

OwnershipResponse parse_response_message(std::string_view line) {
    auto words = split_words(line);
    require_word_count(words, 2, "response");
    return {Scalar::from_hex(words[0]), Scalar::from_hex(words[1])};
}

}  // namespace pplist
