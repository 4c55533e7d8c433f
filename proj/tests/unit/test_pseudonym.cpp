#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <blst.h>
#include <blst_aux.h>

#include "oracles.hpp"
#include "pplist/pseudonym.hpp"

using namespace pplist;

namespace {

ByteView msg(std::string_view s) { return as_bytes(s); }

struct Parties {
    KeyPair user;
    KeyPair tracer;
};

Parties make_parties(RandomSource& rng) {
    return {KeyPair::generate(Role::user, rng), KeyPair::generate(Role::tracer, rng)};
}

OwnershipTranscript run_honest(const Parties& p, ByteView m, const Scalar& c, RandomSource& rng) {
    OwnershipTranscript t;
    t.pseudonym = derive_pseudonym(p.user, p.tracer.public_key(), m);
    auto commitment = prove_commit(p.user, p.tracer.public_key(), t.pseudonym, rng);
    t.v1 = commitment.v1_point();
    t.v2 = commitment.v2_point();
    t.c = c;
    auto r = prove_respond(commitment, c, p.user, m);
    t.r1 = r.r1;
    t.r2 = r.r2;
    return t;
}

// maps a group element encoding to [0, 1) via SHA-256
template <class Encoded>
double unit_hash(const Encoded& enc) {
    std::uint8_t digest[32];
    blst_sha256(digest, enc.data(), enc.size());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | digest[i];
    return static_cast<double>(v >> 11) / static_cast<double>(1ull << 53);
}

}  // namespace

TEST_CASE("derive_pseudonym", "[pseudonym]") {
    SeededRandom rng(20);
    Parties p = make_parties(rng);
    const PublicKey tracer_pub = p.tracer.public_key();

    SECTION("deterministic in (user, tracer, m)") {
        CHECK(derive_pseudonym(p.user, tracer_pub, msg("m")) == derive_pseudonym(p.user, tracer_pub, msg("m")));
    }

    SECTION("matches the defining equations") {
        Pseudonym ps = derive_pseudonym(p.user, tracer_pub, msg("order-7"));
        Scalar k = hash_h3(p.user.secret(), msg("order-7"));
        CHECK(derive_order_secret(p.user.secret(), msg("order-7")) == k);
        CHECK(ps.c1 == G2::generator() * k);
        CHECK(ps.c2 == tracer_pub.y() * k + p.user.y());
    }

    SECTION("small exponents: x_u = 2, x_t = 3, k = 5") {
        const G2 g2 = G2::generator();
        KeyPair tracer = KeyPair::from_secret(Role::tracer, Scalar::from_u64(3));
        Pseudonym ps = pseudonym_from_exponents(tracer.y(), Scalar::from_u64(5), Scalar::from_u64(2));
        CHECK(ps.c1 == oracle::repeated_add(g2, 5));
        CHECK(ps.c2 == oracle::repeated_add(g2, 3 * 5 + 2));
    }

    SECTION("k = 0 gives an identity C1; the derived k is never zero") {
        Pseudonym degenerate = pseudonym_from_exponents(tracer_pub.y(), Scalar(), p.user.secret());
        CHECK(degenerate.c1.is_identity());
        for (int i = 0; i < 50; ++i)
            CHECK_FALSE(derive_order_secret(p.user.secret(), msg(std::to_string(i))).is_zero());
    }

    SECTION("role checks") {
        CHECK_THROWS_AS(derive_pseudonym(p.tracer, tracer_pub, msg("m")), Error);
        CHECK_THROWS_AS(derive_pseudonym(p.user, p.user.public_key(), msg("m")), Error);
    }

    SECTION("distinct across messages and users") {
        std::set<std::string> c1s;
        for (int i = 0; i < 100; ++i)
            c1s.insert(derive_pseudonym(p.user, tracer_pub, msg("order-" + std::to_string(i))).c1.to_hex());
        CHECK(c1s.size() == 100);

        KeyPair other = KeyPair::generate(Role::user, rng);
        Pseudonym a = derive_pseudonym(p.user, tracer_pub, msg("same"));
        Pseudonym b = derive_pseudonym(other, tracer_pub, msg("same"));
        CHECK_FALSE(a.c1 == b.c1);
        CHECK_FALSE(a.c2 == b.c2);
    }

    SECTION("identical order data collides (salting is the caller's job)") {
        CHECK(derive_pseudonym(p.user, tracer_pub, msg("tv")) == derive_pseudonym(p.user, tracer_pub, msg("tv")));
    }

    SECTION("file round trip") {
        Pseudonym ps = derive_pseudonym(p.user, tracer_pub, msg("x"));
        CHECK(parse_pseudonym_file(format_pseudonym_file(ps)) == ps);
        CHECK_THROWS_AS(parse_pseudonym_file("c1: " + G2().to_hex() + "\nc2: " + ps.c2.to_hex() + "\n"), Error);
        CHECK_THROWS_AS(parse_pseudonym_file("c1: " + ps.c1.to_hex() + "\n"), Error);
    }
}

// reference values from tests/vectors/gen_vectors.py
TEST_CASE("fixed pseudonym vectors", "[pseudonym][vectors]") {
    KeyPair user = KeyPair::from_secret(Role::user, Scalar::from_u64(0x1234567));
    KeyPair tracer = KeyPair::from_secret(Role::tracer, Scalar::from_u64(0x89abcdef));
    Pseudonym ps = derive_pseudonym(user, tracer.public_key(), msg("order-0001"));

    CHECK(derive_order_secret(user.secret(), msg("order-0001")).to_hex() ==
          "1336e9c3b04b01eafc9d6ff309c89b8fcee6808ee52ef166098d8583062cb030");
    CHECK(ps.c1.to_hex() ==
          "b93b1ed056897f21a4388e34e4c4c7aacabbe90f54db82a59e39b9673261838227c42074ef1bafd3524b01051b66f13f"
          "0a876810b4cf8802c4f5ad3923a6d40ae1ccaea88d6e907c64fc8989af8f056410dd466bafc57d2caf259e1a369e2a90");
    CHECK(ps.c2.to_hex() ==
          "82adaa9cc3637c396107fc705dd66abca045a56bdacca70373b2f144024f424b7abe8caba6209ba62e77f6a58f47287f"
          "0ace1ed151f93c60cb7e6b62efb3048ab9bc99ff5e4af1ce6cb139889e83dd0d48aaf9770e00b075c31e0840cf069c7d");
    CHECK(hash_h1(ps.c1, ps.c2, msg("order-0001")).to_hex() ==
          "8811a5ba4afdd7234163a7b1e9b69a184bd233b07d4df7110c8aaa5dba6a35c3a96f8e4cb10c6f5131b82554d483ed72");
}

TEST_CASE("ownership proof moves", "[pseudonym][proof]") {
    SeededRandom rng(21);
    Parties p = make_parties(rng);
    const PublicKey tracer_pub = p.tracer.public_key();
    const G2 g2 = G2::generator();
    const Pseudonym ps = derive_pseudonym(p.user, tracer_pub, msg("m"));
    const Scalar k = derive_order_secret(p.user.secret(), msg("m"));

    SECTION("commit") {
        auto a = prove_commit(p.user, tracer_pub, ps, rng);
        auto b = prove_commit(p.user, tracer_pub, ps, rng);
        CHECK_FALSE(a.v1_point() == b.v1_point());
        CHECK_FALSE(a.v2_point() == b.v2_point());

        auto zero = prove_commit_with(tracer_pub, Scalar(), Scalar());
        CHECK(zero.v1_point().is_identity());
        CHECK(zero.v2_point().is_identity());

        auto one = prove_commit_with(tracer_pub, Scalar::from_u64(1), Scalar::from_u64(1));
        CHECK(one.v1_point() == g2);
        CHECK(one.v2_point() == tracer_pub.y() + g2);
    }

    SECTION("challenge") {
        std::set<std::string> seen;
        for (int i = 0; i < 1000; ++i) seen.insert(challenge(rng).to_hex());
        CHECK(seen.size() == 1000);

        Scalar c = challenge(rng);
        CHECK(parse_challenge_message(format_challenge_message(c)) == c);

        SeededRandom s1(77), s2(77);
        CHECK(challenge(s1) == challenge(s2));
    }

    SECTION("respond") {
        const Scalar v1 = Scalar::random(rng), v2 = Scalar::random(rng);
        auto state = prove_commit_with(tracer_pub, v1, v2);
        auto r = prove_respond(state, Scalar(), p.user, msg("m"));
        CHECK(r.r1 == v1);
        CHECK(r.r2 == v2);
        CHECK(state.consumed());
        CHECK_THROWS_WITH(prove_respond(state, Scalar(), p.user, msg("m")), "commitment already consumed");

        auto zero = prove_commit_with(tracer_pub, Scalar(), Scalar());
        auto forced = prove_respond(zero, Scalar::from_u64(1), p.user, msg("m"));
        CHECK(forced.r1 == -k);
        CHECK(forced.r2 == -p.user.secret());

        auto original = prove_commit(p.user, tracer_pub, ps, rng);
        auto moved = std::move(original);
        CHECK_THROWS_WITH(prove_respond(original, Scalar(), p.user, msg("m")), "commitment already consumed");
        CHECK_NOTHROW(prove_respond(moved, Scalar(), p.user, msg("m")));
    }

    SECTION("wire messages") {
        auto state = prove_commit(p.user, tracer_pub, ps, rng);
        auto [v1, v2] = parse_commit_message(format_commit_message(state));
        CHECK(v1 == state.v1_point());
        CHECK(v2 == state.v2_point());
        auto r = prove_respond(state, challenge(rng), p.user, msg("m"));
        auto back = parse_response_message(format_response_message(r));
        CHECK(back.r1 == r.r1);
        CHECK(back.r2 == r.r2);
        CHECK_THROWS_AS(parse_commit_message(v1.to_hex()), Error);
        CHECK_THROWS_AS(parse_response_message("00 11 22"), Error);
        CHECK_THROWS_AS(parse_challenge_message(""), Error);
    }
}

TEST_CASE("verify_proof", "[pseudonym][proof]") {
    SeededRandom rng(22);
    Parties p = make_parties(rng);
    const PublicKey tracer_pub = p.tracer.public_key();

    SECTION("honest transcript accepts, perturbed responses reject") {
        auto t = run_honest(p, msg("m"), challenge(rng), rng);
        CHECK(verify_proof(tracer_pub, t));

        auto bad = t;
        bad.r2 = bad.r2 + Scalar::from_u64(1);
        Verdict v = verify_proof(tracer_pub, bad);
        CHECK_FALSE(v);
        CHECK(v.reason == "V2 != Y_t^r1 * g2^r2 * C2^c");

        bad = t;
        bad.r1 = bad.r1 + Scalar::from_u64(1);
        CHECK_FALSE(verify_proof(tracer_pub, bad));

        bad = t;
        bad.c = bad.c + Scalar::from_u64(1);
        CHECK_FALSE(verify_proof(tracer_pub, bad));
    }

    SECTION("wrong tracer or identity pseudonym reject without throwing") {
        auto t = run_honest(p, msg("m"), challenge(rng), rng);
        CHECK_FALSE(verify_proof(KeyPair::generate(Role::tracer, rng).public_key(), t));
        CHECK_FALSE(verify_proof(p.user.public_key(), t));
        auto bad = t;
        bad.pseudonym.c1 = G2();
        CHECK_FALSE(verify_proof(tracer_pub, bad));
    }

    SECTION("proof for another user's pseudonym rejects") {
        KeyPair other = KeyPair::generate(Role::user, rng);
        auto t = run_honest(p, msg("m"), challenge(rng), rng);
        t.pseudonym = derive_pseudonym(other, tracer_pub, msg("m"));
        CHECK_FALSE(verify_proof(tracer_pub, t));
    }

    SECTION("transcript file round trip") {
        auto t = run_honest(p, msg("m"), challenge(rng), rng);
        auto back = parse_transcript_file(format_transcript_file(t));
        CHECK(verify_proof(tracer_pub, back));
        CHECK(back.c == t.c);
        CHECK(back.pseudonym == t.pseudonym);
    }
}

TEST_CASE("simulated transcripts", "[pseudonym][proof][hvzk]") {
    SeededRandom rng(23);
    Parties p = make_parties(rng);
    const PublicKey tracer_pub = p.tracer.public_key();
    const Pseudonym ps = derive_pseudonym(p.user, tracer_pub, msg("m"));

    SECTION("accepted without a witness") {
        for (int i = 0; i < 20; ++i) CHECK(verify_proof(tracer_pub, simulate_transcript(tracer_pub, ps, challenge(rng), rng)));
        // any pseudonym at all, even one nobody can open
        Pseudonym junk{G2::generator() * Scalar::random_nonzero(rng), G2::generator() * Scalar::random_nonzero(rng)};
        CHECK(verify_proof(tracer_pub, simulate_transcript(tracer_pub, junk, challenge(rng), rng)));
    }

    SECTION("zero challenge: V1 = g2^r1") {
        auto t = simulate_transcript(tracer_pub, ps, Scalar(), rng);
        CHECK(t.v1 == G2::generator() * t.r1);
    }

    SECTION("first moments match honest transcripts for a fixed challenge") {
        constexpr int kSamples = 10000;
        const Scalar c = challenge(rng);
        std::array<double, 4> honest{}, simulated{};  // V1, V2, r1, r2
        for (int i = 0; i < kSamples; ++i) {
            auto h = run_honest(p, msg("m"), c, rng);
            auto s = simulate_transcript(tracer_pub, ps, c, rng);
            REQUIRE(verify_proof(tracer_pub, s));
            honest[0] += unit_hash(h.v1.to_bytes());
            honest[1] += unit_hash(h.v2.to_bytes());
            honest[2] += unit_hash(h.r1.to_bytes());
            honest[3] += unit_hash(h.r2.to_bytes());
            simulated[0] += unit_hash(s.v1.to_bytes());
            simulated[1] += unit_hash(s.v2.to_bytes());
            simulated[2] += unit_hash(s.r1.to_bytes());
            simulated[3] += unit_hash(s.r2.to_bytes());
        }
        // each mean is ~N(0.5, 1/(12 n)); allow 6 sigma on the difference
        const double tol = 6.0 * std::sqrt(2.0 / (12.0 * kSamples));
        for (std::size_t f = 0; f < 4; ++f) {
            double mh = honest[f] / kSamples, ms = simulated[f] / kSamples;
            INFO("field " << f << " honest " << mh << " simulated " << ms);
            CHECK(std::abs(mh - ms) < tol);
            CHECK(std::abs(mh - 0.5) < tol);
        }
    }
}

TEST_CASE("special soundness extraction", "[pseudonym][proof]") {
    SeededRandom rng(24);
    for (int i = 0; i < 20; ++i) {
        Parties p = make_parties(rng);
        const PublicKey tracer_pub = p.tracer.public_key();
        const Bytes m = {static_cast<std::uint8_t>(i), 1, 2};
        const Pseudonym ps = derive_pseudonym(p.user, tracer_pub, m);

        // rewind: the same nonces answer two challenges
        const Scalar v1 = Scalar::random(rng), v2 = Scalar::random(rng);
        auto first = prove_commit_with(tracer_pub, v1, v2);
        auto second = prove_commit_with(tracer_pub, v1, v2);
        const Scalar c = challenge(rng), c2 = challenge(rng);
        auto ra = prove_respond(first, c, p.user, m);
        auto rb = prove_respond(second, c2, p.user, m);
        OwnershipTranscript a{ps, first.v1_point(), first.v2_point(), c, ra.r1, ra.r2};
        OwnershipTranscript b{ps, second.v1_point(), second.v2_point(), c2, rb.r1, rb.r2};
        REQUIRE(verify_proof(tracer_pub, a));
        REQUIRE(verify_proof(tracer_pub, b));

        auto w = oracle::extract_witness(a, b);
        CHECK(ps.c1 == G2::generator() * w.k);
        CHECK(ps.c2 == tracer_pub.y() * w.k + G2::generator() * w.user_secret);
        CHECK(w.user_secret == p.user.secret());
    }
}

TEST_CASE("random responses are rejected", "[pseudonym][proof]") {
    SeededRandom rng(25);
    Parties p = make_parties(rng);
    const PublicKey tracer_pub = p.tracer.public_key();
    const Pseudonym ps = derive_pseudonym(p.user, tracer_pub, msg("m"));
    for (int i = 0; i < 200; ++i) {
        auto state = prove_commit(p.user, tracer_pub, ps, rng);
        OwnershipTranscript forged{ps,        state.v1_point(), state.v2_point(), challenge(rng),
                                   Scalar::random(rng), Scalar::random(rng)};
        REQUIRE_FALSE(verify_proof(tracer_pub, forged));
    }
}

TEST_CASE("non-interactive mode", "[pseudonym][proof][fiat-shamir]") {
    SeededRandom rng(26);
    Parties p = make_parties(rng);
    const PublicKey tracer_pub = p.tracer.public_key();

    auto t = prove_noninteractive(p.user, tracer_pub, msg("order-9"), rng, msg("ctx"));
    CHECK(verify_noninteractive(tracer_pub, t, msg("ctx")));
    CHECK(t.pseudonym == derive_pseudonym(p.user, tracer_pub, msg("order-9")));
    CHECK_FALSE(verify_noninteractive(tracer_pub, t, msg("other")));
    CHECK(verify_proof(tracer_pub, t));

    // a simulated transcript has a free challenge, which Fiat-Shamir rules out
    auto sim = simulate_transcript(tracer_pub, t.pseudonym, challenge(rng), rng);
    CHECK_FALSE(verify_noninteractive(tracer_pub, sim, msg("ctx")));

    auto back = parse_transcript_file(format_transcript_file(t));
    CHECK(verify_noninteractive(tracer_pub, back, msg("ctx")));
}
