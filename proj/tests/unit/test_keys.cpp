#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "oracles.hpp"
#include "pplist/keys.hpp"

using namespace pplist;

TEST_CASE("keygen", "[keys]") {
    SeededRandom rng(10);

    SECTION("two draws differ") {
        KeyPair a = KeyPair::generate(Role::station, rng);
        KeyPair b = KeyPair::generate(Role::station, rng);
        CHECK_FALSE(a.secret() == b.secret());
        CHECK_FALSE(a.y() == b.y());
    }

    SECTION("fixed secrets") {
        CHECK(KeyPair::from_secret(Role::station, Scalar::from_u64(1)).y() == G2::generator());
        CHECK(KeyPair::from_secret(Role::station, Scalar::from_u64(3)).y() ==
              oracle::repeated_add(G2::generator(), 3));
        CHECK_THROWS_AS(KeyPair::from_secret(Role::user, Scalar()), Error);
    }

    SECTION("y = g2^x for 100 keys per role") {
        const G1 g1 = G1::generator();
        const G2 g2 = G2::generator();
        for (Role role : {Role::station, Role::user, Role::tracer}) {
            for (int i = 0; i < 100; ++i) {
                KeyPair kp = KeyPair::generate(role, rng);
                REQUIRE(kp.role() == role);
                REQUIRE_FALSE(kp.secret().is_zero());
                REQUIRE(kp.y() == g2 * kp.secret());
                // independent route through the pairing: e(g1^x, g2) = e(g1, y)
                if (i % 10 == 0) {
                    const std::pair<G1, G2> pairs[] = {{g1 * kp.secret(), g2}, {-g1, kp.y()}};
                    REQUIRE(pairing_product_is_identity(pairs));
                }
            }
        }
    }
}

TEST_CASE("public_key_of", "[keys]") {
    SeededRandom rng(11);
    KeyPair kp = KeyPair::generate(Role::user, rng);
    PublicKey pk = public_key_of(kp);

    CHECK(pk.role() == Role::user);
    CHECK(pk.y() == kp.y());
    CHECK(format_public_key_file(pk) == format_public_key_file(public_key_of(kp)));

    std::string text = format_public_key_file(pk);
    CHECK(text.find(kp.secret().to_hex()) == std::string::npos);
    CHECK(text.find("x:") == std::string::npos);
    auto secret = kp.secret().to_bytes();
    std::string raw(reinterpret_cast<const char*>(secret.data()), secret.size());
    CHECK(text.find(raw) == std::string::npos);

    CHECK_THROWS_AS(PublicKey(Role::station, G2()), Error);
}

TEST_CASE("key files", "[keys]") {
    SeededRandom rng(12);

    SECTION("round trip for every role") {
        for (Role role : {Role::station, Role::user, Role::tracer}) {
            KeyPair kp = KeyPair::generate(role, rng);
            KeyPair back = parse_key_file(format_key_file(kp));
            CHECK(back == kp);
            PublicKey pk = parse_public_key_file(format_public_key_file(kp.public_key()));
            CHECK(pk == kp.public_key());
            // a full key file also reads as a public key
            CHECK(parse_public_key_file(format_key_file(kp)) == kp.public_key());
        }
    }

    SECTION("format") {
        KeyPair kp = KeyPair::from_secret(Role::tracer, Scalar::from_u64(1));
        CHECK(format_key_file(kp) == "role: tracer\nx: " + std::string(63, '0') + "1\ny: " +
                                         G2::generator().to_hex() + "\n");
    }

    SECTION("files on disk") {
        auto dir = std::filesystem::temp_directory_path() / "pplist_keys_test";
        std::filesystem::create_directories(dir);
        KeyPair kp = KeyPair::generate(Role::station, rng);
        write_text_file(dir / "k.key", format_key_file(kp));
        CHECK(read_key_file(dir / "k.key") == kp);
        CHECK(read_public_key_file(dir / "k.key") == kp.public_key());
        CHECK_THROWS_AS(read_key_file(dir / "missing.key"), Error);
        std::filesystem::remove_all(dir);
    }

    SECTION("rejections") {
        KeyPair kp = KeyPair::generate(Role::user, rng);
        KeyPair other = KeyPair::generate(Role::user, rng);
        std::string mismatched = "role: user\nx: " + kp.secret().to_hex() + "\ny: " + other.y().to_hex() + "\n";
        CHECK_THROWS_WITH(parse_key_file(mismatched), Catch::Matchers::ContainsSubstring("does not match"));

        CHECK_THROWS_AS(parse_public_key_file("role: user\ny: " + G2().to_hex() + "\n"), Error);
        CHECK_THROWS_AS(parse_public_key_file("role: admin\ny: " + kp.y().to_hex() + "\n"), Error);
        CHECK_THROWS_AS(parse_public_key_file("role: user\n"), Error);
        CHECK_THROWS_AS(parse_public_key_file("role user\n"), Error);
        CHECK_THROWS_AS(parse_public_key_file("role: user\nrole: user\ny: " + kp.y().to_hex() + "\n"), Error);
        CHECK_THROWS_AS(parse_key_file("role: user\nx: " + std::string(64, '0') + "\ny: " + kp.y().to_hex()), Error);
    }

    SECTION("role names") {
        for (Role role : {Role::station, Role::user, Role::tracer}) CHECK(parse_role(role_name(role)) == role);
        CHECK_THROWS_AS(parse_role("Station"), Error);
        CHECK_THROWS_WITH(require_role(Role::user, Role::tracer, "trace"),
                          "trace: expected a tracer key, got user");
    }
}
