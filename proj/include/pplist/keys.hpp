#ifndef PPLIST_KEYS_HPP
#define PPLIST_KEYS_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "pplist/groups.hpp"

namespace pplist {

enum class Role { station, user, tracer };

std::string_view role_name(Role role);
/// Throws Error on anything but "station", "user" or "tracer".
Role parse_role(std::string_view name);

/// Public half of a key: a non-identity, subgroup-checked G2 element.
class PublicKey {
public:
    /// Throws Error if y is the identity.
    PublicKey(Role role, G2 y);

    Role role() const { return role_; }
    const G2& y() const { return y_; }

    friend bool operator==(const PublicKey& a, const PublicKey& b) {
        return a.role_ == b.role_ && a.y_ == b.y_;
    }

private:
    Role role_;
    G2 y_;
};

/// Secret x in [1, q) with y = g2 * x. Stations, users and the tracer all
/// use the same structure; the role only guards against cross-use.
class KeyPair {
public:
    static KeyPair generate(Role role, RandomSource& rng);
    /// Fixed secret (test vectors). Throws Error for x = 0.
    static KeyPair from_secret(Role role, const Scalar& x);

    Role role() const { return role_; }
    const Scalar& secret() const { return x_; }
    const G2& y() const { return y_; }
    PublicKey public_key() const { return PublicKey(role_, y_); }

    friend bool operator==(const KeyPair& a, const KeyPair& b) {
        return a.role_ == b.role_ && a.x_ == b.x_ && a.y_ == b.y_;
    }

private:
    KeyPair(Role role, Scalar x, G2 y) : role_(role), x_(x), y_(y) {}

    Role role_;
    Scalar x_;
    G2 y_;
};

inline PublicKey public_key_of(const KeyPair& kp) { return kp.public_key(); }

/// Throws Error naming the expected role on mismatch.
void require_role(Role actual, Role expected, std::string_view what);

// Key files: "role: <r>", "x: <hex>", "y: <hex>", one per line. Public key
// files omit the x line.
std::string format_key_file(const KeyPair& kp);
std::string format_public_key_file(const PublicKey& pk);
/// Validates y = g2 * x.
KeyPair parse_key_file(std::string_view text);
/// Accepts a full key file too and drops the secret.
PublicKey parse_public_key_file(std::string_view text);

KeyPair read_key_file(const std::filesystem::path& path);
PublicKey read_public_key_file(const std::filesystem::path& path);

// small file helpers shared by the text formats
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
Bytes read_binary_file(const std::filesystem::path& path);

}  // namespace pplist

#endif  // PPLIST_KEYS_HPP
