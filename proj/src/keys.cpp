#include "pplist/keys.hpp"

#include <fstream>
#include <sstream>

#include "text_fields.hpp"

namespace pplist {

using detail::field;
using detail::parse_fields;

std::string_view role_name(Role role) {
    switch (role) {
        case Role::station: return "station";
        case Role::user: return "user";
        case Role::tracer: return "tracer";
    }
    return "?";
}

Role parse_role(std::string_view name) {
    if (name == "station") return Role::station;
    if (name == "user") return Role::user;
    if (name == "tracer") return Role::tracer;
    throw Error("unknown role '" + std::string(name) + "'");
}

void require_role(Role actual, Role expected, std::string_view what) {
    if (actual != expected)
        throw Error(std::string(what) + ": expected a " + std::string(role_name(expected)) + " key, got " +
                    std::string(role_name(actual)));
}

PublicKey::PublicKey(Role role, G2 y) : role_(role), y_(y) {
    if (y_.is_identity()) throw Error("public key: identity element");
}

KeyPair KeyPair::generate(Role role, RandomSource& rng) {
    Scalar x = Scalar::random_nonzero(rng);
    return KeyPair(role, x, G2::generator() * x);
}

KeyPair KeyPair::from_secret(Role role, const Scalar& x) {
    if (x.is_zero()) throw Error("secret key: zero");
    return KeyPair(role, x, G2::generator() * x);
}

std::string format_key_file(const KeyPair& kp) {
    std::string out;
    out += "role: " + std::string(role_name(kp.role())) + "\n";
    out += "x: " + kp.secret().to_hex() + "\n";
    out += "y: " + kp.y().to_hex() + "\n";
    return out;
}

std::string format_public_key_file(const PublicKey& pk) {
    std::string out;
    out += "role: " + std::string(role_name(pk.role())) + "\n";
    out += "y: " + pk.y().to_hex() + "\n";
    return out;
}

KeyPair parse_key_file(std::string_view text) {
    auto fields = parse_fields(text);
    Role role = parse_role(field(fields, "role"));
    Scalar x = Scalar::from_hex(field(fields, "x"));
    G2 y = G2::from_hex(field(fields, "y"));
    KeyPair kp = KeyPair::from_secret(role, x);
    if (!(kp.y() == y)) throw Error("key file: y does not match x");
    return kp;
}

PublicKey parse_public_key_file(std::string_view text) {
    auto fields = parse_fields(text);
    Role role = parse_role(field(fields, "role"));
    return PublicKey(role, G2::from_hex(field(fields, "y")));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Bytes read_binary_file(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    return Bytes(text.begin(), text.end());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed: " + path.string());
}

KeyPair read_key_file(const std::filesystem::path& path) { return parse_key_file(read_text_file(path)); }

PublicKey read_public_key_file(const std::filesystem::path& path) {
    return parse_public_key_file(read_text_file(path));
}

}  // namespace pplist
