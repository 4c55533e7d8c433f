#ifndef PPLIST_VERDICT_HPP
#define PPLIST_VERDICT_HPP

#include <string>
#include <utility>

namespace pplist {

/// Outcome of a verification: converts to bool, carries a one-line reason
/// when rejected. Verifiers return this instead of throwing.
struct Verdict {
    bool ok = false;
    std::string reason;

    static Verdict accept() { return {true, {}}; }
    static Verdict reject(std::string why) { return {false, std::move(why)}; }

    explicit operator bool() const { return ok; }
};

}  // namespace pplist

#endif  // PPLIST_VERDICT_HPP
