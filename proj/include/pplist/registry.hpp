#ifndef PPLIST_REGISTRY_HPP
#define PPLIST_REGISTRY_HPP

// Append-only table of delivery records, one tab-separated line per record:
//
//   id  status  c1  c2  m  d  route_keys  ya  sigma
//
// with hex fields, route keys space-separated, and sigma "-" while the
// record is still routed.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pplist/aggregate.hpp"
#include "pplist/groups.hpp"
#include "pplist/keys.hpp"
#include "pplist/pseudonym.hpp"

namespace pplist {

enum class RecordStatus { routed, delivered };

std::string_view status_name(RecordStatus status);

struct DeliveryRecord {
    std::uint64_t id = 0;
    RecordStatus status = RecordStatus::routed;
    Pseudonym pseudonym;
    Bytes message;
    std::vector<G2> route;
    G2 ya;
    std::optional<AggregateSignature> sigma;

    /// Recomputes coefficients from the route; throws Error if they do not
    /// reproduce ya.
    RouteAggregate route_aggregate() const;

    friend bool operator==(const DeliveryRecord& a, const DeliveryRecord& b);
};

/// Lookup miss.
class NotFound : public Error {
public:
    using Error::Error;
};

std::string format_record_line(const DeliveryRecord& record);
/// Decodes one line. Structural checks only; ya and sigma are checked by
/// the ledger.
DeliveryRecord parse_record_line(std::string_view line);

struct LedgerOptions {
    /// Verify sigma when completing a record and for every delivered record
    /// on load. Off only for adversarial test fixtures and for commands that
    /// must load a ledger in order to report a bad record.
    bool strict = true;
};

/// Single writer, many readers. Lookups return copies taken under the lock.
class Ledger {
public:
    /// Creates an empty file when path does not exist. Throws Error citing the
    /// line number for undecodable lines and the record id for invariant
    /// violations.
    explicit Ledger(std::filesystem::path path, LedgerOptions options = {});

    Ledger(const Ledger&) = delete;
    Ledger& operator=(const Ledger&) = delete;

    /// Appends a routed record; returns its id (ids start at 0).
    std::uint64_t create_record(const Pseudonym& pseudonym, ByteView m, std::span<const PublicKey> route);
    std::uint64_t create_record(const Pseudonym& pseudonym, ByteView m, std::span<const G2> route);

    /// routed -> delivered. Throws NotFound, Error "already delivered", or
    /// (strict) Error "invalid aggregate signature".
    void complete_record(std::uint64_t id, const AggregateSignature& sigma);

    DeliveryRecord find_record(std::uint64_t id) const;
    /// All matches in id order; throws NotFound when there are none.
    std::vector<DeliveryRecord> find_records(const Pseudonym& pseudonym, ByteView m) const;

    std::vector<DeliveryRecord> records() const;
    std::size_t size() const;
    const std::filesystem::path& path() const { return path_; }

private:
    void append_line(const std::string& line);
    void rewrite(const std::vector<DeliveryRecord>& records);

    std::filesystem::path path_;
    LedgerOptions options_;
    std::vector<DeliveryRecord> records_;
    mutable std::mutex mu_;
};

}  // namespace pplist

#endif  // PPLIST_REGISTRY_HPP
