#pragma once

// Append-only zero cache. Each segment is framed as
//   ZDLSEG <payload bytes> <crc32 hex>\n<json payload>\n
// and committed by a single write followed by fsync. A damaged or short
// final frame is an interrupted write and is dropped on open; damage before
// the last frame is reported as CorruptSegment.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zdl/zeroscan.hpp"

namespace zdl::store {

/// Half-open [t0, t1).
struct Interval {
    double t0 = 0.0;
    double t1 = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct StoreSegment {
    int k = 0;
    Interval t_range;
    std::uint64_t policy_fingerprint = 0;
    std::vector<scan::ZeroRecord> records;  ///< sorted by gamma, each gamma in t_range
    std::string created_at;
    std::string tool_version;
};

struct RangeResult {
    std::vector<scan::ZeroRecord> records;
    std::vector<Interval> gaps;
};

enum class Format { csv, jsonl };

Format format_from_string(std::string_view s);

/// Shortest round-trip hex rendering, e.g. "0x1.c4p+3"; parse_hex inverts it bit-exactly.
std::string hex_double(double v);
double parse_hex(std::string_view s);

std::uint32_t crc32_of(std::string_view data);

struct Recovery {
    std::size_t segments_loaded = 0;
    std::size_t discarded_bytes = 0;  ///< bytes of an uncommitted tail frame
};

class ZeroStore {
public:
    /// Opens (creating when absent) and replays the log.
    explicit ZeroStore(std::string path);

    /// Validates and appends. An overlap with identical records is trimmed
    /// to the uncovered parts; differing records throw OverlapConflict.
    void put_segment(const StoreSegment& seg);

    [[nodiscard]] RangeResult get_range(int k, double t0, double t1, std::uint64_t policy_fingerprint) const;

    /// Deterministic rendering of the cached range; throws GapsPresent.
    [[nodiscard]] std::string export_range(int k, double t0, double t1, std::uint64_t policy_fingerprint,
                                           Format format) const;

    /// Parses an export and stores it as one segment covering [t0, t1).
    void import_range(std::string_view data, Format format, int k, double t0, double t1,
                      std::uint64_t policy_fingerprint, const std::string& created_at = "");

    /// FNV-1a of the committed log bytes.
    [[nodiscard]] std::uint64_t fingerprint() const { return fingerprint_; }
    [[nodiscard]] const std::vector<StoreSegment>& segments() const { return segments_; }
    [[nodiscard]] const Recovery& recovery() const { return recovery_; }
    [[nodiscard]] const std::string& path() const { return path_; }

private:
    void load();
    void append(const StoreSegment& seg);

    std::string path_;
    std::vector<StoreSegment> segments_;
    Recovery recovery_;
    std::uint64_t committed_bytes_ = 0;
    std::uint64_t fingerprint_ = 0;
};

/// Records of an export stream, in stream order.
std::vector<scan::ZeroRecord> parse_export(std::string_view data, Format format);

/// Subtracts covered intervals from [t0, t1).
std::vector<Interval> interval_gaps(double t0, double t1, std::vector<Interval> covered);

}  // namespace zdl::store
