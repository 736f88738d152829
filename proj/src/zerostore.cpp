#include "zdl/zerostore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include <unistd.h>
#include <zlib.h>

#include "zdl/errors.hpp"
#include "zdl/hash.hpp"
#include "zdl/version.hpp"

namespace zdl::store {
namespace {

using nlohmann::json;
using scan::ZeroRecord;

constexpr std::string_view kMagic = "ZDLSEG ";
constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

json record_row(const ZeroRecord& r) {
    return json::array({hex_double(r.beta), hex_double(r.gamma), r.multiplicity, hex_double(r.error_radius),
                        std::string(scan::to_string(r.method))});
}

ZeroRecord record_from_row(const json& row, int k) {
    if (!row.is_array() || row.size() != 5) throw Error(ErrorKind::CorruptSegment, "malformed record row");
    ZeroRecord r;
    r.k = k;
    r.beta = parse_hex(row[0].get<std::string>());
    r.gamma = parse_hex(row[1].get<std::string>());
    r.multiplicity = row[2].get<int>();
    r.error_radius = parse_hex(row[3].get<std::string>());
    r.method = scan::method_from_string(row[4].get<std::string>());
    return r;
}

std::string payload_of(const StoreSegment& seg) {
    json j;
    j["k"] = seg.k;
    j["t0"] = hex_double(seg.t_range.t0);
    j["t1"] = hex_double(seg.t_range.t1);
    j["fingerprint"] = to_hex(seg.policy_fingerprint);
    j["created_at"] = seg.created_at;
    j["tool_version"] = seg.tool_version;
    json rows = json::array();
    for (const auto& r : seg.records) rows.push_back(record_row(r));
    j["records"] = std::move(rows);
    return j.dump();
}

StoreSegment segment_of(std::string_view payload) {
    const json j = json::parse(payload);
    StoreSegment seg;
    seg.k = j.at("k").get<int>();
    seg.t_range = {parse_hex(j.at("t0").get<std::string>()), parse_hex(j.at("t1").get<std::string>())};
    seg.policy_fingerprint = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
    seg.created_at = j.at("created_at").get<std::string>();
    seg.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& row : j.at("records")) seg.records.push_back(record_from_row(row, seg.k));
    return seg;
}

std::string frame_of(const std::string& payload) {
    char crc[9];
    std::snprintf(crc, sizeof crc, "%08x", static_cast<unsigned>(crc32_of(payload)));
    std::string f(kMagic);
    f += std::to_string(payload.size());
    f += ' ';
    f += crc;
    f += '\n';
    f += payload;
    f += '\n';
    return f;
}

void validate(const StoreSegment& seg) {
    const auto& [t0, t1] = seg.t_range;
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 < t1))
        throw Error(ErrorKind::InvalidArgument, "segment needs a finite range with t0 < t1");
    for (std::size_t i = 0; i < seg.records.size(); ++i) {
        const ZeroRecord& r = seg.records[i];
        if (r.k != seg.k) throw Error(ErrorKind::InvalidArgument, "record order differs from the segment order");
        if (!(r.gamma >= t0 && r.gamma < t1))
            throw Error(ErrorKind::InvalidArgument, "record ordinate outside the segment range");
        if (i > 0 && seg.records[i - 1].gamma > r.gamma)
            throw Error(ErrorKind::InvalidArgument, "segment records not sorted by gamma");
        if (r.multiplicity < 1 || !(r.error_radius >= 0.0))
            throw Error(ErrorKind::InvalidArgument, "record with bad multiplicity or radius");
    }
}

std::vector<ZeroRecord> records_in(const std::vector<ZeroRecord>& v, double t0, double t1) {
    std::vector<ZeroRecord> out;
    for (const auto& r : v)
        if (r.gamma >= t0 && r.gamma < t1) out.push_back(r);
    return out;
}

}  // namespace

Format format_from_string(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "jsonl") return Format::jsonl;
    throw Error(ErrorKind::InvalidArgument, "unknown format '" + std::string(s) + "' (csv|jsonl)");
}

std::string hex_double(double v) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite value in store");
    char buf[64];
    const bool neg = std::signbit(v);
    const auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(v), std::chars_format::hex);
    std::string out = neg ? "-0x" : "0x";
    out.append(buf, res.ptr);
    return out;
}

double parse_hex(std::string_view s) {
    bool neg = false;
    if (!s.empty() && s.front() == '-') {
        neg = true;
        s.remove_prefix(1);
    }
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
        throw Error(ErrorKind::InvalidArgument, "expected a hex float, got '" + std::string(s) + "'");
    s.remove_prefix(2);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::InvalidArgument, "bad hex float '" + std::string(s) + "'");
    return neg ? -v : v;
}

std::uint32_t crc32_of(std::string_view data) {
    uLong c = crc32(0L, Z_NULL, 0);
    c = crc32(c, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
    return static_cast<std::uint32_t>(c);
}

std::vector<Interval> interval_gaps(double t0, double t1, std::vector<Interval> covered) {
    std::sort(covered.begin(), covered.end(), [](const Interval& a, const Interval& b) { return a.t0 < b.t0; });
    std::vector<Interval> gaps;
    double cur = t0;
    for (const auto& c : covered) {
        if (c.t1 <= cur) continue;
        if (c.t0 >= t1) break;
        if (c.t0 > cur) gaps.push_back({cur, c.t0});
        cur = std::max(cur, c.t1);
        if (cur >= t1) break;
    }
    if (cur < t1) gaps.push_back({cur, t1});
    return gaps;
}

ZeroStore::ZeroStore(std::string path) : path_(std::move(path)) { load(); }

void ZeroStore::load() {
    segments_.clear();
    recovery_ = {};
    committed_bytes_ = 0;
    fingerprint_ = kFnvBasis;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    std::size_t pos = 0;
    while (pos < data.size()) {
        const auto bad = [&](const std::string& why) {
            // damage with no committed frame after it is an interrupted write
            if (data.find(std::string("\n") + std::string(kMagic), pos) == std::string::npos) {
                recovery_.discarded_bytes = data.size() - pos;
                return;
            }
            throw Error(ErrorKind::CorruptSegment, why + " at byte " + std::to_string(pos));
        };
        const std::size_t nl = data.find('\n', pos);
        if (nl == std::string::npos || data.compare(pos, kMagic.size(), kMagic) != 0) {
            bad("malformed frame header");
            break;
        }
        std::istringstream header(data.substr(pos + kMagic.size(), nl - pos - kMagic.size()));
        std::size_t len = 0;
        std::string crc_hex;
        if (!(header >> len >> crc_hex)) {
            bad("malformed frame header");
            break;
        }
        const std::size_t body = nl + 1;
        const std::size_t end = body + len + 1;
        if (end > data.size() || data[end - 1] != '\n') {
            bad("short frame");
            break;
        }
        const std::string_view payload(data.data() + body, len);
        if (std::stoul(crc_hex, nullptr, 16) != crc32_of(payload)) {
            bad("checksum mismatch");
            break;
        }
        try {
            segments_.push_back(segment_of(payload));
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrorKind::CorruptSegment, std::string("unreadable payload: ") + e.what());
        }
        fingerprint_ = fnv1a64(std::string_view(data.data() + pos, end - pos), fingerprint_);
        pos = end;
        committed_bytes_ = end;
    }
    recovery_.segments_loaded = segments_.size();
}

void ZeroStore::append(const StoreSegment& seg) {
    const std::string frame = frame_of(payload_of(seg));
    std::error_code ec;
    if (std::filesystem::exists(path_, ec) && std::filesystem::file_size(path_, ec) != committed_bytes_)
        std::filesystem::resize_file(path_, committed_bytes_);
    std::FILE* f = std::fopen(path_.c_str(), "ab");
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open store '" + path_ + "' for writing");
    const bool ok = std::fwrite(frame.data(), 1, frame.size(), f) == frame.size() && std::fflush(f) == 0 &&
                    ::fsync(fileno(f)) == 0;
    std::fclose(f);
    if (!ok) throw Error(ErrorKind::InvalidArgument, "write to store '" + path_ + "' failed");
    segments_.push_back(seg);
    committed_bytes_ += frame.size();
    fingerprint_ = fnv1a64(frame, fingerprint_);
    recovery_.discarded_bytes = 0;
}

void ZeroStore::put_segment(const StoreSegment& seg) {
    validate(seg);
    std::vector<Interval> overlaps;
    for (const auto& s : segments_) {
        if (s.k != seg.k || s.policy_fingerprint != seg.policy_fingerprint) continue;
        const double lo = std::max(s.t_range.t0, seg.t_range.t0);
        const double hi = std::min(s.t_range.t1, seg.t_range.t1);
        if (!(lo < hi)) continue;
        if (records_in(s.records, lo, hi) != records_in(seg.records, lo, hi))
            throw Error(ErrorKind::OverlapConflict, "overlapping segment with differing records for k=" +
                                                        std::to_string(seg.k));
        overlaps.push_back({lo, hi});
    }
    for (const auto& piece : interval_gaps(seg.t_range.t0, seg.t_range.t1, overlaps)) {
        StoreSegment part = seg;
        part.t_range = piece;
        part.records = records_in(seg.records, piece.t0, piece.t1);
        append(part);
    }
}

RangeResult ZeroStore::get_range(int k, double t0, double t1, std::uint64_t policy_fingerprint) const {
    if (!(t0 < t1)) throw Error(ErrorKind::InvalidArgument, "get_range needs t0 < t1");
    RangeResult out;
    std::vector<Interval> covered;
    for (const auto& s : segments_) {
        if (s.k != k || s.policy_fingerprint != policy_fingerprint) continue;
        if (!(s.t_range.t0 < t1 && t0 < s.t_range.t1)) continue;
        covered.push_back(s.t_range);
        for (const auto& r : records_in(s.records, t0, t1)) out.records.push_back(r);
    }
    std::sort(out.records.begin(), out.records.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
    });
    out.gaps = interval_gaps(t0, t1, covered);
    return out;
}

std::string ZeroStore::export_range(int k, double t0, double t1, std::uint64_t policy_fingerprint,
                                    Format format) const {
    const RangeResult r = get_range(k, t0, t1, policy_fingerprint);
    if (!r.gaps.empty())
        throw Error(ErrorKind::GapsPresent, std::to_string(r.gaps.size()) + " uncovered interval(s), first [" +
                                                std::to_string(r.gaps.front().t0) + ", " +
                                                std::to_string(r.gaps.front().t1) + ")");
    std::string out;
    if (format == Format::csv) {
        out = "k,beta_hex,gamma_hex,multiplicity,error_radius_hex,method\n";
        for (const auto& z : r.records) {
            out += std::to_string(z.k) + ',' + hex_double(z.beta) + ',' + hex_double(z.gamma) + ',' +
                   std::to_string(z.multiplicity) + ',' + hex_double(z.error_radius) + ',' +
                   std::string(scan::to_string(z.method)) + '\n';
        }
    } else {
        for (const auto& z : r.records) {
            json j;
            j["k"] = z.k;
            j["beta_hex"] = hex_double(z.beta);
            j["gamma_hex"] = hex_double(z.gamma);
            j["multiplicity"] = z.multiplicity;
            j["error_radius_hex"] = hex_double(z.error_radius);
            j["method"] = std::string(scan::to_string(z.method));
            out += j.dump() + '\n';
        }
    }
    return out;
}

std::vector<ZeroRecord> parse_export(std::string_view data, Format format) {
    std::vector<ZeroRecord> out;
    std::istringstream in{std::string(data)};
    std::string line;
    bool header = format == Format::csv;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            if (line != "k,beta_hex,gamma_hex,multiplicity,error_radius_hex,method")
                throw Error(ErrorKind::InvalidArgument, "unexpected csv header '" + line + "'");
            header = false;
            continue;
        }
        ZeroRecord r;
        if (format == Format::csv) {
            std::vector<std::string> f;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
            if (f.size() != 6) throw Error(ErrorKind::InvalidArgument, "csv row needs 6 fields: '" + line + "'");
            r.k = std::stoi(f[0]);
            r.beta = parse_hex(f[1]);
            r.gamma = parse_hex(f[2]);
            r.multiplicity = std::stoi(f[3]);
            r.error_radius = parse_hex(f[4]);
            r.method = scan::method_from_string(f[5]);
        } else {
            json j;
            try {
                j = json::parse(line);
                r.k = j.at("k").get<int>();
                r.beta = parse_hex(j.at("beta_hex").get<std::string>());
                r.gamma = parse_hex(j.at("gamma_hex").get<std::string>());
                r.multiplicity = j.at("multiplicity").get<int>();
                r.error_radius = parse_hex(j.at("error_radius_hex").get<std::string>());
                r.method = scan::method_from_string(j.at("method").get<std::string>());
            } catch (const json::exception& e) {
                throw Error(ErrorKind::InvalidArgument, std::string("bad jsonl row: ") + e.what());
            }
        }
        out.push_back(r);
    }
    return out;
}

void ZeroStore::import_range(std::string_view data, Format format, int k, double t0, double t1,
                             std::uint64_t policy_fingerprint, const std::string& created_at) {
    StoreSegment seg;
    seg.k = k;
    seg.t_range = {t0, t1};
    seg.policy_fingerprint = policy_fingerprint;
    seg.records = parse_export(data, format);
    seg.created_at = created_at;
    seg.tool_version = kToolVersion;
    put_segment(seg);
}

}  // namespace zdl::store
