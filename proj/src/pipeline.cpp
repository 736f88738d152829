#include "zdl/pipeline.hpp"

#include <algorithm>

#include "zdl/errors.hpp"
#include "zdl/version.hpp"

namespace zdl::pipeline {
namespace {

std::vector<scan::ZeroRecord> scan_piece(int k, double a, double b, const eval::PrecisionPolicy& policy,
                                         const Settings& settings) {
    // nothing lives below the strip floor
    // scan diagnostics are not kept: a cached range must report like a fresh one
    const double lo = std::max(a, settings.scan.t_floor);
    if (!(lo < b)) return {};
    scan::StripScan s = scan::scan_window(k, lo, b, policy, settings);
    std::vector<scan::ZeroRecord> out;
    for (const auto& r : s.records)
        if (r.gamma >= a && r.gamma < b) out.push_back(r);
    return out;
}

std::vector<scan::ZeroRecord> collect(store::ZeroStore* store, int k, double t0, double t1,
                                      const eval::PrecisionPolicy& policy, const Settings& settings,
                                      const std::string& created_at) {
    if (!store) return scan_piece(k, t0, t1, policy, settings);
    const std::uint64_t fp = policy.fingerprint();
    for (const auto& gap : store->get_range(k, t0, t1, fp).gaps) {
        store::StoreSegment seg;
        seg.k = k;
        seg.t_range = gap;
        seg.policy_fingerprint = fp;
        seg.records = scan_piece(k, gap.t0, gap.t1, policy, settings);
        seg.created_at = created_at;
        seg.tool_version = kToolVersion;
        store->put_segment(seg);
    }
    return store->get_range(k, t0, t1, fp).records;
}

}  // namespace

std::vector<scan::ZeroRecord> zeros_in(store::ZeroStore* store, int k, double t0, double t1,
                                       const eval::PrecisionPolicy& policy, const Settings& settings,
                                       const std::string& created_at) {
    return collect(store, k, t0, t1, policy, settings, created_at);
}

scan::StripScan strip_from_store(store::ZeroStore* store, int k, double T, const eval::PrecisionPolicy& policy,
                                 const Settings& settings, const std::string& created_at) {
    scan::StripScan s;
    s.k = k;
    s.t_requested = T;
    s.t_effective = T + 1e-6;
    s.records = collect(store, k, settings.scan.t_floor, T + 1e-6, policy, settings, created_at);
    std::erase_if(s.records, [](const scan::ZeroRecord& r) { return !(r.beta > 0.0); });
    for (const auto& r : s.records) s.winding_total += r.multiplicity;
    s.region = arg::RectRegion(settings.scan.sigma_left, settings.scan.sigma_right, settings.scan.t_floor, T + 1e-6);
    return s;
}

}  // namespace zdl::pipeline
