#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "zdl/errors.hpp"
#include "zdl/zeroscan.hpp"

using namespace zdl;
using arg::RectRegion;
using scan::ZeroRecord;

namespace {

const eval::PrecisionPolicy kPolicy{};

bool same_disk_set(const std::vector<ZeroRecord>& a, const std::vector<ZeroRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].disk_intersects(b[i]) || a[i].multiplicity != b[i].multiplicity) return false;
    return true;
}

void check_records(const std::vector<ZeroRecord>& recs) {
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].error_radius <= 1e-10);
        CHECK(recs[i].multiplicity >= 1);
        if (i) CHECK(recs[i - 1].gamma <= recs[i].gamma);
    }
}

}  // namespace

TEST_CASE("method names round-trip") {
    for (auto m : {scan::Method::winding_bisect, scan::Method::newton, scan::Method::critical_line_sign_change})
        CHECK(scan::method_from_string(scan::to_string(m)) == m);
    CHECK_THROWS_AS(scan::method_from_string("guess"), Error);
}

TEST_CASE("first zero of zeta") {
    const auto iso = scan::isolate_zeros(0, RectRegion(0.4, 0.6, 14.0, 15.0), kPolicy);
    REQUIRE(iso.records.size() == 1);
    const ZeroRecord& r = iso.records[0];
    CHECK(r.multiplicity == 1);
    CHECK(iso.winding_count == 1);
    // independent oracle: sign change of the real function h zeta on the line
    const auto sc = scan::critical_line_zeros(14.0, 15.0, kPolicy);
    REQUIRE(sc.size() == 1);
    CHECK(std::fabs(sc[0] - 14.134725141734693) < 1e-11);
    CHECK(std::abs(r.z() - std::complex<double>(0.5, sc[0])) <= r.error_radius + 1e-11);
}

TEST_CASE("isolation counts match windings") {
    for (int k = 1; k <= 3; ++k) {
        const RectRegion rect(0.05, 3.0, 10.0, 20.0);
        const auto iso = scan::isolate_zeros(k, rect, kPolicy);
        const auto w = arg::winding_number(arg::FunctionId::zeta(k), rect, kPolicy);
        int total = 0;
        for (const auto& r : iso.records) total += r.multiplicity;
        CHECK(total == w.count);
        check_records(iso.records);
    }
    const auto none = scan::isolate_zeros(1, RectRegion(2.0, 3.0, 10.0, 20.0), kPolicy);
    const auto wn = arg::winding_number(arg::FunctionId::zeta(1), RectRegion(2.0, 3.0, 10.0, 20.0), kPolicy);
    CHECK(static_cast<int>(none.records.size()) == wn.count);
    for (int k = 0; k <= 4; ++k) CHECK(scan::isolate_zeros(k, RectRegion(10.0, 12.0, 5.0, 300.0), kPolicy).records.empty());
}

TEST_CASE("certification radius") {
    const auto rec = scan::certify(0, {0.5, 14.134725141734693}, kPolicy, {});
    REQUIRE(rec.has_value());
    CHECK(rec->error_radius > scan::kCertifyHalfWidth * std::sqrt(2.0));
    CHECK(rec->error_radius < 1e-10);
    CHECK_FALSE(scan::certify(0, {0.5, 14.0}, kPolicy, {}).has_value());
}

TEST_CASE("Newton from a nearby seed") {
    long steps = 0;
    const auto z = scan::newton_refine(1, {1.0, 23.0}, kPolicy, {}, &steps);
    REQUIRE(z.has_value());
    CHECK(steps > 0);
    const auto v = eval::eval_zeta_deriv(eval::CPoint(z->real(), z->imag()), 1, kPolicy).approx();
    CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("strip to T = 100 holds 29 zeros of zeta, all on the line") {
    const auto s = scan::scan_strip(0, 100.0, kPolicy);
    REQUIRE(s.records.size() == 29);
    CHECK(s.winding_total == 29);
    CHECK(s.stats.max_residual <= 1e-6);
    check_records(s.records);
    const auto sc = scan::critical_line_zeros(1.0, 100.0, kPolicy);
    REQUIRE(sc.size() == 29);
    for (std::size_t i = 0; i < sc.size(); ++i) {
        CHECK(std::fabs(s.records[i].beta - 0.5) <= s.records[i].error_radius);
        CHECK(std::fabs(s.records[i].gamma - sc[i]) <= s.records[i].error_radius + 1e-11);
    }
}

TEST_CASE("strip counts for derivatives agree with one big winding") {
    const double T = 4.0 * std::numbers::pi * std::exp(1.0);
    for (int k : {1, 2}) {
        const double top = k == 1 ? T : 100.0;
        const auto s = scan::scan_strip(k, top, kPolicy);
        const auto w = arg::winding_number(arg::FunctionId::zeta(k), RectRegion(1e-6, 30.0, 1.0, s.t_effective), kPolicy);
        int total = 0;
        for (const auto& r : s.records) total += r.multiplicity;
        CHECK(total == w.count);
        CHECK(s.winding_total == w.count);
        check_records(s.records);
    }
}

TEST_CASE("shifted tilings give the same zeros") {
    const auto whole = scan::scan_window(1, 10.0, 40.0, kPolicy);
    auto parts = scan::scan_window(1, 10.0, 24.3, kPolicy).records;
    const auto rest = scan::scan_window(1, 24.3, 40.0, kPolicy).records;
    parts.insert(parts.end(), rest.begin(), rest.end());
    CHECK(same_disk_set(whole.records, parts));

    Settings tall;
    tall.scan.tile_height = 3.5;
    CHECK(same_disk_set(whole.records, scan::scan_window(1, 10.0, 40.0, kPolicy, tall).records));
}

TEST_CASE("thread count does not change the result") {
    Settings one;
    one.scan.threads = 1;
    Settings many;
    many.scan.threads = 4;
    const auto a = scan::scan_window(2, 30.0, 60.0, kPolicy, one).records;
    const auto b = scan::scan_window(2, 30.0, 60.0, kPolicy, many).records;
    CHECK(a == b);
}

TEST_CASE("strip scans are monotone in T") {
    const auto lo = scan::scan_strip(1, 50.0, kPolicy).records;
    const auto hi = scan::scan_strip(1, 80.0, kPolicy).records;
    REQUIRE(lo.size() <= hi.size());
    for (const auto& r : lo)
        CHECK(std::any_of(hi.begin(), hi.end(), [&](const ZeroRecord& q) { return q.disk_intersects(r); }));
}

TEST_CASE("nothing below the strip floor") {
    // ζ^(k) is zero-free on [1e-6, 30] × [0.01, 1]; the guard covers the nearby pole
    eval::PrecisionPolicy wide = kPolicy;
    wide.guard_bits_base = 128;
    for (int k = 0; k <= 4; ++k) {
        const auto w = arg::winding_number(arg::FunctionId::zeta(k), RectRegion(1e-6, 30.0, 0.01, 1.0), wide);
        CHECK(w.count == 0);
        CHECK(w.residual <= 1e-6);
    }
}

TEST_CASE("merging duplicate records") {
    const auto iso = scan::isolate_zeros(0, RectRegion(0.4, 0.6, 14.0, 15.0), kPolicy);
    REQUIRE(iso.records.size() == 1);
    const auto merged = scan::merge_records({iso.records[0], iso.records[0]}, kPolicy);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].multiplicity == 1);
}

TEST_CASE("critical ordinates") {
    const auto one = scan::critical_ordinates(0, 14.0, 15.0, kPolicy);
    REQUIRE(one.ordinates.size() == 1);
    CHECK(std::fabs(one.ordinates[0] - 14.134725141734693) < 1e-10);
    CHECK(scan::critical_ordinates(0, 10.0, 13.0, kPolicy).ordinates.empty());
    CHECK_THROWS_AS(scan::critical_ordinates(0, 5.0, 13.0, kPolicy), Error);

    const auto two = scan::critical_ordinates(2, 100.0, 125.0, kPolicy);
    const auto zeta_only = scan::critical_ordinates(0, 100.0, 125.0, kPolicy);
    CHECK(two.ordinates == zeta_only.ordinates);
    CHECK(std::is_sorted(two.ordinates.begin(), two.ordinates.end()));
    CHECK(std::adjacent_find(two.ordinates.begin(), two.ordinates.end()) == two.ordinates.end());
    CHECK(scan::ordinate_chain_report(two).empty());
}
