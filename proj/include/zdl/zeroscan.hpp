#pragma once

// Zero isolation for zeta^(k): winding counts on adaptively split cells,
// seeds from boundary moments, Newton refinement and certification by nested
// squares. Strip scans tile the region into bands that are processed
// independently and merged in ordinate order.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "zdl/argtrace.hpp"
#include "zdl/config.hpp"
#include "zdl/evalcore.hpp"

namespace zdl::scan {

enum class Method { winding_bisect, newton, critical_line_sign_change };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct ZeroRecord {
    int k = 0;
    double beta = 0.0;
    double gamma = 0.0;
    int multiplicity = 1;
    double error_radius = 0.0;
    Method method = Method::newton;

    [[nodiscard]] std::complex<double> z() const { return {beta, gamma}; }
    [[nodiscard]] bool disk_intersects(const ZeroRecord& o) const {
        return std::abs(z() - o.z()) <= error_radius + o.error_radius;
    }
    friend bool operator==(const ZeroRecord&, const ZeroRecord&) = default;
};

/// Half-width of the inner certification square.
inline constexpr double kCertifyHalfWidth = 0x1p-35;

struct IsolationStats {
    long windings = 0;
    long newton_steps = 0;
    long splits = 0;
    int max_depth = 0;
    double max_residual = 0.0;
};

struct Isolation {
    arg::RectRegion rect;
    int winding_count = 0;
    std::vector<ZeroRecord> records;  ///< sorted by gamma, then beta
    IsolationStats stats;
};

/// All zeros of zeta^(k) strictly inside `rect`. The rectangle's boundary must
/// be zero-free; ZeroOnPath propagates otherwise.
Isolation isolate_zeros(int k, const arg::RectRegion& rect, const eval::PrecisionPolicy& policy,
                        const Settings& settings = {});

/// Newton iteration on zeta^(k) / zeta^(k+1) from `seed`; nullopt on divergence.
std::optional<std::complex<double>> newton_refine(int k, std::complex<double> seed, const eval::PrecisionPolicy& policy,
                                                  const EvalSettings& settings, long* steps = nullptr);

/// Certified record for a zero near `z`: nested squares of half-width r and
/// r·√2 must report the same positive count.
std::optional<ZeroRecord> certify(int k, std::complex<double> z, const eval::PrecisionPolicy& policy,
                                  const EvalSettings& settings, IsolationStats* stats = nullptr);

struct StripScan {
    int k = 0;
    double t_requested = 0.0;
    /// The height actually used: t_requested unless a zero ordinate lay within 1e-8.
    double t_effective = 0.0;
    /// Union of the scanned tiles (edges possibly perturbed off zeros).
    arg::RectRegion region;
    int winding_total = 0;
    std::vector<ZeroRecord> records;  ///< filtered to the requested window, sorted by gamma
    std::vector<std::string> warnings;
    IsolationStats stats;
};

/// Zeros with t0 < gamma ≤ t1 and beta > sigma_left, by tiling [sigma_left, sigma_right] × [t0, t1].
StripScan scan_window(int k, double t0, double t1, const eval::PrecisionPolicy& policy, const Settings& settings = {});

/// Zeros with 0 < gamma ≤ T and beta > 0 (the bottom edge sits at scan.t_floor).
StripScan scan_strip(int k, double T, const eval::PrecisionPolicy& policy, const Settings& settings = {});

/// Merges records whose certified disks intersect; the merged multiplicity is
/// recounted by a winding around the union.
std::vector<ZeroRecord> merge_records(std::vector<ZeroRecord> records, const eval::PrecisionPolicy& policy,
                                      const Settings& settings = {});

struct OrdinateSet {
    int ell = 0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::vector<double> ordinates;  ///< strictly increasing
    std::vector<std::vector<int>> sources;
};

/// Distinct ordinates of critical-line zeros of zeta, zeta', ..., zeta^(ell) in [t_min, t_max].
OrdinateSet critical_ordinates(int ell, double t_min, double t_max, const eval::PrecisionPolicy& policy,
                               const Settings& settings = {});

/// Ordinates of sign changes of the real function h·zeta on the critical line.
std::vector<double> critical_line_zeros(double t_min, double t_max, const eval::PrecisionPolicy& policy,
                                        const Settings& settings = {});

struct ChainViolation {
    double ordinate = 0.0;
    int order = 0;
    bool below_threshold = false;  ///< under t = 100, reported only
};

/// Ordinates of zeta^(j) zeros (j ≥ 1) that lack a zeta^(j-1) ordinate within 1e-8.
std::vector<ChainViolation> ordinate_chain_report(const OrdinateSet& set);

}  // namespace zdl::scan
