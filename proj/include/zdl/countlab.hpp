#pragma once

// Zero counting against the main term, bound profiles and the diagnostics
// built on enumerated zeros: argument profiles of G_l off the line, the
// partial-fraction residual, sign scans of zeta^(l)/zeta^(l-1), the F_k sum,
// dyadic boxes near height T and angle sums.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zdl/argtrace.hpp"
#include "zdl/config.hpp"
#include "zdl/evalcore.hpp"
#include "zdl/zeroscan.hpp"

namespace zdl::count {

/// (T/2π) log(T/(2πe)) for k = 0 and (T/2π) log(T/(4πe)) for k ≥ 1.
double main_term(int k, double T);

enum class ProfileId { log, log_over_loglog, fgh_sqrt, custom };

/// A positive increasing function of T ≥ 10.
struct BoundProfile {
    ProfileId id = ProfileId::log_over_loglog;
    std::string name;  ///< "log", "loglog", "fgh", or "custom:<expr>"
    std::function<double(double)> formula;

    double operator()(double T) const { return formula(T); }

    static BoundProfile log();
    static BoundProfile log_over_loglog();
    static BoundProfile fgh();
    /// Expression in T with + - * / ^, parentheses, pi, e and log, sqrt, exp, abs.
    static BoundProfile custom(const std::string& expr);
    /// Parses a `--phi` value; throws InvalidArgument.
    static BoundProfile parse(const std::string& spec);
};

/// The three fixed profiles in report-column order.
std::vector<BoundProfile> standard_profiles();

struct EdgeContribs {
    double bottom = 0.0;        ///< (1/2π) Δarg G_k along the bottom edge
    double right = 0.0;         ///< (1/2π) Δarg G_k along the right edge
    double top_arg_G = 0.0;     ///< (1/2π) arg G_k(1/2 + iT) from +∞
    double top_arg_zeta = 0.0;  ///< (1/2π) arg zeta(1/2 + iT) from +∞
};

struct CountReport {
    int k = 0;
    double T = 0.0;  ///< height actually counted
    int n_exact = 0;
    int n_winding = 0;
    double main_term = 0.0;
    double e_term = 0.0;
    EdgeContribs edge_contribs;
    /// n_exact - main_term - top_arg_G - top_arg_zeta
    double remainder = 0.0;
    std::map<std::string, double> bound_ratios;
    double max_winding_residual = 0.0;
    std::vector<std::string> warnings;
};

/// N_k(T) by enumeration and by one winding over [sigma_left, sigma_k] × [t_floor, T].
/// `scan` may be a strip scan to any height ≥ T; it is computed when absent.
CountReport count(int k, double T, const eval::PrecisionPolicy& policy, const Settings& settings = {},
                  const std::optional<scan::StripScan>& scan = std::nullopt,
                  const std::vector<BoundProfile>& extra_profiles = {});

struct ArgProfilePoint {
    double sigma = 0.0;
    double T = 0.0;  ///< height used (moved off a zero when needed)
    double arg = 0.0;
    double envelope = 0.0;  ///< Φ(T) + log log T / (σ - 1/2)
};

std::vector<ArgProfilePoint> arg_profile(int ell, double T, const std::vector<double>& sigmas,
                                         const eval::PrecisionPolicy& policy, const BoundProfile& phi,
                                         const Settings& settings = {});

struct Lemma23Result {
    double residual = 0.0;         ///< |G'/G(s) - Σ 1/(s - ρ)| / log t
    double residual_no_sum = 0.0;  ///< |G'/G(s)| / log t
    double zero_sum_norm = 0.0;    ///< |Σ 1/(s - ρ)| / log t
    int zeros_used = 0;
};

/// Zeros are the enumerated zeros of zeta^(k); those with |γ - t| < 1 enter the sum.
Lemma23Result lemma23_residual(int k, const eval::CPoint& s, const std::vector<scan::ZeroRecord>& zeros,
                               const eval::PrecisionPolicy& policy, const Settings& settings = {});

enum class SignStatus { negative, nonnegative, skipped };

struct SignPoint {
    double sigma = 0.0;
    double t = 0.0;
    double re = 0.0;
    double im = 0.0;
    SignStatus status = SignStatus::skipped;
};

struct Lemma4Report {
    int ell = 0;
    std::vector<SignPoint> points;
    int negative = 0;
    int nonnegative = 0;
    int skipped = 0;
    /// Least grid t from which every grid point (at all larger t too) is negative.
    std::optional<double> uniform_from;
};

Lemma4Report lemma4_scan(int ell, const std::vector<double>& sigmas, const std::vector<double>& ts,
                         const eval::PrecisionPolicy& policy, const Settings& settings = {});

struct FSumResult {
    double value = 0.0;       ///< truncated Σ over β > 1/2, |γ - t| ≤ window
    double comparison = 0.0;  ///< -Re ζ^(k+1)/ζ^(k)(1/2+it) - (1/2) log(t/2π)
    double difference = 0.0;  ///< value - comparison
    double tail_bound = 0.0;
    int zeros_used = 0;
    std::string truncation_note;
};

FSumResult f_sum(int k, double t, double window, const std::vector<scan::ZeroRecord>& zeros,
                 const eval::PrecisionPolicy& policy, const Settings& settings = {});

struct Box {
    int j = 0;
    double Y = 0.0;
};

/// Dyadic regions R_1..R_N covering D(T) = {Re w ≥ 1/2, |Im w - T| ≤ 1}.
/// B_j = [1/2, 1/2 + Y_j] × [T - Y_j, T + Y_j] (closed), R_1 = B_1,
/// R_j = (B_j - B_{j-1}) ∩ D, and R_N also takes D - B_N.
struct BoxPartition {
    double T = 0.0;
    double X = 0.0;
    int n_boxes = 0;
    std::vector<Box> boxes;

    [[nodiscard]] bool in_domain(std::complex<double> w) const;
    [[nodiscard]] bool in_B(int j, std::complex<double> w) const;
    [[nodiscard]] bool in_R(int j, std::complex<double> w) const;
    /// Index j of the region containing w, or 0 outside D(T).
    [[nodiscard]] int region_of(std::complex<double> w) const;
};

BoxPartition box_partition(double T);

struct BoxCount {
    int j = 0;
    double Y = 0.0;
    int count = 0;
    double envelope = 0.0;  ///< Y_j log T + Φ(2T)
};

struct BoxCounts {
    std::vector<BoxCount> boxes;
    int domain_total = 0;
    bool membership_ok = true;  ///< each zero in D lies in exactly one R_j
    double max_ratio = 0.0;
};

BoxCounts box_counts(int k, const BoxPartition& p, const std::vector<scan::ZeroRecord>& zeros, const BoundProfile& phi);

/// Θ(a; b, c) = |arg((b - a)/(c - a))|.
double theta_angle(std::complex<double> a, std::complex<double> b, std::complex<double> c);

struct ThetaResult {
    double sum = 0.0;
    int zeros_used = 0;
    double x_log_t = 0.0;
    double delta_arg = 0.0;  ///< |arg G_k(1/2+iT) - arg G_k(1/2+X+iT)|
};

ThetaResult theta_sum(int k, double T, double X, const std::vector<scan::ZeroRecord>& zeros,
                      const eval::PrecisionPolicy& policy, const Settings& settings = {});

std::string_view to_string(SignStatus s);

}  // namespace zdl::count
