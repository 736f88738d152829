#pragma once

// Continuous-argument tracking along axis-aligned polylines and rectangle
// winding numbers. Phases are unwrapped by adaptive bisection: a segment is
// accepted only when the wrapped phase step is below π/2 and the segment is
// short against the local log-derivative, |b - a| · max|f'/f| ≤ 1.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "zdl/config.hpp"
#include "zdl/evalcore.hpp"

namespace zdl::arg {

enum class FunctionKind {
    zeta_deriv,  ///< zeta^(k)
    normalized,  ///< G_k for k ≥ 1; zeta itself for k = 0 (both tend to 1 at +∞)
    h_zeta,      ///< h(s) zeta(s)
};

struct FunctionId {
    FunctionKind kind = FunctionKind::zeta_deriv;
    int order = 0;

    static FunctionId zeta(int k) { return {FunctionKind::zeta_deriv, k}; }
    static FunctionId G(int k) { return {FunctionKind::normalized, k}; }
    static FunctionId h_zeta() { return {FunctionKind::h_zeta, 0}; }

    [[nodiscard]] std::string name() const;
    friend bool operator==(const FunctionId&, const FunctionId&) = default;
};

/// Value of a tracked function at one point, with its log-derivative f'/f.
struct PointValue {
    mp::Complex value;
    mp::Real radius;
    std::complex<double> log_deriv;
    int precision_bits = 0;
};

PointValue evaluate(const FunctionId& f, const eval::CPoint& s, const eval::PrecisionPolicy& policy,
                    const EvalSettings& settings = {});

struct Sample {
    eval::CPoint point;
    double phase = 0.0;    ///< unwrapped
    double log_abs = 0.0;  ///< log|f|
    std::complex<double> log_deriv;
};

struct ArgTrace {
    std::vector<eval::CPoint> vertices;
    std::vector<Sample> samples;
    double total_delta = 0.0;
};

struct RectRegion {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;

    RectRegion() = default;
    RectRegion(double s0, double s1, double t0, double t1);

    [[nodiscard]] bool contains(std::complex<double> z) const {
        return z.real() >= sigma_min && z.real() <= sigma_max && z.imag() >= t_min && z.imag() <= t_max;
    }
    [[nodiscard]] double width() const { return sigma_max - sigma_min; }
    [[nodiscard]] double height() const { return t_max - t_min; }
    [[nodiscard]] std::complex<double> center() const {
        return {(sigma_min + sigma_max) / 2.0, (t_min + t_max) / 2.0};
    }
    /// Counter-clockwise boundary starting at the bottom-left corner.
    [[nodiscard]] std::vector<eval::CPoint> boundary() const;
    [[nodiscard]] RectRegion conj() const { return {sigma_min, sigma_max, -t_max, -t_min}; }
    friend bool operator==(const RectRegion&, const RectRegion&) = default;
};

struct WindingReport {
    RectRegion rect;  ///< the rectangle actually counted (after any perturbation)
    double boundary_delta = 0.0;
    int count = 0;
    double residual = 0.0;
    /// Argument change along bottom, right, top and left edges (counter-clockwise).
    std::array<double, 4> edge_deltas{};
    int perturbations = 0;
    std::vector<Sample> boundary;
};

struct TrackOptions {
    /// Unwrapped phase assigned to the first sample; principal value when unset.
    std::optional<double> start_phase;
    /// Adaptive bisection stops at 2^-20 per unit length (relative for sub-unit segments).
    double min_segment_fraction = 0x1p-20;
};

ArgTrace track_arg(const FunctionId& f, const std::vector<eval::CPoint>& path, const eval::PrecisionPolicy& policy,
                   const EvalSettings& settings = {}, const TrackOptions& options = {});

struct InfinityArg {
    double arg = 0.0;
    double anchor = 0.0;  ///< arcsin(Im f / |f|) at the far point
    ArgTrace trace;
};

/// arg f(endpoint) by continuous variation from +∞ along Im s = Im endpoint.
InfinityArg arg_from_plus_infinity(const FunctionId& f, const eval::CPoint& endpoint, double sigma_far,
                                   const eval::PrecisionPolicy& policy, const EvalSettings& settings = {});

/// Winding count of the rectangle without any perturbation; throws ZeroOnPath.
WindingReport winding_exact(const FunctionId& f, const RectRegion& rect, const eval::PrecisionPolicy& policy,
                            const EvalSettings& settings = {});

/// Winding count with automatic boundary perturbation when a zero sits on an edge.
WindingReport winding_number(const FunctionId& f, const RectRegion& rect, const eval::PrecisionPolicy& policy,
                             const EvalSettings& settings = {});

/// Power sums Σ (ρ - center)^p, p = 1..max_power, over the zeros enclosed by
/// a closed sample loop, from Σ z_mid^p Δlog f / (2πi).
std::vector<std::complex<double>> boundary_power_sums(const std::vector<Sample>& loop, std::complex<double> center,
                                                      int max_power);

/// Phase increment reduced to (-π, π].
double wrap_phase(double d);

}  // namespace zdl::arg
