#include "zdl/argtrace.hpp"

#include <cmath>
#include <numbers>

#include "zdl/errors.hpp"

namespace zdl::arg {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kStepBudget = 1.0;  // max segment length times |f'/f|

eval::PrecisionPolicy bumped(const eval::PrecisionPolicy& p) {
    eval::PrecisionPolicy q = p;
    q.output_bits += 32;
    q.guard_bits_base += 32;
    return q;
}

struct RawSample {
    eval::CPoint point;
    double raw_arg = 0.0;
    double log_abs = 0.0;
    std::complex<double> log_deriv;
};

class Tracker {
public:
    Tracker(const FunctionId& f, const eval::PrecisionPolicy& policy, const EvalSettings& settings,
            double min_fraction)
        : f_(f), policy_(policy), settings_(settings), min_fraction_(min_fraction) {}

    RawSample sample(const eval::CPoint& s) const {
        PointValue v = evaluate(f_, s, policy_, settings_);
        if (disk_has_zero(v)) {
            v = evaluate(f_, s, bumped(policy_), settings_);
            if (disk_has_zero(v)) throw Error(ErrorKind::ZeroOnPath, "certified disk contains 0 at " + f_.name(), s.z());
        }
        return RawSample{s, v.value.arg(), v.value.log_abs(), v.log_deriv};
    }

    /// Tracks a polyline; per-edge sums land in `edges` when non-null.
    ArgTrace run(const std::vector<eval::CPoint>& path, std::optional<double> start_phase,
                 std::vector<double>* edges) const {
        if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
        ArgTrace out;
        out.vertices = path;
        RawSample cur = sample(path.front());
        const double start = start_phase.value_or(cur.raw_arg);
        out.samples.push_back(Sample{cur.point, start, cur.log_abs, cur.log_deriv});
        mp::ExactSum total;
        for (std::size_t e = 1; e < path.size(); ++e) {
            mp::ExactSum edge_sum;
            const eval::CPoint& b = path[e];
            if (!(b == cur.point)) {
                const double len = std::abs(b.z() - cur.point.z());
                const double min_len = min_fraction_ * std::min(1.0, len);
                std::vector<RawSample> stack{sample(b)};
                while (!stack.empty()) {
                    const RawSample& right = stack.back();
                    if (accept(cur, right)) {
                        const double inc = wrap_phase(right.raw_arg - cur.raw_arg);
                        total.add(inc);
                        edge_sum.add(inc);
                        cur = right;
                        stack.pop_back();
                        out.samples.push_back(Sample{cur.point, start + total.value(), cur.log_abs, cur.log_deriv});
                        continue;
                    }
                    const std::complex<double> a = cur.point.z();
                    const std::complex<double> c = right.point.z();
                    const std::complex<double> mid = (a + c) * 0.5;
                    if (std::abs(c - a) < min_len || mid == a || mid == c) {
                        throw Error(ErrorKind::ZeroOnPath, "refinement limit reached near a zero of " + f_.name(),
                                    mid);
                    }
                    stack.push_back(sample(eval::CPoint(mid.real(), mid.imag(), cur.point.precision_bits)));
                }
            }
            if (edges) edges->push_back(edge_sum.value());
        }
        out.total_delta = total.value();
        return out;
    }

private:
    static bool disk_has_zero(const PointValue& v) {
        if (v.value.re().is_zero() && v.value.im().is_zero()) return true;
        return v.value.log_abs() <= std::log(v.radius.to_double());
    }

    static bool accept(const RawSample& a, const RawSample& b) {
        if (std::fabs(wrap_phase(b.raw_arg - a.raw_arg)) >= kPi / 2.0) return false;
        const double len = std::abs(b.point.z() - a.point.z());
        const double ld = std::max(std::abs(a.log_deriv), std::abs(b.log_deriv));
        return len * ld <= kStepBudget;
    }

    FunctionId f_;
    eval::PrecisionPolicy policy_;
    EvalSettings settings_;
    double min_fraction_;
};

}  // namespace

std::string FunctionId::name() const {
    switch (kind) {
        case FunctionKind::zeta_deriv: return order == 0 ? "zeta" : "zeta^(" + std::to_string(order) + ")";
        case FunctionKind::normalized: return order == 0 ? "zeta" : "G_" + std::to_string(order);
        case FunctionKind::h_zeta: return "h*zeta";
    }
    return "?";
}

double wrap_phase(double d) {
    double r = std::remainder(d, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

PointValue evaluate(const FunctionId& f, const eval::CPoint& s, const eval::PrecisionPolicy& policy,
                    const EvalSettings& settings) {
    if (f.order < 0 || f.order > settings.k_max + 1)
        throw Error(ErrorKind::InvalidArgument, "order out of range for " + f.name());
    PointValue out;
    switch (f.kind) {
        case FunctionKind::zeta_deriv: {
            const int k = f.order;
            eval::DerivativeSet d = eval::eval_zeta_derivs(s, k + 1, policy, settings);
            out.log_deriv = (d.values[k + 1] / d.values[k]).to_cdouble();
            out.value = std::move(d.values[static_cast<std::size_t>(k)]);
            out.radius = std::move(d.radii[static_cast<std::size_t>(k)]);
            out.precision_bits = d.precision_bits;
            return out;
        }
        case FunctionKind::normalized: {
            const int k = f.order;
            // |prefactor| = 2^sigma (log 2)^-k
            const double pre_log2 = s.re - k * std::log2(std::log(2.0));
            eval::DerivativeSet d = eval::eval_zeta_derivs(s, k + 1, policy, settings, policy.target_log2() - pre_log2);
            out.log_deriv = (d.values[k + 1] / d.values[k]).to_cdouble();
            if (k >= 1) out.log_deriv += std::log(2.0);
            if (k == 0) {
                out.value = std::move(d.values[0]);
                out.radius = std::move(d.radii[0]);
            } else {
                const mp::Complex pre = eval::g_prefactor(s, k, d.precision_bits);
                out.value = pre * d.values[static_cast<std::size_t>(k)];
                out.radius = d.radii[static_cast<std::size_t>(k)] * (mp::abs(pre) * (1.0 + 0x1p-40));
            }
            out.precision_bits = d.precision_bits;
            return out;
        }
        case FunctionKind::h_zeta: {
            eval::GammaFactor g = eval::eval_gamma_factor(s, policy);
            eval::DerivativeSet d = eval::eval_zeta_derivs(s, 1, policy, settings);
            out.log_deriv = g.h_log_deriv.approx() + (d.values[1] / d.values[0]).to_cdouble();
            out.value = g.h.value * d.values[0];
            const mp::Real ah = mp::abs(g.h.value);
            const mp::Real az = mp::abs(d.values[0]);
            out.radius = ah * d.radii[0] + az * g.h.error_radius + g.h.error_radius * d.radii[0];
            out.radius *= 1.0 + 0x1p-40;
            out.precision_bits = d.precision_bits;
            return out;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown function id");
}

RectRegion::RectRegion(double s0, double s1, double t0, double t1)
    : sigma_min(s0), sigma_max(s1), t_min(t0), t_max(t1) {
    if (!(s0 < s1) || !(t0 < t1) || !std::isfinite(s0) || !std::isfinite(s1) || !std::isfinite(t0) ||
        !std::isfinite(t1))
        throw Error(ErrorKind::InvalidArgument, "degenerate rectangle");
}

std::vector<eval::CPoint> RectRegion::boundary() const {
    return {eval::CPoint(sigma_min, t_min), eval::CPoint(sigma_max, t_min), eval::CPoint(sigma_max, t_max),
            eval::CPoint(sigma_min, t_max), eval::CPoint(sigma_min, t_min)};
}

ArgTrace track_arg(const FunctionId& f, const std::vector<eval::CPoint>& path, const eval::PrecisionPolicy& policy,
                   const EvalSettings& settings, const TrackOptions& options) {
    return Tracker(f, policy, settings, options.min_segment_fraction).run(path, options.start_phase, nullptr);
}

InfinityArg arg_from_plus_infinity(const FunctionId& f, const eval::CPoint& endpoint, double sigma_far,
                                   const eval::PrecisionPolicy& policy, const EvalSettings& settings) {
    if (!(sigma_far >= settings.sigma_k))
        throw Error(ErrorKind::InvalidArgument, "far point left of the configured sigma_k");
    const eval::CPoint far(sigma_far, endpoint.im, endpoint.precision_bits);
    const PointValue v = evaluate(f, far, policy, settings);
    const std::complex<double> fv = v.value.to_cdouble();
    if (!(std::abs(fv - 1.0) < 0.5))
        throw Error(ErrorKind::FarPointNotDominated, f.name() + " is not within 1/2 of 1 at the far point", far.z());
    InfinityArg out;
    out.anchor = std::asin(fv.imag() / std::abs(fv));
    TrackOptions opt;
    opt.start_phase = out.anchor;
    out.trace = track_arg(f, {far, endpoint}, policy, settings, opt);
    out.arg = out.anchor + out.trace.total_delta;
    return out;
}

WindingReport winding_exact(const FunctionId& f, const RectRegion& rect, const eval::PrecisionPolicy& policy,
                            const EvalSettings& settings) {
    std::vector<double> edges;
    ArgTrace tr = Tracker(f, policy, settings, TrackOptions{}.min_segment_fraction).run(rect.boundary(), std::nullopt,
                                                                                     &edges);
    WindingReport rep;
    rep.rect = rect;
    rep.boundary_delta = tr.total_delta;
    for (std::size_t i = 0; i < 4; ++i) rep.edge_deltas[i] = edges[i];
    const double turns = tr.total_delta / kTwoPi;
    const double rounded = std::round(turns);
    rep.residual = std::fabs(turns - rounded);
    if (rep.residual > 1e-6)
        throw Error(ErrorKind::PrecisionExhausted, "non-integral winding for " + f.name(), rect.center());
    if (rounded < 0.0) throw Error(ErrorKind::PrecisionExhausted, "negative winding for " + f.name(), rect.center());
    rep.count = static_cast<int>(rounded);
    rep.boundary = std::move(tr.samples);
    return rep;
}

WindingReport winding_number(const FunctionId& f, const RectRegion& rect, const eval::PrecisionPolicy& policy,
                             const EvalSettings& settings) {
    constexpr int kMaxPerEdge = 42;  // 21 magnitudes, each tried outward then inward
    std::array<int, 4> tries{};
    std::array<double, 4> offset{};  // outward displacement of bottom, right, top, left
    int total = 0;
    for (;;) {
        const RectRegion r(rect.sigma_min - offset[3], rect.sigma_max + offset[1], rect.t_min - offset[0],
                           rect.t_max + offset[2]);
        try {
            WindingReport rep = winding_exact(f, r, policy, settings);
            rep.perturbations = total;
            return rep;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroOnPath) throw;
            const std::complex<double> p = e.point().value_or(r.center());
            const std::array<double, 4> dist{std::fabs(p.imag() - r.t_min), std::fabs(p.real() - r.sigma_max),
                                             std::fabs(p.imag() - r.t_max), std::fabs(p.real() - r.sigma_min)};
            std::size_t edge = 0;
            for (std::size_t i = 1; i < 4; ++i)
                if (dist[i] < dist[edge]) edge = i;
            const int n = tries[edge]++;
            if (n >= kMaxPerEdge)
                throw Error(ErrorKind::ZeroOnBoundary, "perturbation attempts exhausted for " + f.name(), p);
            offset[edge] = (n % 2 == 0 ? 1.0 : -1.0) * 1e-6 * std::ldexp(1.0, n / 2);
            ++total;
        }
    }
}

std::vector<std::complex<double>> boundary_power_sums(const std::vector<Sample>& loop, std::complex<double> center,
                                                      int max_power) {
    std::vector<std::complex<double>> sums(static_cast<std::size_t>(max_power) + 1);
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const Sample& a = loop[i];
        const Sample& b = loop[i + 1];
        const std::complex<double> dlog(b.log_abs - a.log_abs, b.phase - a.phase);
        const std::complex<double> z = (a.point.z() + b.point.z()) * 0.5 - center;
        std::complex<double> zp = 1.0;
        for (int p = 0; p <= max_power; ++p) {
            sums[static_cast<std::size_t>(p)] += zp * dlog;
            zp *= z;
        }
    }
    const std::complex<double> two_pi_i(0.0, kTwoPi);
    for (auto& v : sums) v /= two_pi_i;
    return sums;
}

}  // namespace zdl::arg
