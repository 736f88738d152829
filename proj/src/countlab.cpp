#include "zdl/countlab.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>

#include "zdl/errors.hpp"

namespace zdl::count {
namespace {

const double kMonotoneFrom = std::exp(std::numbers::e);

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Recursive-descent parser for custom profile expressions.
class ExprParser {
public:
    using Fn = std::function<double(double)>;

    explicit ExprParser(std::string src) : s_(std::move(src)) {}

    Fn parse() {
        Fn f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorKind::InvalidArgument, "custom profile: " + why + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Fn expr() {
        Fn lhs = term();
        for (;;) {
            if (eat('+')) {
                Fn rhs = term();
                lhs = [lhs, rhs](double T) { return lhs(T) + rhs(T); };
            } else if (eat('-')) {
                Fn rhs = term();
                lhs = [lhs, rhs](double T) { return lhs(T) - rhs(T); };
            } else {
                return lhs;
            }
        }
    }
    Fn term() {
        Fn lhs = unary();
        for (;;) {
            if (eat('*')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](double T) { return lhs(T) * rhs(T); };
            } else if (eat('/')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](double T) { return lhs(T) / rhs(T); };
            } else {
                return lhs;
            }
        }
    }
    Fn unary() {
        if (eat('-')) {
            Fn v = unary();
            return [v](double T) { return -v(T); };
        }
        if (eat('+')) return unary();
        return power();
    }
    Fn power() {
        Fn base = primary();
        if (eat('^')) {
            Fn ex = unary();  // right associative
            return [base, ex](double T) { return std::pow(base(T), ex(T)); };
        }
        return base;
    }
    Fn primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (eat('(')) {
            Fn v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            return [v](double) { return v; };
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "T") return [](double T) { return T; };
            if (id == "pi") return [](double) { return kPi; };
            if (id == "e") return [](double) { return std::numbers::e; };
            double (*fn)(double) = nullptr;
            if (id == "log") fn = [](double x) { return std::log(x); };
            else if (id == "sqrt") fn = [](double x) { return std::sqrt(x); };
            else if (id == "exp") fn = [](double x) { return std::exp(x); };
            else if (id == "abs") fn = [](double x) { return std::fabs(x); };
            else fail("unknown identifier '" + id + "'");
            if (!eat('(')) fail("expected '(' after " + id);
            Fn arg = expr();
            if (!eat(')')) fail("missing ')'");
            return [fn, arg](double T) { return fn(arg(T)); };
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

// positive on [10, 1e5]; increasing only from e^e on, where log T / log log T turns
void check_profile(const BoundProfile& p) {
    double prev = 0.0;
    for (double T = 10.0; T <= 1e5; T *= 1.25) {
        const double v = p(T);
        if (!std::isfinite(v) || v <= 0.0 || (T >= kMonotoneFrom && v < prev))
            throw Error(ErrorKind::InvalidArgument,
                        "profile '" + p.name + "' is not positive and increasing at T=" + std::to_string(T));
        if (T >= kMonotoneFrom) prev = v;
    }
}

std::complex<double> g_log_deriv(int k, const eval::CPoint& s, const eval::PrecisionPolicy& policy,
                                 const EvalSettings& settings) {
    const eval::EvalResult r = eval::eval_ratio(s, k + 1, policy, settings);
    std::complex<double> v = r.approx();
    if (k >= 1) v += std::log(2.0);
    return v;
}

}  // namespace

double main_term(int k, double T) {
    if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "main term needs T > 0");
    const mp::Prec p = 128;
    const mp::Real t(T, p);
    mp::Real denom = mp::pi(p) * (k == 0 ? 2.0 : 4.0);
    denom *= mp::exp(mp::Real(1L, p));
    const mp::Real v = t / (mp::pi(p) * 2.0) * mp::log(t / denom);
    return v.to_double();
}

BoundProfile BoundProfile::log() {
    return {ProfileId::log, "log", [](double T) { return std::log(T); }};
}
BoundProfile BoundProfile::log_over_loglog() {
    return {ProfileId::log_over_loglog, "loglog", [](double T) { return std::log(T) / std::log(std::log(T)); }};
}
BoundProfile BoundProfile::fgh() {
    return {ProfileId::fgh_sqrt, "fgh", [](double T) { return std::sqrt(std::log(T) * std::log(std::log(T))); }};
}
BoundProfile BoundProfile::custom(const std::string& expr) {
    BoundProfile p{ProfileId::custom, "custom:" + expr, ExprParser(expr).parse()};
    check_profile(p);
    return p;
}
BoundProfile BoundProfile::parse(const std::string& spec) {
    if (spec == "log") return log();
    if (spec == "loglog") return log_over_loglog();
    if (spec == "fgh") return fgh();
    if (spec.rfind("custom:", 0) == 0) return custom(spec.substr(7));
    throw Error(ErrorKind::InvalidArgument, "unknown profile '" + spec + "' (log|loglog|fgh|custom:<expr>)");
}

std::vector<BoundProfile> standard_profiles() {
    return {BoundProfile::log(), BoundProfile::log_over_loglog(), BoundProfile::fgh()};
}

CountReport count(int k, double T, const eval::PrecisionPolicy& policy, const Settings& settings,
                  const std::optional<scan::StripScan>& scan, const std::vector<BoundProfile>& extra_profiles) {
    if (k < 0 || k > settings.eval.k_max) throw Error(ErrorKind::InvalidArgument, "order outside 0..k_max");
    if (scan && (scan->k != k || scan->t_effective < T))
        throw Error(ErrorKind::InvalidArgument, "strip scan does not cover the requested count");
    const scan::StripScan own = scan ? scan::StripScan{} : scan::scan_strip(k, T, policy, settings);
    const scan::StripScan& s = scan ? *scan : own;

    CountReport rep;
    rep.k = k;
    rep.warnings = s.warnings;
    double te = T;
    for (bool moved = true; moved;) {
        moved = false;
        for (const auto& r : s.records)
            if (std::fabs(r.gamma - te) < 1e-8) {
                te += 1e-8;
                moved = true;
            }
    }

    const arg::FunctionId G = arg::FunctionId::G(k);
    const double sigma_left = settings.scan.sigma_left;
    const arg::WindingReport w = arg::winding_number(
        G, arg::RectRegion(sigma_left, settings.eval.sigma_k, settings.scan.t_floor, te), policy, settings.eval);
    rep.T = w.rect.t_max;
    rep.n_winding = w.count;
    rep.max_winding_residual = std::max(w.residual, s.stats.max_residual);
    if (w.perturbations > 0)
        rep.warnings.push_back("counting rectangle perturbed " + std::to_string(w.perturbations) + " time(s)");
    for (const auto& r : s.records)
        if (r.gamma <= rep.T && r.beta > w.rect.sigma_min) rep.n_exact += r.multiplicity;
    if (rep.n_exact != rep.n_winding)
        throw Error(ErrorKind::DualCountMismatch, "enumeration " + std::to_string(rep.n_exact) + " vs winding " +
                                                      std::to_string(rep.n_winding) + " at k=" + std::to_string(k) +
                                                      ", T=" + std::to_string(T));

    rep.main_term = main_term(k, rep.T);
    rep.e_term = rep.n_exact - rep.main_term;
    rep.edge_contribs.bottom = w.edge_deltas[0] / kTwoPi;
    rep.edge_contribs.right = w.edge_deltas[1] / kTwoPi;
    const eval::CPoint top(0.5, rep.T);
    rep.edge_contribs.top_arg_G = arg::arg_from_plus_infinity(G, top, settings.eval.sigma_k, policy, settings.eval).arg / kTwoPi;
    rep.edge_contribs.top_arg_zeta =
        arg::arg_from_plus_infinity(arg::FunctionId::zeta(0), top, settings.eval.sigma_k, policy, settings.eval).arg /
        kTwoPi;
    rep.remainder = rep.n_exact - rep.main_term - rep.edge_contribs.top_arg_G - rep.edge_contribs.top_arg_zeta;
    for (const auto& p : standard_profiles()) rep.bound_ratios[p.name] = std::fabs(rep.e_term) / p(rep.T);
    for (const auto& p : extra_profiles) rep.bound_ratios[p.name] = std::fabs(rep.e_term) / p(rep.T);
    return rep;
}

std::vector<ArgProfilePoint> arg_profile(int ell, double T, const std::vector<double>& sigmas,
                                         const eval::PrecisionPolicy& policy, const BoundProfile& phi,
                                         const Settings& settings) {
    if (ell < 1 || ell > settings.eval.k_max) throw Error(ErrorKind::InvalidArgument, "order outside 1..k_max");
    std::vector<ArgProfilePoint> out;
    const arg::FunctionId G = arg::FunctionId::G(ell);
    for (double sigma : sigmas) {
        ArgProfilePoint pt;
        pt.sigma = sigma;
        for (int n = 0;; ++n) {
            pt.T = T + (n == 0 ? 0.0 : 1e-6 * std::ldexp(1.0, n - 1));
            try {
                pt.arg = arg::arg_from_plus_infinity(G, eval::CPoint(sigma, pt.T), settings.eval.sigma_k, policy,
                                                     settings.eval)
                             .arg;
                break;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ZeroOnPath || n >= 20) throw;
            }
        }
        pt.envelope = phi(T) + std::log(std::log(T)) / (sigma - 0.5);
        out.push_back(pt);
    }
    return out;
}

Lemma23Result lemma23_residual(int k, const eval::CPoint& s, const std::vector<scan::ZeroRecord>& zeros,
                               const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (!(s.re >= 0.5 && s.re <= 1.0)) throw Error(ErrorKind::InvalidArgument, "partial-fraction residual needs 1/2 <= sigma <= 1");
    const std::complex<double> ld = g_log_deriv(k, s, policy, settings.eval);
    std::complex<double> sum = 0.0;
    Lemma23Result r;
    for (const auto& z : zeros) {
        if (z.k != k || !(std::fabs(z.gamma - s.im) < 1.0)) continue;
        sum += static_cast<double>(z.multiplicity) / (s.z() - z.z());
        ++r.zeros_used;
    }
    const double L = std::log(s.im);
    r.residual = std::abs(ld - sum) / L;
    r.residual_no_sum = std::abs(ld) / L;
    r.zero_sum_norm = std::abs(sum) / L;
    return r;
}

Lemma4Report lemma4_scan(int ell, const std::vector<double>& sigmas, const std::vector<double>& ts,
                         const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (ell < 1 || ell > settings.eval.k_max + 1) throw Error(ErrorKind::InvalidArgument, "order outside 1..k_max+1");
    Lemma4Report rep;
    rep.ell = ell;
    std::vector<double> sorted_t = ts;
    std::sort(sorted_t.begin(), sorted_t.end());
    std::map<double, bool> all_negative;
    for (double t : sorted_t) {
        bool neg = true;
        for (double sigma : sigmas) {
            SignPoint p;
            p.sigma = sigma;
            p.t = t;
            try {
                const eval::EvalResult r = eval::eval_ratio(eval::CPoint(sigma, t), ell, policy, settings.eval);
                p.re = r.approx().real();
                p.im = r.approx().imag();
                // sign is certified only when the disk stays off the imaginary axis
                if (r.value.re().sign() < 0 && std::fabs(p.re) > r.radius()) {
                    p.status = SignStatus::negative;
                    ++rep.negative;
                } else {
                    p.status = SignStatus::nonnegative;
                    ++rep.nonnegative;
                    neg = false;
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DenominatorZero) throw;
                p.status = SignStatus::skipped;
                ++rep.skipped;
            }
            rep.points.push_back(p);
        }
        all_negative[t] = neg;
    }
    for (auto it = all_negative.rbegin(); it != all_negative.rend() && it->second; ++it) rep.uniform_from = it->first;
    return rep;
}

FSumResult f_sum(int k, double t, double window, const std::vector<scan::ZeroRecord>& zeros,
                 const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (!(window > 0.0)) throw Error(ErrorKind::InvalidArgument, "window must be positive");
    FSumResult r;
    double beta_excess_max = 0.0;
    for (const auto& z : zeros) {
        if (z.k != k || std::fabs(z.gamma - t) > window) continue;
        const double b = z.beta - 0.5;
        if (!(b > 0.0)) continue;
        r.value += z.multiplicity * b / (b * b + (z.gamma - t) * (z.gamma - t));
        beta_excess_max = std::max(beta_excess_max, b);
        ++r.zeros_used;
    }
    const eval::EvalResult ratio = eval::eval_ratio(eval::CPoint(0.5, t), k + 1, policy, settings.eval);
    r.comparison = -ratio.approx().real() - 0.5 * std::log(t / kTwoPi);
    r.difference = r.value - r.comparison;
    // zeros beyond the window: density (1/2π) log(t'/4π) integrated against 1/(γ - t)^2
    const double density = std::log((t + window) / (4.0 * kPi)) / kTwoPi;
    r.tail_bound = beta_excess_max * (2.0 / window) * density;
    r.truncation_note = "window " + std::to_string(window) + ", " + std::to_string(r.zeros_used) +
                        " zeros with beta>1/2; tail <= max(beta-1/2)*(2/W)*log((t+W)/4pi)/(2pi)";
    return r;
}

bool BoxPartition::in_domain(std::complex<double> w) const {
    return w.real() >= 0.5 && std::fabs(w.imag() - T) <= 1.0;
}

bool BoxPartition::in_B(int j, std::complex<double> w) const {
    if (j < 1 || j > n_boxes) return false;
    const double Y = boxes[static_cast<std::size_t>(j) - 1].Y;
    return w.real() >= 0.5 && w.real() <= 0.5 + Y && std::fabs(w.imag() - T) <= Y;
}

bool BoxPartition::in_R(int j, std::complex<double> w) const {
    if (!in_domain(w) || j < 1 || j > n_boxes) return false;
    if (j > 1 && in_B(j - 1, w)) return false;
    return j == n_boxes || in_B(j, w);
}

int BoxPartition::region_of(std::complex<double> w) const {
    if (!in_domain(w)) return 0;
    for (int j = 1; j < n_boxes; ++j)
        if (in_B(j, w)) return j;
    return n_boxes;
}

BoxPartition box_partition(double T) {
    if (!(T >= 100.0)) throw Error(ErrorKind::InvalidArgument, "box partition needs T >= 100");
    BoxPartition p;
    p.T = T;
    p.X = 1.0 / std::sqrt(std::log(T));
    int n = 0;
    while (std::ldexp(p.X, n) < 1.0) ++n;
    p.n_boxes = std::max(n, 1);
    for (int j = 1; j <= p.n_boxes; ++j) p.boxes.push_back({j, std::ldexp(p.X, j)});
    return p;
}

BoxCounts box_counts(int k, const BoxPartition& p, const std::vector<scan::ZeroRecord>& zeros, const BoundProfile& phi) {
    BoxCounts out;
    for (const auto& b : p.boxes) out.boxes.push_back({b.j, b.Y, 0, b.Y * std::log(p.T) + phi(2.0 * p.T)});
    for (const auto& z : zeros) {
        if (z.k != k || !p.in_domain(z.z())) continue;
        int hits = 0;
        for (int j = 1; j <= p.n_boxes; ++j) hits += p.in_R(j, z.z()) ? 1 : 0;
        const int j = p.region_of(z.z());
        if (hits != 1 || j < 1 || !p.in_R(j, z.z())) out.membership_ok = false;
        if (j >= 1) out.boxes[static_cast<std::size_t>(j) - 1].count += z.multiplicity;
        out.domain_total += z.multiplicity;
    }
    for (const auto& b : out.boxes) out.max_ratio = std::max(out.max_ratio, b.count / b.envelope);
    return out;
}

double theta_angle(std::complex<double> a, std::complex<double> b, std::complex<double> c) {
    return std::fabs(std::arg((b - a) / (c - a)));
}

ThetaResult theta_sum(int k, double T, double X, const std::vector<scan::ZeroRecord>& zeros,
                      const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (!(X > 0.0)) throw Error(ErrorKind::InvalidArgument, "X must be positive");
    const std::complex<double> b(0.5, T);
    const std::complex<double> c(0.5 + X, T);
    ThetaResult r;
    for (const auto& z : zeros) {
        if (z.k != k || !(std::fabs(z.gamma - T) < 1.0)) continue;
        r.sum += z.multiplicity * theta_angle(z.z(), b, c);
        ++r.zeros_used;
    }
    r.x_log_t = X * std::log(T);
    const arg::ArgTrace tr = arg::track_arg(arg::FunctionId::G(k), {eval::CPoint(c.real(), T), eval::CPoint(b.real(), T)},
                                            policy, settings.eval);
    r.delta_arg = std::fabs(tr.total_delta);
    return r;
}

std::string_view to_string(SignStatus s) {
    switch (s) {
        case SignStatus::negative: return "negative";
        case SignStatus::nonnegative: return "nonnegative";
        case SignStatus::skipped: return "skipped";
    }
    return "?";
}

}  // namespace zdl::count
