#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bernoulli.hpp"
#include "zdl/errors.hpp"
#include "zdl/evalcore.hpp"

namespace zdl::eval {
namespace {

using detail::bernoulli;
using detail::kBernoulliCount;

constexpr double kCauchyRadius = 0.25;

struct Plan {
    long n = 0;
    int m = 0;
    double cost = std::numeric_limits<double>::infinity();
    std::vector<double> trunc_log2;
};

double log2_factorial(int j) { return std::lgamma(static_cast<double>(j) + 1.0) / std::log(2.0); }

// log2 of Euler–Maclaurin remainder bounds after M Bernoulli terms, for
// every derivative order 0..max_order. Order 0 uses the classical bound
//   |R_M| ≤ |(s)_{2M+2} B_{2M+2} N^{-σ-2M-1} / ((2M+2)! (σ+2M+1))|;
// higher orders apply Cauchy's estimate on the circle |z - s| = r.
// Returns the smallest feasible M, or -1.
int smallest_feasible_m(double sigma, double t, long n, int max_order, double target_log2,
                        std::vector<double>& out) {
    const auto& tab = bernoulli();
    const double log2n = std::log2(static_cast<double>(n));
    const double r = kCauchyRadius;
    double prod0 = 0.0;  // Σ log2|s+i|, i < 2M+2
    double prodr = 0.0;  // Σ log2(|s+i| + r)
    auto add_factor = [&](int i) {
        const double a = std::hypot(sigma + i, t);
        prod0 += std::log2(a);
        prodr += std::log2(a + r);
    };
    add_factor(0);
    add_factor(1);
    double previous = std::numeric_limits<double>::infinity();
    out.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (int m = 0; m + 1 < kBernoulliCount; ++m) {
        const double c = tab.log2_b2j_over_fact[static_cast<std::size_t>(m) + 1];
        const double denom0 = sigma + 2.0 * m + 1.0;
        const double denomr = sigma - r + 2.0 * m + 1.0;
        bool ok = denom0 > 0.0 && (max_order == 0 || denomr > 0.0);
        double worst = -std::numeric_limits<double>::infinity();
        if (ok) {
            out[0] = c + prod0 - (sigma + 2.0 * m + 1.0) * log2n - std::log2(denom0);
            worst = out[0];
            for (int j = 1; j <= max_order; ++j) {
                out[static_cast<std::size_t>(j)] = log2_factorial(j) - j * std::log2(r) + c + prodr -
                                                   (sigma - r + 2.0 * m + 1.0) * log2n - std::log2(denomr);
                worst = std::max(worst, out[static_cast<std::size_t>(j)]);
            }
            if (worst <= target_log2 - 1.0) return m;
            // Past the minimum of the asymptotic series: give up on this N.
            if (worst > previous + 8.0) return -1;
            previous = std::min(previous, worst);
        }
        add_factor(2 * m + 2);
        add_factor(2 * m + 3);
    }
    return -1;
}

Plan choose_plan(double sigma, double t, int max_order, double target_log2, long max_terms) {
    const long n0 = std::max(static_cast<long>(std::ceil(std::fabs(t) / 2.0)), 32L);
    std::vector<long> candidates;
    for (long n = 4; n < n0; n *= 2) candidates.push_back(n);
    for (long n = n0; n <= max_terms; n *= 2) candidates.push_back(n);
    Plan best;
    std::vector<double> bounds;
    for (const long n : candidates) {
        if (static_cast<double>(n) > best.cost) break;
        const int m = smallest_feasible_m(sigma, t, n, max_order, target_log2, bounds);
        if (m < 0) continue;
        const double cost = static_cast<double>(n) + 3.0 * m;
        if (cost < best.cost) {
            best.n = n;
            best.m = m;
            best.cost = cost;
            best.trunc_log2 = bounds;
        }
    }
    return best;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_point(const CPoint& s, const EvalSettings& settings) {
    const double d = std::hypot(s.re - 1.0, s.im);
    if (d <= settings.pole_guard)
        throw Error(ErrorKind::PoleProximity, "|s-1| = " + std::to_string(d) + " within the pole guard", s.z());
}

}  // namespace

CPoint::CPoint(double re_, double im_, int bits) : re(re_), im(im_), precision_bits(bits) {
    if (!std::isfinite(re_) || !std::isfinite(im_))
        throw Error(ErrorKind::InvalidArgument, "non-finite coordinate");
    if (bits < 53) throw Error(ErrorKind::InvalidArgument, "precision_bits below 53");
}

bool EvalResult::contains_zero() const { return mp::abs(value) <= error_radius; }

EvalResult DerivativeSet::at(int order) const {
    const auto i = static_cast<std::size_t>(order);
    if (order < 0 || i >= values.size()) throw Error(ErrorKind::InvalidArgument, "derivative order out of range");
    return EvalResult{values[i], radii[i], precision_bits, terms_used};
}

DerivativeSet eval_zeta_derivs(const CPoint& s, int max_order, const PrecisionPolicy& policy,
                               const EvalSettings& settings, std::optional<double> target_log2) {
    if (max_order < 0 || max_order > max_internal_order(settings))
        throw Error(ErrorKind::InvalidArgument, "derivative order " + std::to_string(max_order) + " exceeds k_max + 2");
    check_point(s, settings);

    const double target = target_log2.value_or(policy.target_log2());
    // a target below the policy's output radius costs the same number of extra bits
    const int deficit = static_cast<int>(std::ceil(std::max(0.0, policy.target_log2() - target)));
    const int bits = std::max(policy.working_bits(s.im), s.precision_bits) + deficit;
    if (bits > detail::kMaxWorkingBits)
        throw Error(ErrorKind::PrecisionExhausted, "working precision above table precision");
    const double sigma = s.re;
    const double t = s.im;
    const Plan plan = choose_plan(sigma, t, max_order, target, settings.max_terms);
    if (plan.n == 0)
        throw Error(ErrorKind::PrecisionExhausted, "no Euler-Maclaurin plan reaches the target radius", s.z());

    const mp::Prec p = bits;
    const long n_terms = plan.n;
    const auto orders = static_cast<std::size_t>(max_order) + 1;

    // n^{-s} and log n for n ≤ N from prime powers: only primes need exp/sincos.
    std::vector<int> spf(static_cast<std::size_t>(n_terms) + 1, 0);
    for (long i = 2; i <= n_terms; ++i) {
        if (spf[static_cast<std::size_t>(i)] != 0) continue;
        for (long j = i; j <= n_terms; j += i)
            if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = static_cast<int>(i);
    }
    std::vector<mp::Complex> power;
    std::vector<mp::Real> logs;
    power.reserve(static_cast<std::size_t>(n_terms) + 1);
    logs.reserve(static_cast<std::size_t>(n_terms) + 1);
    power.emplace_back(p);
    logs.emplace_back(p);
    power.emplace_back(1.0, 0.0, p);
    logs.emplace_back(p);

    const mp::Complex sp(s.re, s.im, p);
    std::vector<mp::Complex> acc(orders, mp::Complex(p));
    std::vector<double> abs_sum(orders, 0.0);
    for (auto& a : abs_sum) a = 1.0;  // n = 1 term
    mpfr_set_ui(acc[0].re().get(), 1, MPFR_RNDN);

    mp::Real t1(p), t2(p), neg_log(p);
    mp::Complex term(p);
    for (long n = 2; n <= n_terms; ++n) {
        const auto un = static_cast<std::size_t>(n);
        const int q = spf[un];
        if (q == n) {
            logs.push_back(mp::log_ui(static_cast<unsigned long>(n), p));
            power.push_back(mp::pow_neg(logs.back(), sp));
        } else {
            const auto a = static_cast<std::size_t>(q);
            const auto b = static_cast<std::size_t>(n / q);
            logs.push_back(logs[a] + logs[b]);
            mp::Complex v(p);
            mp::mul_into(v, power[a], power[b], t1, t2);
            power.push_back(std::move(v));
        }
        if (n == n_terms) break;
        // Σ n^{-s} (-log n)^j
        mpfr_set(term.re().get(), power[un].re().get(), MPFR_RNDN);
        mpfr_set(term.im().get(), power[un].im().get(), MPFR_RNDN);
        mpfr_neg(neg_log.get(), logs[un].get(), MPFR_RNDN);
        const double ln = std::log(static_cast<double>(n));
        double mag = std::pow(static_cast<double>(n), -sigma);
        for (std::size_t j = 0; j < orders; ++j) {
            mp::add_into(acc[j], term);
            abs_sum[j] += mag;
            if (j + 1 < orders) {
                mp::scale_into(term, neg_log);
                mag *= ln;
            }
        }
    }

    // Tail at N: half term, pole term and Bernoulli corrections, each
    // differentiated in s through the factor N^{-s} = exp(-s log N).
    const auto un = static_cast<std::size_t>(n_terms);
    const mp::Real& log_n = logs[un];
    const mp::Complex& w = power[un];
    const mp::Real n_real(static_cast<double>(n_terms), p);
    const mp::Real neg_log_n = -log_n;

    std::vector<mp::Real> neg_log_pow;  // (-log N)^i
    neg_log_pow.emplace_back(1L, p);
    for (std::size_t i = 1; i < orders; ++i) neg_log_pow.push_back(neg_log_pow.back() * neg_log_n);

    // Bernoulli series S(ε) = Σ_b c_b (s+ε)_{2b-1} N^{1-2b}, truncated at degree max_order.
    std::vector<mp::Complex> q(orders, mp::Complex(p));
    std::vector<mp::Complex> series(orders, mp::Complex(p));
    const mp::Real inv_n = mp::Real(1L, p) / n_real;
    q[0] = sp * inv_n;
    if (orders > 1) q[1] = mp::Complex(inv_n, mp::Real(p));
    const auto& tab = bernoulli();
    mp::Real coef(p);
    mp::Complex shifted(p), tmpc(p);
    for (int b = 1; b <= plan.m; ++b) {
        coef.assign(tab.b2j_over_fact[static_cast<std::size_t>(b)]);
        for (std::size_t i = 0; i < orders; ++i) {
            tmpc = q[i];
            mp::scale_into(tmpc, coef);
            mp::add_into(series[i], tmpc);
        }
        if (b == plan.m) break;
        for (int step = 0; step < 2; ++step) {
            // q ← q · (s + 2b - 1 + step + ε) / N
            shifted = sp;
            mpfr_add_si(shifted.re().get(), shifted.re().get(), 2 * b - 1 + step, MPFR_RNDN);
            for (std::size_t i = orders; i-- > 0;) {
                mp::mul_into(q[i], q[i], shifted, t1, t2);
                if (i > 0) mp::add_into(q[i], q[i - 1]);
                mp::scale_into(q[i], inv_n);
            }
        }
    }

    const mp::Complex u = mp::reciprocal(sp - mp::Complex(1.0, 0.0, p));
    std::vector<mp::Complex> u_pow;  // u^{i+1}
    u_pow.push_back(u);
    for (std::size_t i = 1; i < orders; ++i) u_pow.push_back(u_pow.back() * u);
    const mp::Complex n_w = w * n_real;

    DerivativeSet out;
    out.precision_bits = bits;
    out.terms_used = n_terms;
    out.bernoulli_terms = plan.m;
    const double rounding_scale = 10.0 + std::log2(static_cast<double>(n_terms + plan.m) + 16.0) - bits;
    for (std::size_t j = 0; j < orders; ++j) {
        const int jj = static_cast<int>(j);
        mp::Complex half = w * neg_log_pow[j] * 0.5;
        mp::Complex pole(p);
        mp::Complex bern(p);
        double fact = 1.0;
        for (int i = 0; i <= jj; ++i) {
            if (i > 0) fact *= i;
            const double cb = binomial(jj, i) * fact;
            mp::Complex pt = u_pow[static_cast<std::size_t>(i)] * neg_log_pow[j - static_cast<std::size_t>(i)];
            pt *= (i % 2 == 0 ? cb : -cb);
            pole += pt;
            mp::Complex bt = series[static_cast<std::size_t>(i)] * neg_log_pow[j - static_cast<std::size_t>(i)];
            bt *= cb;
            bern += bt;
        }
        pole = pole * n_w;
        bern = bern * w;
        mp::Complex total = acc[j] + half + pole + bern;

        const double magnitude = abs_sum[j] + std::exp(half.log_abs()) + std::exp(pole.log_abs()) +
                                 std::exp(bern.log_abs()) + 1.0;
        const double round_log2 = rounding_scale + std::log2(2.0 * magnitude);
        const double trunc_log2 = plan.trunc_log2[j];
        mp::Real radius = mp::exp2(trunc_log2, 64);
        radius += mp::exp2(round_log2, 64);
        if (std::max(trunc_log2, round_log2) > target)
            throw Error(ErrorKind::PrecisionExhausted,
                        "rounding allowance exceeds the target radius; raise the guard bits", s.z());
        out.values.push_back(std::move(total));
        out.radii.push_back(std::move(radius));
    }
    return out;
}

EvalResult eval_zeta_deriv(const CPoint& s, int k, const PrecisionPolicy& policy, const EvalSettings& settings) {
    if (k < 0 || k > settings.k_max)
        throw Error(ErrorKind::InvalidArgument, "order k=" + std::to_string(k) + " outside [0, k_max]");
    return eval_zeta_derivs(s, k, policy, settings).at(k);
}

mp::Complex g_prefactor(const CPoint& s, int k, mp::Prec prec) {
    // 2^s (-1)^k (log 2)^{-k}
    mp::Real ln2 = mp::log_ui(2, prec);
    mp::Complex sp(s.re, s.im, prec);
    mp::Complex two_s = mp::pow_neg(-ln2, sp);
    mp::Real scale(1L, prec);
    for (int i = 0; i < k; ++i) scale /= ln2;
    if (k % 2 == 1) scale = -scale;
    return two_s * scale;
}

EvalResult eval_G(const CPoint& s, int k, const PrecisionPolicy& policy, const EvalSettings& settings) {
    if (k < 1 || k > settings.k_max)
        throw Error(ErrorKind::InvalidArgument, "G_k needs 1 ≤ k ≤ k_max");
    const int bits = std::max(policy.working_bits(s.im), s.precision_bits);
    // |prefactor| = 2^σ (log 2)^{-k}; tighten the zeta target so the product meets 2^-output.
    const double pre_log2 = s.re - k * std::log2(std::log(2.0));
    const DerivativeSet d = eval_zeta_derivs(s, k, policy, settings, policy.target_log2() - pre_log2 - 1.0);
    const mp::Complex pre = g_prefactor(s, k, bits);
    EvalResult r;
    r.value = pre * d.values[static_cast<std::size_t>(k)];
    r.error_radius = mp::abs(pre) * d.radii[static_cast<std::size_t>(k)];
    r.error_radius += mp::exp2(r.value.log_abs() / std::log(2.0) + 4.0 - bits, 64);
    r.precision_bits = d.precision_bits;
    r.terms_used = d.terms_used;
    return r;
}

EvalResult ratio_from(const DerivativeSet& d, int ell) {
    if (ell < 1 || static_cast<std::size_t>(ell) >= d.values.size())
        throw Error(ErrorKind::InvalidArgument, "ratio order out of range");
    const auto& num = d.values[static_cast<std::size_t>(ell)];
    const auto& den = d.values[static_cast<std::size_t>(ell) - 1];
    const auto& rn = d.radii[static_cast<std::size_t>(ell)];
    const auto& rd = d.radii[static_cast<std::size_t>(ell) - 1];
    const mp::Real den_abs = mp::abs(den);
    if (den_abs <= rd) throw Error(ErrorKind::DenominatorZero, "denominator disk contains 0");
    EvalResult r;
    r.value = num / den;
    // |a/b - ã/b̃| ≤ (r_a + |ã/b̃| r_b) / (|b̃| - r_b)
    r.error_radius = (rn + mp::abs(r.value) * rd) / (den_abs - rd);
    r.error_radius += mp::exp2(r.value.log_abs() / std::log(2.0) + 4.0 - d.precision_bits, 64);
    r.precision_bits = d.precision_bits;
    r.terms_used = d.terms_used;
    return r;
}

EvalResult eval_ratio(const CPoint& s, int ell, const PrecisionPolicy& policy, const EvalSettings& settings) {
    if (ell < 1 || ell > settings.k_max)
        throw Error(ErrorKind::InvalidArgument, "ratio order must lie in [1, k_max]");
    return ratio_from(eval_zeta_derivs(s, ell, policy, settings), ell);
}

EvalResult eval_h_zeta(const CPoint& s, const PrecisionPolicy& policy, const EvalSettings& settings) {
    const GammaFactor g = eval_gamma_factor(s, policy);
    const EvalResult z = eval_zeta_deriv(s, 0, policy, settings);
    EvalResult r;
    r.value = g.h.value * z.value;
    const mp::Real habs = mp::abs(g.h.value);
    const mp::Real zabs = mp::abs(z.value);
    r.error_radius = habs * z.error_radius + zabs * g.h.error_radius + g.h.error_radius * z.error_radius;
    r.error_radius += mp::exp2(r.value.log_abs() / std::log(2.0) + 4.0 - z.precision_bits, 64);
    r.precision_bits = z.precision_bits;
    r.terms_used = z.terms_used;
    return r;
}

}  // namespace zdl::eval
