#include <cmath>
#include <string>

#include "bernoulli.hpp"
#include "zdl/errors.hpp"
#include "zdl/evalcore.hpp"

namespace zdl::eval {
namespace {

using detail::bernoulli;
using detail::kBernoulliCount;

// Stirling is used once |w| ≥ 8 and Re w ≥ 1; below that the argument is
// shifted up by the recurrence. The threshold also grows with precision since
// the asymptotic series cannot deliver more than ~2π|w|/ln 2 bits.
struct Shift {
    int m = 0;
    int terms = 0;
    double rem_log_gamma = 0.0;  // log2 of the remainder bounds
    double rem_digamma = 0.0;
};

Shift plan_shift(std::complex<double> z, int bits) {
    const auto& tab = bernoulli();
    const double min_radius = std::max(8.0, 0.16 * bits + 2.0);
    Shift sh;
    while (std::abs(z + static_cast<double>(sh.m)) < min_radius || z.real() + sh.m < 1.0) ++sh.m;
    const std::complex<double> w = z + static_cast<double>(sh.m);
    const double aw = std::log2(std::abs(w));
    // sec(arg w / 2)^2 ≤ 2 for Re w > 0
    const double sec2 = std::log2(1.0 / std::pow(std::cos(std::arg(w) / 2.0), 2.0));
    const double target = -static_cast<double>(bits) - 4.0;
    for (int j = 1; j + 1 < kBernoulliCount; ++j) {
        // remainder after j terms is governed by B_{2j+2}
        const double b = tab.log2_b2j[static_cast<std::size_t>(j) + 1];
        const double n = 2.0 * j + 2.0;
        const double lg = b - std::log2(n * (n - 1.0)) - (n - 1.0) * aw + (j + 1) * sec2;
        const double dg = b - std::log2(n) - n * aw + (j + 1) * sec2;
        if (std::max(lg, dg) <= target) {
            sh.terms = j;
            sh.rem_log_gamma = lg;
            sh.rem_digamma = dg;
            return sh;
        }
    }
    throw Error(ErrorKind::PrecisionExhausted, "Stirling series cannot reach the target", z);
}

bool at_gamma_pole(std::complex<double> z) {
    if (z.imag() != 0.0 || z.real() > 0.0) return false;
    return z.real() == std::floor(z.real());
}

struct Stirling {
    mp::Complex log_gamma_w;
    mp::Complex digamma_w;
    mp::Complex shift_product;    // Π_{i<m} (z + i)
    mp::Complex shift_recip_sum;  // Σ_{i<m} 1/(z + i)
    double magnitude_w = 0.0;
};

Stirling stirling(const mp::Complex& z, const Shift& sh, mp::Prec p) {
    const auto& tab = bernoulli();
    Stirling o{mp::Complex(p), mp::Complex(p), mp::Complex(1.0, 0.0, p), mp::Complex(p), 0.0};
    mp::Complex w = z;
    for (int i = 0; i < sh.m; ++i) {
        o.shift_product *= w;
        o.shift_recip_sum += mp::reciprocal(w);
        mpfr_add_ui(w.re().get(), w.re().get(), 1, MPFR_RNDN);
    }
    o.magnitude_w = mp::abs(w).to_double();
    const mp::Complex log_w = mp::log(w);
    const mp::Complex inv_w = mp::reciprocal(w);
    const mp::Real half_log_2pi = mp::log(mp::pi(p) * 2.0) * 0.5;

    // log Γ(w) = (w - 1/2) log w - w + log(2π)/2 + Σ B_{2j} / (2j(2j-1) w^{2j-1})
    mp::Complex wm = w;
    mpfr_sub_d(wm.re().get(), wm.re().get(), 0.5, MPFR_RNDN);
    o.log_gamma_w = wm * log_w - w;
    mpfr_add(o.log_gamma_w.re().get(), o.log_gamma_w.re().get(), half_log_2pi.get(), MPFR_RNDN);
    // ψ(w) = log w - 1/(2w) - Σ B_{2j} / (2j w^{2j})
    o.digamma_w = log_w - inv_w * 0.5;
    mp::Complex pw = inv_w;
    mp::Real b(p);
    for (int j = 1; j <= sh.terms; ++j) {
        b.assign(tab.b2j[static_cast<std::size_t>(j)]);
        const double n = 2.0 * j;
        o.log_gamma_w += pw * (b * (1.0 / (n * (n - 1.0))));
        pw *= inv_w;
        o.digamma_w -= pw * (b * (1.0 / n));
        pw *= inv_w;
    }
    return o;
}

double rounding_log2(int bits, const Shift& sh, double magnitude_w) {
    // log of |w log w| sized quantities are exponentiated, so absolute errors
    // there become relative errors of Γ.
    const double scale = 64.0 + 8.0 * (sh.m + sh.terms) + 4.0 * magnitude_w * (1.0 + std::log(magnitude_w + 1.0) + 4.0);
    return std::log2(scale) - bits;
}

}  // namespace

GammaFactor eval_gamma_factor(const CPoint& s, const PrecisionPolicy& policy) {
    if (at_gamma_pole(s.z() / 2.0)) throw Error(ErrorKind::GammaPole, "s/2 is a nonpositive integer", s.z());
    const int bits = std::max(policy.working_bits(s.im), s.precision_bits);
    const mp::Prec p = bits;
    const mp::Complex sp(s.re, s.im, p);
    mp::Complex z = sp;
    mpfr_div_2ui(z.re().get(), z.re().get(), 1, MPFR_RNDN);
    mpfr_div_2ui(z.im().get(), z.im().get(), 1, MPFR_RNDN);

    const Shift sh = plan_shift(s.z() / 2.0, bits);
    const Stirling st = stirling(z, sh, p);
    const mp::Real log_pi = mp::log(mp::pi(p));

    // h = exp(log Γ(w) - z log π) / Π (z + i)
    mp::Complex logh = st.log_gamma_w - z * log_pi;
    mp::Complex h = mp::exp(logh) / st.shift_product;
    const double round = rounding_log2(bits, sh, st.magnitude_w);
    const double rel = std::exp2(sh.rem_log_gamma) * 1.01 + std::exp2(round);

    GammaFactor out;
    out.h.value = std::move(h);
    out.h.error_radius = mp::exp2(std::log2(rel) + out.h.value.log_abs() / std::log(2.0), 64);
    out.h.precision_bits = bits;
    out.h.terms_used = sh.terms + sh.m;

    // h'/h = -(1/2) log π + (1/2) ψ(s/2)
    mp::Complex psi = st.digamma_w - st.shift_recip_sum;
    mp::Complex ld = psi * 0.5;
    mpfr_sub(ld.re().get(), ld.re().get(), (log_pi * 0.5).get(), MPFR_RNDN);
    const double psi_scale = std::exp(psi.log_abs()) + std::exp(st.shift_recip_sum.log_abs()) + 1.0;
    out.h_log_deriv.value = std::move(ld);
    out.h_log_deriv.error_radius =
        mp::exp2(sh.rem_digamma - 1.0, 64) + mp::exp2(std::log2(psi_scale) + round, 64);
    out.h_log_deriv.precision_bits = bits;
    out.h_log_deriv.terms_used = sh.terms + sh.m;
    return out;
}

EvalResult eval_digamma(const CPoint& zp, const PrecisionPolicy& policy) {
    if (at_gamma_pole(zp.z())) throw Error(ErrorKind::GammaPole, "digamma pole", zp.z());
    const int bits = std::max(policy.working_bits(zp.im), zp.precision_bits);
    const mp::Prec p = bits;
    const mp::Complex z(zp.re, zp.im, p);
    const Shift sh = plan_shift(zp.z(), bits);
    const Stirling st = stirling(z, sh, p);
    EvalResult r;
    r.value = st.digamma_w - st.shift_recip_sum;
    const double scale = std::exp(r.value.log_abs()) + std::exp(st.shift_recip_sum.log_abs()) + 1.0;
    r.error_radius = mp::exp2(sh.rem_digamma, 64) +
                     mp::exp2(std::log2(scale) + rounding_log2(bits, sh, st.magnitude_w), 64);
    r.precision_bits = bits;
    r.terms_used = sh.terms + sh.m;
    return r;
}

}  // namespace zdl::eval
