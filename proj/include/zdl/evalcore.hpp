#pragma once

// Extended-precision evaluation of zeta derivatives, the gamma factor
// h(s) = pi^(-s/2) Gamma(s/2), the normalized G_k and log-derivative ratios.
// Every value carries an error radius derived from the truncation analysis of
// the summation method plus a rounding allowance.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "zdl/config.hpp"
#include "zdl/mp.hpp"

namespace zdl::eval {

/// A point s = sigma + i t. Coordinates are doubles; `precision_bits` is the
/// least working precision the caller wants used at this point.
struct CPoint {
    double re = 0.0;
    double im = 0.0;
    int precision_bits = 53;

    CPoint() = default;
    CPoint(double re_, double im_, int bits = 53);

    [[nodiscard]] std::complex<double> z() const { return {re, im}; }
    [[nodiscard]] CPoint conj() const { return {re, -im, precision_bits}; }
    friend bool operator==(const CPoint& a, const CPoint& b) { return a.re == b.re && a.im == b.im; }
};

struct PrecisionPolicy {
    int output_bits = 64;
    int guard_bits_base = 32;
    double guard_bits_per_log_t = 8.0;

    static PrecisionPolicy from(const EvalSettings& s);

    /// output + base + ceil(per_log_t * log(2 + |t|)); monotone in |t|.
    [[nodiscard]] int working_bits(double t) const;
    /// Absolute radius the evaluators aim for: 2^-output_bits.
    [[nodiscard]] double target_log2() const { return -static_cast<double>(output_bits); }
    [[nodiscard]] std::uint64_t fingerprint() const;
    [[nodiscard]] PrecisionPolicy with_output_bits(int bits) const;
};

struct EvalResult {
    mp::Complex value;
    mp::Real error_radius;
    int precision_bits = 0;
    long terms_used = 0;

    [[nodiscard]] std::complex<double> approx() const { return value.to_cdouble(); }
    [[nodiscard]] double radius() const { return error_radius.to_double(); }
    /// True when the certified disk around `value` contains the origin.
    [[nodiscard]] bool contains_zero() const;
};

/// zeta^(j)(s) for j = 0..max_order from a single Euler–Maclaurin sum.
struct DerivativeSet {
    std::vector<mp::Complex> values;
    std::vector<mp::Real> radii;
    int precision_bits = 0;
    long terms_used = 0;
    int bernoulli_terms = 0;

    [[nodiscard]] EvalResult at(int order) const;
};

struct GammaFactor {
    EvalResult h;
    EvalResult h_log_deriv;
};

/// Largest order eval_zeta_derivs accepts: room for k_max plus the two
/// extra derivatives used by Newton steps and argument tracking.
inline int max_internal_order(const EvalSettings& s) { return s.k_max + 2; }

/// All derivatives up to `max_order` (≤ k_max + 2). `target_log2` is the
/// requested absolute radius in log2; defaults to the policy's output bits.
DerivativeSet eval_zeta_derivs(const CPoint& s, int max_order, const PrecisionPolicy& policy,
                               const EvalSettings& settings = {},
                               std::optional<double> target_log2 = std::nullopt);

EvalResult eval_zeta_deriv(const CPoint& s, int k, const PrecisionPolicy& policy,
                           const EvalSettings& settings = {});

/// G_k(s) = 2^s (-1)^k (log 2)^-k zeta^(k)(s), k ≥ 1.
EvalResult eval_G(const CPoint& s, int k, const PrecisionPolicy& policy, const EvalSettings& settings = {});

/// (2^s (-1)^k (log 2)^-k) at working precision; exposed for tests and the tracker.
mp::Complex g_prefactor(const CPoint& s, int k, mp::Prec prec);

GammaFactor eval_gamma_factor(const CPoint& s, const PrecisionPolicy& policy);

/// Digamma psi(z) at an arbitrary complex z off the poles.
EvalResult eval_digamma(const CPoint& z, const PrecisionPolicy& policy);

/// zeta^(ell)(s) / zeta^(ell-1)(s), ell ≥ 1.
EvalResult eval_ratio(const CPoint& s, int ell, const PrecisionPolicy& policy, const EvalSettings& settings = {});

/// The ratio from an existing derivative set; throws DenominatorZero when
/// the denominator's certified disk contains 0.
EvalResult ratio_from(const DerivativeSet& d, int ell);

/// h(s) zeta(s) with the combined radius; real on the critical line.
EvalResult eval_h_zeta(const CPoint& s, const PrecisionPolicy& policy, const EvalSettings& settings = {});

}  // namespace zdl::eval
