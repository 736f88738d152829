#include "zdl/mp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace zdl::mp {

double Real::log2_abs() const {
    if (mpfr_zero_p(x_)) return -std::numeric_limits<double>::infinity();
    long e = 0;
    const double m = std::fabs(mpfr_get_d_2exp(&e, x_, MPFR_RNDN));
    return std::log2(m) + static_cast<double>(e);
}

std::string Real::to_string(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, x_);
    return buf.data();
}

Real operator+(const Real& a, const Real& b) {
    Real r(max_prec(a, b));
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
Real operator-(const Real& a, const Real& b) {
    Real r(max_prec(a, b));
    mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, const Real& b) {
    Real r(max_prec(a, b));
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
Real operator/(const Real& a, const Real& b) {
    Real r(max_prec(a, b));
    mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
Real operator-(const Real& a) {
    Real r(a.precision());
    mpfr_neg(r.get(), a.get(), MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, double b) {
    Real r(a.precision());
    mpfr_mul_d(r.get(), a.get(), b, MPFR_RNDN);
    return r;
}
Real operator+(const Real& a, double b) {
    Real r(a.precision());
    mpfr_add_d(r.get(), a.get(), b, MPFR_RNDN);
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }

Real abs(const Real& a) {
    Real r(a.precision());
    mpfr_abs(r.get(), a.get(), MPFR_RNDN);
    return r;
}
Real sqrt(const Real& a) {
    Real r(a.precision());
    mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
    return r;
}
Real exp(const Real& a) {
    Real r(a.precision());
    mpfr_exp(r.get(), a.get(), MPFR_RNDN);
    return r;
}
Real log(const Real& a) {
    Real r(a.precision());
    mpfr_log(r.get(), a.get(), MPFR_RNDN);
    return r;
}
Real exp2(double e, Prec prec) {
    Real r(e, prec);
    mpfr_exp2(r.get(), r.get(), MPFR_RNDU);
    return r;
}
Real pi(Prec prec) {
    Real r(prec);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}
Real log_ui(unsigned long n, Prec prec) {
    Real r(prec);
    mpfr_log_ui(r.get(), n, MPFR_RNDN);
    return r;
}
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

double Complex::arg() const {
    // Scale both parts by a common power of two so the quotient survives conversion.
    if (re_.is_zero() && im_.is_zero()) return 0.0;
    long er = 0, ei = 0;
    double mr = mpfr_get_d_2exp(&er, re_.get(), MPFR_RNDN);
    double mi = mpfr_get_d_2exp(&ei, im_.get(), MPFR_RNDN);
    if (re_.is_zero()) er = ei;
    if (im_.is_zero()) ei = er;
    const long e = std::max(er, ei);
    mr = std::ldexp(mr, static_cast<int>(std::max(er - e, -2000L)));
    mi = std::ldexp(mi, static_cast<int>(std::max(ei - e, -2000L)));
    return std::atan2(mi, mr);
}

double Complex::log_abs() const {
    if (re_.is_zero() && im_.is_zero()) return -std::numeric_limits<double>::infinity();
    long er = 0, ei = 0;
    double mr = mpfr_get_d_2exp(&er, re_.get(), MPFR_RNDN);
    double mi = mpfr_get_d_2exp(&ei, im_.get(), MPFR_RNDN);
    if (re_.is_zero()) er = ei;
    if (im_.is_zero()) ei = er;
    const long e = std::max(er, ei);
    mr = std::ldexp(mr, static_cast<int>(std::max(er - e, -2000L)));
    mi = std::ldexp(mi, static_cast<int>(std::max(ei - e, -2000L)));
    return std::log(std::hypot(mr, mi)) + static_cast<double>(e) * std::log(2.0);
}

Complex& Complex::operator*=(const Complex& o) {
    Complex r = *this * o;
    *this = std::move(r);
    return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re() + b.re(), a.im() + b.im()}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re() - b.re(), a.im() - b.im()}; }
Complex operator-(const Complex& a) { return {-a.re(), -a.im()}; }

Complex operator*(const Complex& a, const Complex& b) {
    const Prec p = std::max(a.precision(), b.precision());
    Complex r(p);
    Real t1(p), t2(p);
    mul_into(r, a, b, t1, t2);
    return r;
}
Complex operator*(const Complex& a, const Real& b) { return {a.re() * b, a.im() * b}; }
Complex operator*(const Real& a, const Complex& b) { return b * a; }
Complex operator*(const Complex& a, double b) { return {a.re() * b, a.im() * b}; }

Complex operator/(const Complex& a, const Complex& b) { return a * reciprocal(b); }
Complex operator/(const Complex& a, const Real& b) { return {a.re() / b, a.im() / b}; }

Real norm(const Complex& z) { return z.re() * z.re() + z.im() * z.im(); }

Real abs(const Complex& z) {
    Real r(z.precision());
    mpfr_hypot(r.get(), z.re().get(), z.im().get(), MPFR_RNDN);
    return r;
}

Complex conj(const Complex& z) { return {z.re(), -z.im()}; }

Complex exp(const Complex& z) {
    const Prec p = z.precision();
    Real mag = exp(z.re());
    Real s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
    return {c * mag, s * mag};
}

Complex log(const Complex& z) {
    const Prec p = z.precision();
    Real a(p);
    mpfr_atan2(a.get(), z.im().get(), z.re().get(), MPFR_RNDN);
    Real m = log(abs(z));
    return {std::move(m), std::move(a)};
}

Complex reciprocal(const Complex& z) {
    Real n = norm(z);
    return {z.re() / n, -(z.im() / n)};
}

Complex pow_neg(const Real& log_base, const Complex& z) {
    const Prec p = std::max(log_base.precision(), z.precision());
    Real mag(p), ang(p), s(p), c(p);
    mpfr_mul(mag.get(), z.re().get(), log_base.get(), MPFR_RNDN);
    mpfr_neg(mag.get(), mag.get(), MPFR_RNDN);
    mpfr_exp(mag.get(), mag.get(), MPFR_RNDN);
    mpfr_mul(ang.get(), z.im().get(), log_base.get(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
    mpfr_mul(c.get(), c.get(), mag.get(), MPFR_RNDN);
    mpfr_mul(s.get(), s.get(), mag.get(), MPFR_RNDN);
    mpfr_neg(s.get(), s.get(), MPFR_RNDN);
    return {std::move(c), std::move(s)};
}

void mul_into(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2) {
    // out may alias a or b, so both products are formed before writing.
    mpfr_mul(t1.get(), a.re().get(), b.re().get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im().get(), b.im().get(), MPFR_RNDN);
    mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.re().get(), b.im().get(), MPFR_RNDN);
    mpfr_fma(t2.get(), a.im().get(), b.re().get(), t2.get(), MPFR_RNDN);
    mpfr_set(out.re().get(), t1.get(), MPFR_RNDN);
    mpfr_set(out.im().get(), t2.get(), MPFR_RNDN);
}

void add_into(Complex& acc, const Complex& a) {
    mpfr_add(acc.re().get(), acc.re().get(), a.re().get(), MPFR_RNDN);
    mpfr_add(acc.im().get(), acc.im().get(), a.im().get(), MPFR_RNDN);
}

void scale_into(Complex& z, const Real& r) {
    mpfr_mul(z.re().get(), z.re().get(), r.get(), MPFR_RNDN);
    mpfr_mul(z.im().get(), z.im().get(), r.get(), MPFR_RNDN);
}

}  // namespace zdl::mp
