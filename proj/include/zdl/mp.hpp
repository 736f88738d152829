#pragma once

// Thin RAII layer over MPFR: a variable-precision real and a complex built
// from two of them. Binary operators return results at the larger operand
// precision; hot loops use the in-place helpers at the bottom.

#include <mpfr.h>

#include <complex>
#include <cstdint>
#include <string>
#include <utility>

namespace zdl::mp {

using Prec = mpfr_prec_t;

class Real {
public:
    explicit Real(Prec prec = 53) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    Real(double v, Prec prec) { mpfr_init2(x_, prec); mpfr_set_d(x_, v, MPFR_RNDN); }
    Real(long v, Prec prec) { mpfr_init2(x_, prec); mpfr_set_si(x_, v, MPFR_RNDN); }
    Real(int v, Prec prec) : Real(static_cast<long>(v), prec) {}

    Real(const Real& o) {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        x_[0] = o.x_[0];
        o.x_[0]._mpfr_d = nullptr;
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            if (x_[0]._mpfr_d == nullptr) mpfr_init2(x_, mpfr_get_prec(o.x_));
            else mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        std::swap(x_[0], o.x_[0]);
        return *this;
    }
    ~Real() {
        if (x_[0]._mpfr_d != nullptr) mpfr_clear(x_);
    }

    /// Keeps this object's precision and rounds `v` into it.
    void assign(const Real& v) { mpfr_set(x_, v.x_, MPFR_RNDN); }
    void assign(double v) { mpfr_set_d(x_, v, MPFR_RNDN); }

    [[nodiscard]] mpfr_ptr get() { return x_; }
    [[nodiscard]] mpfr_srcptr get() const { return x_; }
    [[nodiscard]] Prec precision() const { return mpfr_get_prec(x_); }

    [[nodiscard]] double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    [[nodiscard]] bool is_zero() const { return mpfr_zero_p(x_) != 0; }
    [[nodiscard]] bool is_finite() const { return mpfr_number_p(x_) != 0; }
    [[nodiscard]] int sign() const { return mpfr_sgn(x_); }
    /// log2 of the magnitude (−inf for zero); safe for values outside double range.
    [[nodiscard]] double log2_abs() const;
    [[nodiscard]] std::string to_string(int digits = 20) const;

    Real& operator+=(const Real& o) { mpfr_add(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator*=(double d) { mpfr_mul_d(x_, x_, d, MPFR_RNDN); return *this; }

private:
    mpfr_t x_;
};

inline Prec max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
Real operator*(const Real& a, double b);
Real operator+(const Real& a, double b);

bool operator<(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
inline bool operator>(const Real& a, const Real& b) { return b < a; }
inline bool operator>=(const Real& a, const Real& b) { return b <= a; }

Real abs(const Real& a);
Real sqrt(const Real& a);
Real exp(const Real& a);
Real log(const Real& a);
Real exp2(double e, Prec prec);
Real pi(Prec prec);
Real log_ui(unsigned long n, Prec prec);
Real max(const Real& a, const Real& b);

class Complex {
public:
    explicit Complex(Prec prec = 53) : re_(prec), im_(prec) {}
    Complex(double re, double im, Prec prec) : re_(re, prec), im_(im, prec) {}
    Complex(std::complex<double> z, Prec prec) : re_(z.real(), prec), im_(z.imag(), prec) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

    [[nodiscard]] Real& re() { return re_; }
    [[nodiscard]] Real& im() { return im_; }
    [[nodiscard]] const Real& re() const { return re_; }
    [[nodiscard]] const Real& im() const { return im_; }
    [[nodiscard]] Prec precision() const { return re_.precision(); }

    /// Nearest double complex; components outside the double range over/underflow.
    [[nodiscard]] std::complex<double> to_cdouble() const { return {re_.to_double(), im_.to_double()}; }
    /// Principal argument in (−π, π]; well defined for any finite non-zero magnitude.
    [[nodiscard]] double arg() const;
    /// Natural log of |z|, computed without leaving MPFR's exponent range.
    [[nodiscard]] double log_abs() const;
    [[nodiscard]] bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    Complex& operator+=(const Complex& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Complex& operator-=(const Complex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Complex& operator*=(const Complex& o);
    Complex& operator*=(const Real& r) { re_ *= r; im_ *= r; return *this; }
    Complex& operator*=(double d) { re_ *= d; im_ *= d; return *this; }

private:
    Real re_;
    Real im_;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator-(const Complex& a);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator*(const Complex& a, double b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);

Real abs(const Complex& z);
Real norm(const Complex& z);  ///< |z|^2
Complex conj(const Complex& z);
Complex exp(const Complex& z);
/// Principal branch.
Complex log(const Complex& z);
Complex reciprocal(const Complex& z);
/// exp(−z·log_base) for real log_base, i.e. base^(−z).
Complex pow_neg(const Real& log_base, const Complex& z);

// In-place kernels for inner loops; no allocation. `tmp` must be distinct from all operands.
void mul_into(Complex& out, const Complex& a, const Complex& b, Real& tmp1, Real& tmp2);
void add_into(Complex& acc, const Complex& a);
void scale_into(Complex& z, const Real& r);

/// Exact accumulator for doubles: a wide MPFR register wide enough to hold
/// any finite sum of doubles without rounding, so the result is order-independent.
class ExactSum {
public:
    ExactSum() : acc_(2200) {}
    void add(double v) { mpfr_add_d(acc_.get(), acc_.get(), v, MPFR_RNDN); }
    [[nodiscard]] double value() const { return acc_.to_double(); }

private:
    Real acc_;
};

}  // namespace zdl::mp
