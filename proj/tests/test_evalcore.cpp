#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "zdl/errors.hpp"
#include "zdl/evalcore.hpp"

using namespace zdl;
using eval::CPoint;
using cd = std::complex<double>;
using cld = std::complex<long double>;

namespace {

const eval::PrecisionPolicy kPolicy{};

// sum_{n<=N} (log n)/n^2 plus the Euler-Maclaurin tail through f'(N)
long double zeta_prime_2_oracle() {
    const long N = 100000;
    long double s = 0.0L;
    for (long n = N; n >= 2; --n) {
        const long double ln = std::log(static_cast<long double>(n));
        s += ln / (static_cast<long double>(n) * n);
    }
    const long double n = N;
    const long double ln = std::log(n);
    const long double f = ln / (n * n);
    const long double df = (1.0L - 2.0L * ln) / (n * n * n);
    s += (ln + 1.0L) / n - f / 2.0L - df / 12.0L;
    return -s;
}

// direct Dirichlet series, fine for sigma >= 20
cld dirichlet(cld s, int k, int terms) {
    cld acc = 0.0L;
    for (int n = terms; n >= 1; --n) {
        const long double ln = std::log(static_cast<long double>(n));
        acc += std::pow(-ln, static_cast<long double>(k)) * std::exp(-s * ln);
    }
    return acc;
}

// zeta(s) by Euler-Maclaurin with N terms and two Bernoulli corrections
cd zeta_em(cd s, int N) {
    cd acc = 0.0;
    for (int n = N - 1; n >= 1; --n) acc += std::exp(-s * std::log(static_cast<double>(n)));
    const double ln = std::log(static_cast<double>(N));
    const cd nt = std::exp(-s * ln);
    acc += nt * static_cast<double>(N) / (s - 1.0) + nt / 2.0 + s * nt / (12.0 * N) -
           s * (s + 1.0) * (s + 2.0) * nt / (720.0 * N * N * N);
    return acc;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("zeta(2) is pi^2/6") {
    const auto r = eval::eval_zeta_deriv(CPoint(2.0, 0.0), 0, kPolicy);
    CHECK(r.approx().real() == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-15));
    CHECK(std::fabs(r.approx().imag()) < 1e-18);
    CHECK(r.radius() < std::ldexp(1.0, -64));
    CHECK(r.precision_bits >= 53);
}

TEST_CASE("zeta'(2) against the direct Dirichlet sum") {
    const long double oracle = zeta_prime_2_oracle();
    CHECK(std::fabs(static_cast<double>(oracle) - (-0.93754825431584375)) < 1e-13);
    const auto r = eval::eval_zeta_deriv(CPoint(2.0, 0.0), 1, kPolicy);
    CHECK(std::fabs(r.approx().real() - static_cast<double>(oracle)) < 1e-13);
}

TEST_CASE("zeta'' deep in the half-plane is two Dirichlet terms") {
    const cld s(30.0L, 100.0L);
    const auto r = eval::eval_zeta_deriv(CPoint(30.0, 100.0), 2, kPolicy);
    const cld l2 = std::log(2.0L);
    const cld two_term = l2 * l2 * std::exp(-s * l2);
    const double bound = 2.0 * std::pow(std::log(3.0), 2) * std::pow(3.0, -30.0);
    CHECK(std::abs(r.approx() - cd(two_term)) <= bound);
    CHECK(rel(r.approx(), cd(dirichlet(s, 2, 12))) < 1e-14);
}

TEST_CASE("G_k is normalized far to the right") {
    for (int k = 1; k <= 3; ++k) {
        for (double t : {10.0, 100.0, 1000.0}) {
            const auto g = eval::eval_G(CPoint(30.0, t), k, kPolicy).approx();
            const double bound = 2.0 * std::pow(std::log(3.0) / std::log(2.0), k) * std::pow(2.0 / 3.0, 30.0);
            CHECK(std::abs(g - 1.0) <= bound);
            CHECK(std::abs(g - 1.0) < 1e-4);
        }
    }
    // the series oracle at sigma = 10 (G_2)
    const cld s(10.0L, 7.0L);
    const cld direct = dirichlet(s, 2, 4000) * std::exp(s * std::log(2.0L)) / (std::log(2.0L) * std::log(2.0L));
    const auto g = eval::eval_G(CPoint(10.0, 7.0), 2, kPolicy).approx();
    CHECK(rel(g, cd(direct)) < 1e-12);
    CHECK(std::abs(g - 1.0) <= 2.0 * std::pow(std::log(3.0) / std::log(2.0), 2) * std::pow(2.0 / 3.0, 10.0));
    const auto far = eval::eval_G(CPoint(200.0, 0.0), 2, kPolicy).approx();
    CHECK(std::abs(far - 1.0) < 1e-30);
}

TEST_CASE("G_1 on the critical line is the prefactor times zeta'") {
    const CPoint s(0.5, 50.0);
    const cd z1 = eval::eval_zeta_deriv(s, 1, kPolicy).approx();
    const cd pref = -std::exp(s.z() * std::log(2.0)) / std::log(2.0);
    const cd g = eval::eval_G(s, 1, kPolicy).approx();
    CHECK(std::abs(g) > 0.0);
    CHECK(rel(g, pref * z1) < 1e-12);
}

TEST_CASE("zeta at 2+50i matches a double-precision Euler-Maclaurin sum") {
    const cd oracle = zeta_em(cd(2.0, 50.0), 2000);
    CHECK(rel(eval::eval_zeta_deriv(CPoint(2.0, 50.0), 0, kPolicy).approx(), oracle) < 1e-12);
}

TEST_CASE("finite differences reproduce the next derivative") {
    const double h = 1e-4;
    for (const CPoint s : {CPoint(2.0, 10.0), CPoint(3.0, 50.0)}) {
        for (int k = 0; k <= 2; ++k) {
            const cd up = eval::eval_zeta_deriv(CPoint(s.re + h, s.im), k, kPolicy).approx();
            const cd dn = eval::eval_zeta_deriv(CPoint(s.re - h, s.im), k, kPolicy).approx();
            const cd next = eval::eval_zeta_deriv(s, k + 1, kPolicy).approx();
            CHECK(rel((up - dn) / (2.0 * h), next) < 1e-6);
        }
    }
}

TEST_CASE("conjugation symmetry is bit-exact") {
    for (const CPoint s : {CPoint(0.5, 14.0), CPoint(2.0, 10.0), CPoint(0.3, 333.25)}) {
        for (int k = 0; k <= 3; ++k) {
            const auto a = eval::eval_zeta_deriv(s, k, kPolicy);
            const auto b = eval::eval_zeta_deriv(s.conj(), k, kPolicy);
            CHECK(mpfr_equal_p(a.value.re().get(), b.value.re().get()));
            CHECK(mpfr_cmpabs(a.value.im().get(), b.value.im().get()) == 0);
            CHECK(a.value.im().sign() == -b.value.im().sign());
            CHECK(mpfr_equal_p(a.error_radius.get(), b.error_radius.get()));
        }
    }
}

TEST_CASE("doubling output bits never widens the radius") {
    for (const CPoint s : {CPoint(0.5, 100.0), CPoint(0.1, 1000.0)}) {
        for (int k = 0; k <= 2; ++k) {
            const auto coarse = eval::eval_zeta_deriv(s, k, kPolicy.with_output_bits(64));
            const auto fine = eval::eval_zeta_deriv(s, k, kPolicy.with_output_bits(128));
            CHECK(fine.error_radius <= coarse.error_radius);
            CHECK(fine.radius() < std::ldexp(1.0, -128));
            CHECK(std::abs(fine.approx() - coarse.approx()) <= coarse.radius() + fine.radius() + 1e-300);
        }
    }
}

TEST_CASE("working precision grows with height") {
    int last = 0;
    for (double t : {0.0, 10.0, 100.0, 1000.0, 1e5}) {
        const int w = kPolicy.working_bits(t);
        CHECK(w >= last);
        last = w;
    }
    CHECK(kPolicy.working_bits(0.0) == 64 + 32 + static_cast<int>(std::ceil(8.0 * std::log(2.0))));
}

TEST_CASE("gamma factor: h(2) = 1/pi and its log-derivative") {
    const auto g = eval::eval_gamma_factor(CPoint(2.0, 0.0), kPolicy);
    CHECK(g.h.approx().real() == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    // h'/h = -log(pi)/2 + psi(s/2)/2, psi(1) = -gamma
    const double expect = -0.5 * std::log(std::numbers::pi) - 0.5 * std::numbers::egamma;
    CHECK(g.h_log_deriv.approx().real() == doctest::Approx(expect).epsilon(1e-15));

    const auto high = eval::eval_gamma_factor(CPoint(0.5, 100.0), kPolicy);
    CHECK(std::fabs(high.h_log_deriv.approx().real() - 0.5 * std::log(100.0 / (2.0 * std::numbers::pi))) < 0.05);
}

TEST_CASE("digamma at classical points") {
    CHECK(eval::eval_digamma(CPoint(1.0, 0.0), kPolicy).approx().real() ==
          doctest::Approx(-std::numbers::egamma).epsilon(1e-15));
    CHECK(eval::eval_digamma(CPoint(0.5, 0.0), kPolicy).approx().real() ==
          doctest::Approx(-std::numbers::egamma - 2.0 * std::log(2.0)).epsilon(1e-15));
    // psi(z+1) - psi(z) = 1/z
    const cd z(0.3, 4.0);
    const cd a = eval::eval_digamma(CPoint(z.real(), z.imag()), kPolicy).approx();
    const cd b = eval::eval_digamma(CPoint(z.real() + 1.0, z.imag()), kPolicy).approx();
    CHECK(std::abs(b - a - 1.0 / z) < 1e-15);
    CHECK_THROWS_AS(eval::eval_digamma(CPoint(-2.0, 0.0), kPolicy), Error);
}

TEST_CASE("h zeta is real on the critical line") {
    for (double t = 10.0; t <= 1000.0; t += 37.5) {
        const auto r = eval::eval_h_zeta(CPoint(0.5, t), kPolicy);
        CHECK(std::fabs(r.value.im().to_double()) <= r.radius());
    }
    const auto r30 = eval::eval_h_zeta(CPoint(0.5, 30.0), kPolicy);
    CHECK(std::fabs(r30.value.im().to_double()) <= r30.radius());
}

TEST_CASE("log-derivative ratios") {
    const cd z0 = eval::eval_zeta_deriv(CPoint(2.0, 0.0), 0, kPolicy).approx();
    const cd ratio = eval::eval_ratio(CPoint(2.0, 0.0), 1, kPolicy).approx();
    CHECK(ratio.real() == doctest::Approx(static_cast<double>(zeta_prime_2_oracle()) / z0.real()).epsilon(1e-13));
    CHECK(eval::eval_ratio(CPoint(0.25, 100.0), 1, kPolicy).approx().real() < 0.0);

    // at a zero of zeta the denominator disk contains 0 once the target is coarse enough
    const CPoint rho(0.5, 14.134725141734693);
    CHECK_THROWS_WITH_AS(eval::eval_ratio(rho, 1, kPolicy.with_output_bits(30)), doctest::Contains("DenominatorZero"),
                         Error);
}

TEST_CASE("the pole at s = 1 is refused") {
    CHECK_THROWS_WITH_AS(eval::eval_zeta_deriv(CPoint(1.0, 0.0), 0, kPolicy), doctest::Contains("PoleProximity"), Error);
    CHECK_THROWS_AS(eval::eval_zeta_deriv(CPoint(1.0 + 1e-5, 0.0), 1, kPolicy), Error);
    CHECK_NOTHROW(eval::eval_zeta_deriv(CPoint(1.0, 0.01), 0, kPolicy));
}

TEST_CASE("all orders from one sum agree with single-order calls") {
    const CPoint s(0.7, 123.0);
    const auto set = eval::eval_zeta_derivs(s, 6, kPolicy);
    REQUIRE(set.values.size() == 7);
    for (int k = 0; k <= 4; ++k) {
        const auto one = eval::eval_zeta_deriv(s, k, kPolicy);
        CHECK(std::abs(set.at(k).approx() - one.approx()) <= set.at(k).radius() + one.radius());
    }
    CHECK_THROWS_AS(eval::eval_zeta_derivs(s, 7, kPolicy), Error);
}
