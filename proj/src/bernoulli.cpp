#include "bernoulli.hpp"

namespace zdl::eval::detail {
namespace {

// B_{2j}/(2j)! = (-1)^(j+1) 2 zeta(2j) / (2 pi)^(2j), j ≥ 1.
BernoulliTable build() {
    BernoulliTable t;
    t.b2j.reserve(kBernoulliCount);
    t.b2j_over_fact.reserve(kBernoulliCount);
    mp::Real two_pi = mp::pi(kTableBits) * 2.0;
    mp::Real zeta(kTableBits), pw(kTableBits), fact(kTableBits), ratio(kTableBits), full(kTableBits);

    t.b2j.emplace_back(1L, kTableBits);
    t.b2j_over_fact.emplace_back(1L, kTableBits);
    t.log2_b2j.push_back(0.0);
    t.log2_b2j_over_fact.push_back(0.0);
    for (unsigned long j = 1; j < static_cast<unsigned long>(kBernoulliCount); ++j) {
        mpfr_zeta_ui(zeta.get(), 2 * j, MPFR_RNDN);
        mpfr_pow_ui(pw.get(), two_pi.get(), 2 * j, MPFR_RNDN);
        mpfr_div(ratio.get(), zeta.get(), pw.get(), MPFR_RNDN);
        mpfr_mul_ui(ratio.get(), ratio.get(), 2, MPFR_RNDN);
        if (j % 2 == 0) mpfr_neg(ratio.get(), ratio.get(), MPFR_RNDN);
        mpfr_fac_ui(fact.get(), 2 * j, MPFR_RNDN);
        mpfr_mul(full.get(), ratio.get(), fact.get(), MPFR_RNDN);
        t.log2_b2j_over_fact.push_back(ratio.log2_abs());
        t.log2_b2j.push_back(full.log2_abs());
        t.b2j_over_fact.push_back(ratio);
        t.b2j.push_back(full);
    }
    return t;
}

}  // namespace

const BernoulliTable& bernoulli() {
    static const BernoulliTable table = build();
    return table;
}

}  // namespace zdl::eval::detail
