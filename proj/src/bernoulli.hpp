#pragma once

#include <vector>

#include "zdl/mp.hpp"

namespace zdl::eval::detail {

inline constexpr int kBernoulliCount = 320;
inline constexpr mp::Prec kTableBits = 1152;
inline constexpr int kMaxWorkingBits = 1088;

/// B_{2j} and B_{2j}/(2j)! for j = 0..kBernoulliCount-1, plus their log2
/// magnitudes. Built once on first use, read-only afterwards.
struct BernoulliTable {
    std::vector<mp::Real> b2j;
    std::vector<mp::Real> b2j_over_fact;
    std::vector<double> log2_b2j;
    std::vector<double> log2_b2j_over_fact;
};

const BernoulliTable& bernoulli();

}  // namespace zdl::eval::detail
