#pragma once

#include "esym/sample.hpp"

namespace esym {

enum class Side { one_sided, two_sided };

struct PValue {
  double value = 1.0;
  Side side = Side::one_sided;
};

/// Exact permutation p-value of the sum statistic under sign flips:
/// one-sided = #{flips with sum >= observed sum} / 2^n (closed comparison),
/// two-sided = min(1, 2 * one-sided). Requires n <= the enumeration cap.
PValue fisher_permutation_pvalue(const Sample& s, Side side, int n_threads = 1);

/// Binomial sign-test p-value: one-sided = P(Bin(n, 1/2) >= k),
/// two-sided = min(1, 2 * one-sided).
PValue sign_test_pvalue(const Sample& s, Side side);

}  // namespace esym
