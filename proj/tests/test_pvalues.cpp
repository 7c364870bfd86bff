#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "esym/datasets.hpp"
#include "esym/pvalues.hpp"
#include "esym/rng.hpp"
#include "esym/sample.hpp"
#include "esym/symmetry_kernel.hpp"

using namespace esym;

TEST_CASE("fisher permutation p-value on the reference data") {
  const Sample darwin(darwin_maize());
  const PValue one = fisher_permutation_pvalue(darwin, Side::one_sided);
  CHECK(one.value == 863.0 / 32768.0);
  const PValue two = fisher_permutation_pvalue(darwin, Side::two_sided);
  CHECK(two.value == 2.0 * one.value);
}

TEST_CASE("fisher permutation p-value tiny cases") {
  CHECK(fisher_permutation_pvalue(Sample({1.0}), Side::one_sided).value == 0.5);
  // all-positive n=2: only the identity flip reaches the observed sum
  CHECK(fisher_permutation_pvalue(Sample({1.0, 2.0}), Side::one_sided).value == 0.25);
  CHECK(fisher_permutation_pvalue(Sample({1.0, 2.0}), Side::two_sided).value == 0.5);
}

TEST_CASE("fisher permutation p-value is scale invariant and thread invariant") {
  const Sample s({0.4, -1.1, 2.7, 0.9, -0.3, 1.8});
  std::vector<double> scaled(s.values().begin(), s.values().end());
  for (double& v : scaled) v *= 17.5;
  CHECK(fisher_permutation_pvalue(Sample(scaled), Side::one_sided).value ==
        fisher_permutation_pvalue(s, Side::one_sided).value);
  CHECK(fisher_permutation_pvalue(s, Side::one_sided, 8).value ==
        fisher_permutation_pvalue(s, Side::one_sided, 1).value);
}

TEST_CASE("fisher permutation p-value rejects oversized samples") {
  std::vector<double> big(kEnumerationCap + 1);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = 1.0 + static_cast<double>(i);
  CHECK_THROWS_AS(fisher_permutation_pvalue(Sample(big), Side::one_sided),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo sign flips converge to the exact permutation p-value") {
  const Sample s({0.9, -0.2, 1.4, 2.2, -0.6, 0.8, 1.1});
  const double exact = fisher_permutation_pvalue(s, Side::one_sided).value;
  const Summary m = summarize(s);
  double observed = 0.0;
  for (double v : s.values()) observed += v;

  const int draws = 40000;
  int hits = 0;
  for (int d = 0; d < draws; ++d) {
    const Sample flip = kernel_sample(m, RngSeed{99, static_cast<std::uint64_t>(d)});
    double sum = 0.0;
    for (double v : flip.values()) sum += v;
    hits += sum >= observed;
  }
  const double estimate = static_cast<double>(hits) / draws;
  const double se = std::sqrt(exact * (1.0 - exact) / draws);
  CHECK(std::fabs(estimate - exact) < 4.0 * se);
}

TEST_CASE("sign test p-value on the reference data") {
  const Sample darwin(darwin_maize());
  CHECK(sign_test_pvalue(darwin, Side::one_sided).value == 121.0 / 32768.0);
  CHECK(sign_test_pvalue(darwin, Side::two_sided).value == 242.0 / 32768.0);
}

TEST_CASE("sign test p-value small cases") {
  CHECK(sign_test_pvalue(Sample({3.0}), Side::one_sided).value == 0.5);
  CHECK(sign_test_pvalue(Sample({-3.0}), Side::one_sided).value == 1.0);
  // n=4, k=2: P(Bin >= 2) = 11/16
  CHECK(sign_test_pvalue(Sample({1.0, 1.0, -1.0, -1.0}), Side::one_sided).value ==
        11.0 / 16.0);
  // doubling caps at 1
  CHECK(sign_test_pvalue(Sample({-3.0}), Side::two_sided).value == 1.0);
}

TEST_CASE("sign test p-value matches the beta identity for large n") {
  // exact integer path vs regularized incomplete beta
  std::vector<double> v(70, 1.0);
  for (std::size_t i = 0; i < 30; ++i) v[i] = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= 1.0 + 0.01 * static_cast<double>(i);
  const Sample s(v);  // n = 70, k = 40: exercises the beta branch
  const double p = sign_test_pvalue(s, Side::one_sided).value;
  // binomial recursion oracle at double precision
  std::vector<double> coeff(71, 0.0);
  coeff[0] = 1.0;
  for (int row = 1; row <= 70; ++row) {
    for (int j = row; j >= 1; --j) coeff[j] += coeff[j - 1];
  }
  double tail = 0.0;
  for (int j = 40; j <= 70; ++j) tail += coeff[j];
  CHECK(p == doctest::Approx(std::ldexp(tail, -70)).epsilon(1e-10));
}
