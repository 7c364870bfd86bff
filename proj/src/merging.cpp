#include "esym/merging.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "esym/numerics.hpp"

namespace esym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_product(const EVector& v, std::span<const std::size_t> subset) {
  bool has_inf = false;
  double acc = 0.0;
  for (std::size_t idx : subset) {
    if (idx >= v.entries.size()) {
      throw std::invalid_argument("merge: subset index out of range");
    }
    const double lv = v.entries[idx].log();
    if (lv == kInf) {
      has_inf = true;  // an infinite e-value dominates the product
    } else {
      acc += lv;
    }
  }
  return has_inf ? kInf : acc;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

}  // namespace

void MergeSpec::validate(std::size_t k) const {
  if (terms.empty()) throw std::invalid_argument("MergeSpec: no terms");
  double total = 0.0;
  for (const MergeTerm& term : terms) {
    if (!(term.weight >= 0.0)) {
      throw std::invalid_argument("MergeSpec: negative weight");
    }
    for (std::size_t idx : term.subset) {
      if (idx >= k) throw std::invalid_argument("MergeSpec: subset index out of range");
    }
    total += term.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("MergeSpec: weights must sum to 1");
  }
}

EValue product_merge(const EVector& v, std::span<const std::size_t> subset) {
  return EValue::from_log(log_product(v, subset));
}

EValue mixture_merge(const EVector& v, const MergeSpec& spec) {
  spec.validate(v.entries.size());
  std::vector<double> terms;
  terms.reserve(spec.terms.size());
  for (const MergeTerm& term : spec.terms) {
    if (term.weight == 0.0) continue;
    terms.push_back(std::log(term.weight) + log_product(v, term.subset));
  }
  if (terms.empty()) return EValue::from_value(0.0);
  return EValue::from_log(log_sum_exp(terms));
}

EValue u_statistic_merge(const EVector& v, std::size_t order) {
  const std::size_t k = v.entries.size();
  if (order < 1 || order > k) {
    throw std::invalid_argument("u_statistic_merge: order must lie in [1, K]");
  }
  // elementary symmetric polynomial e_order of the entries
  std::vector<double> dp(order + 1, 0.0);
  dp[0] = 1.0;
  for (const EValue& e : v.entries) {
    const double value = e.value();
    for (std::size_t j = order; j >= 1; --j) {
      dp[j] += dp[j - 1] * value;
    }
  }
  return EValue::from_value(dp[order] / binomial(k, order));
}

EValue lift(double lambda, EValue e) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lift: lambda must lie in (0, 1]");
  }
  if (lambda == 1.0 || e.log() == 0.0) return e;  // identity cases are exact
  const double terms[2] = {std::log1p(-lambda), std::log(lambda) + e.log()};
  return EValue::from_log(log_sum_exp(terms));
}

EPowerEstimate e_power_estimate(std::span<const double> log_values) {
  if (log_values.empty()) {
    throw std::invalid_argument("e_power_estimate: empty input");
  }
  const std::size_t n = log_values.size();
  double sum = 0.0, comp = 0.0;
  for (double v : log_values) {
    const double t = sum + v;
    comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  const double mean = (sum + comp) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : log_values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  EPowerEstimate est;
  est.mean = mean;
  est.se = std::sqrt(var / static_cast<double>(n));
  est.count = n;
  return est;
}

}  // namespace esym
