#include "esym/sample.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "esym/kernels.hpp"

namespace esym {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("Sample: needs at least one observation");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("Sample: value at index " + std::to_string(i) +
                                  " is not finite");
    }
    if (values_[i] == 0.0) {
      throw std::invalid_argument("Sample: value at index " + std::to_string(i) +
                                  " is zero; a zero has no sign under the symmetry null");
    }
  }
}

Summary::Summary(std::vector<double> magnitudes) : magnitudes_(std::move(magnitudes)) {
  if (magnitudes_.empty()) {
    throw std::invalid_argument("Summary: needs at least one magnitude");
  }
  for (std::size_t i = 0; i < magnitudes_.size(); ++i) {
    if (!std::isfinite(magnitudes_[i]) || magnitudes_[i] <= 0.0) {
      throw std::invalid_argument("Summary: magnitude at index " + std::to_string(i) +
                                  " must be finite and positive");
    }
  }
}

Summary summarize(const Sample& s) {
  std::vector<double> m(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) m[i] = std::fabs(s[i]);
  return Summary(std::move(m));
}

Sample apply_signs(const Summary& m, const SignVector& signs) {
  if (signs.signs.size() != m.size()) {
    throw std::invalid_argument("apply_signs: sign vector length must equal n");
  }
  std::vector<double> v(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (signs.signs[i] != 1 && signs.signs[i] != -1) {
      throw std::invalid_argument("apply_signs: signs must be +-1");
    }
    v[i] = signs.signs[i] > 0 ? m[i] : -m[i];
  }
  return Sample(std::move(v));
}

Sample normalized(const Sample& s, Normalization mode) {
  if (mode == Normalization::none) return s;
  const std::size_t n = s.size();
  if (mode == Normalization::std_sample && n < 2) {
    throw std::invalid_argument("normalized: std_sample needs n >= 2");
  }
  double sum = 0.0, sumsq = 0.0;
  kernels::sum_and_sumsq(s.values(), &sum, &sumsq);
  const double mean = sum / static_cast<double>(n);
  const double centered = sumsq - static_cast<double>(n) * mean * mean;
  const double denom =
      mode == Normalization::std_sample ? static_cast<double>(n - 1) : static_cast<double>(n);
  const double sd = std::sqrt(std::max(centered, 0.0) / denom);
  if (!(sd > 0.0)) {
    throw std::invalid_argument("normalized: sample has zero scale");
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = s[i] / sd;
  return Sample(std::move(v));
}

}  // namespace esym
