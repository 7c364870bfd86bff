#include "esym/parametric.hpp"

#include <cmath>
#include <stdexcept>

#include "esym/kernels.hpp"

namespace esym {

double gauss_lr_log_e(double theta, std::span<const double> values) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("gauss_lr_e: theta must be finite");
  }
  const double n = static_cast<double>(values.size());
  return theta * kernels::sum(values) - 0.5 * n * theta * theta;
}

EValue gauss_lr_e(double theta, const Sample& s) {
  return EValue::from_log(gauss_lr_log_e(theta, s.values()));
}

double gauss_optimal_epower(double theta, std::size_t n) {
  return 0.5 * static_cast<double>(n) * theta * theta;
}

double gauss_mix_log_e(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double s = kernels::sum(values);
  return -0.5 * std::log(n + 1.0) + s * s / (2.0 * n + 2.0);
}

EValue gauss_mix_e(const Sample& s) {
  return EValue::from_log(gauss_mix_log_e(s.values()));
}

double kl_gauss(double theta) { return 0.5 * theta * theta; }

std::size_t baseline_n(EPowerTarget beta, double theta) {
  if (!(beta.beta > 0.0)) {
    throw std::invalid_argument("baseline_n: beta must be positive");
  }
  if (theta == 0.0 || !std::isfinite(theta)) {
    throw std::invalid_argument("baseline_n: theta == 0 admits no finite n");
  }
  const double q = 2.0 * beta.beta / (theta * theta);
  // nudge before the ceiling so exact integer targets survive fp rounding
  const double n = std::ceil(q - 1e-9 * std::max(1.0, q));
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

}  // namespace esym
