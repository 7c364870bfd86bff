#include <cmath>
#include <numbers>

#include "esym/kernels.hpp"

namespace esym::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

void sum_and_sumsq(const double* x, std::size_t n, double* sum, double* sumsq) {
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += x[i];
    ss += x[i] * x[i];
  }
  *sum = s;
  *sumsq = ss;
}

std::size_t count_positive(const double* x, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] > 0.0;
  return c;
}

double log_cosh_sum(double lambda, const double* x, std::size_t n) {
  // log((e^t + e^-t)/2) = |t| + log1p(e^{-2|t|}) - log 2, exact for |t| ~ 700+
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(lambda * x[i]);
    s += a + std::log1p(std::exp(-2.0 * a));
  }
  return s - static_cast<double>(n) * std::numbers::ln2;
}

}  // namespace esym::kernels::scalar
