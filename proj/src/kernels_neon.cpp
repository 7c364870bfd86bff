// NEON variants for aarch64. log_cosh_sum stays on the scalar path there;
// the simple reductions vectorize cleanly.

#include "esym/kernels.hpp"

#if defined(ESYM_WITH_NEON)

#include <arm_neon.h>

namespace esym::kernels::neon {

double sum(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  double s = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) s += x[i];
  return s;
}

void sum_and_sumsq(const double* x, std::size_t n, double* sum, double* sumsq) {
  float64x2_t acc = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    acc = vaddq_f64(acc, v);
    acc2 = vfmaq_f64(acc2, v, v);
  }
  double s = vaddvq_f64(acc), ss = vaddvq_f64(acc2);
  for (; i < n; ++i) {
    s += x[i];
    ss += x[i] * x[i];
  }
  *sum = s;
  *sumsq = ss;
}

std::size_t count_positive(const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t gt = vcgtq_f64(vld1q_f64(x + i), zero);
    acc = vsubq_u64(acc, gt);  // gt lanes are all-ones == -1
  }
  std::size_t c = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
  for (; i < n; ++i) c += x[i] > 0.0;
  return c;
}

}  // namespace esym::kernels::neon

#endif  // ESYM_WITH_NEON
