// AVX2/FMA variants of the batch kernels. This translation unit is compiled
// with -mavx2 -mfma and must only be entered through the dispatch table
// after a runtime CPU check.

#include "esym/kernels.hpp"

#if defined(ESYM_WITH_AVX2)

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <numbers>

namespace esym::kernels::avx2 {

namespace {

// exp on 4 lanes, Cephes-style: reduce x = n ln2 + r, evaluate the rational
// approximation e^r = 1 + 2 p/(q - p) on |r| <= ln2/2, scale by 2^n through
// the exponent bits. Saturates to 0 below -708.4 (skipping the denormal
// range) and clamps the argument at 709 on the high side.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d min_x = _mm256_set1_pd(-708.396418532264106224);
  const __m256d max_x = _mm256_set1_pd(709.0);

  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, min_x), max_x);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);
  __m256d r2 = _mm256_mul_pd(r, r);

  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);

  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));

  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // 2^n via the exponent field; n stays within [-1022, 1023] after clamping
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));

  __m256d underflow = _mm256_cmp_pd(x, min_x, _CMP_LT_OQ);
  return _mm256_andnot_pd(underflow, e);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace

void exp4(const double in[4], double out[4]) {
  _mm256_storeu_pd(out, exp_pd(_mm256_loadu_pd(in)));
}

double sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

void sum_and_sumsq(const double* x, std::size_t n, double* sum, double* sumsq) {
  __m256d acc = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, v);
    acc2 = _mm256_fmadd_pd(v, v, acc2);
  }
  double s = hsum(acc), ss = hsum(acc2);
  for (; i < n; ++i) {
    s += x[i];
    ss += x[i] * x[i];
  }
  *sum = s;
  *sumsq = ss;
}

std::size_t count_positive(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, zero, _CMP_GT_OQ));
    c += std::popcount(static_cast<unsigned>(mask));
  }
  for (; i < n; ++i) c += x[i] > 0.0;
  return c;
}

double log_cosh_sum(double lambda, const double* x, std::size_t n) {
  const __m256d vlam = _mm256_set1_pd(lambda);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg2 = _mm256_set1_pd(-2.0);

  __m256d abs_acc = _mm256_setzero_pd();
  __m256d prod = one;
  double log_acc = 0.0;
  int pending = 0;

  auto flush = [&]() {
    double lanes[4];
    _mm256_storeu_pd(lanes, prod);
    log_acc += std::log(lanes[0]) + std::log(lanes[1]) + std::log(lanes[2]) +
               std::log(lanes[3]);
    prod = one;
    pending = 0;
  };

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(vlam, _mm256_loadu_pd(x + i));
    __m256d a = _mm256_andnot_pd(sign_mask, t);
    abs_acc = _mm256_add_pd(abs_acc, a);
    __m256d e = exp_pd(_mm256_mul_pd(neg2, a));
    prod = _mm256_mul_pd(prod, _mm256_add_pd(one, e));
    // each factor lies in [1, 2]: flushing every 256 iterations keeps the
    // per-lane product below 2^256
    if (++pending == 256) flush();
  }
  if (pending != 0) flush();

  double s = hsum(abs_acc) + log_acc;
  for (; i < n; ++i) {
    const double a = std::fabs(lambda * x[i]);
    s += a + std::log1p(std::exp(-2.0 * a));
  }
  return s - static_cast<double>(n) * std::numbers::ln2;
}

}  // namespace esym::kernels::avx2

#endif  // ESYM_WITH_AVX2
