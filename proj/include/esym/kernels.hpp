#pragma once

#include <cstddef>
#include <span>
#include <string>

// Batch arithmetic kernels used by the simulation and e-test hot paths.
// Scalar reference implementations always exist; AVX2 (x86-64) and NEON
// (aarch64) variants are selected at runtime and equivalence-tested
// against the scalar ones.

namespace esym::kernels {

enum class Backend { scalar, avx2, neon };

struct Ops {
  double (*sum)(const double* x, std::size_t n);
  void (*sum_and_sumsq)(const double* x, std::size_t n, double* sum, double* sumsq);
  std::size_t (*count_positive)(const double* x, std::size_t n);
  // sum_i log((e^{lambda x_i} + e^{-lambda x_i}) / 2)
  double (*log_cosh_sum)(double lambda, const double* x, std::size_t n);
};

// Table for an explicit backend; throws std::invalid_argument if the
// backend is not available on this build/CPU.
const Ops& table(Backend b);
bool backend_available(Backend b);

// Runtime-selected table. Honors ESYM_KERNELS={scalar,avx2,neon} on first
// use; otherwise picks the widest available vector unit.
const Ops& active();
Backend active_backend();
void force_backend(Backend b);  // mainly for tests

const char* backend_name(Backend b);

inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}
inline void sum_and_sumsq(std::span<const double> x, double* s, double* ss) {
  active().sum_and_sumsq(x.data(), x.size(), s, ss);
}
inline std::size_t count_positive(std::span<const double> x) {
  return active().count_positive(x.data(), x.size());
}
inline double log_cosh_sum(double lambda, std::span<const double> x) {
  return active().log_cosh_sum(lambda, x.data(), x.size());
}

namespace scalar {
double sum(const double* x, std::size_t n);
void sum_and_sumsq(const double* x, std::size_t n, double* sum, double* sumsq);
std::size_t count_positive(const double* x, std::size_t n);
double log_cosh_sum(double lambda, const double* x, std::size_t n);
}  // namespace scalar

#if defined(ESYM_WITH_AVX2)
namespace avx2 {
double sum(const double* x, std::size_t n);
void sum_and_sumsq(const double* x, std::size_t n, double* sum, double* sumsq);
std::size_t count_positive(const double* x, std::size_t n);
double log_cosh_sum(double lambda, const double* x, std::size_t n);
// Vector exp building block, exposed for accuracy tests. Flushes to 0
// below -708.4 (skipping denormals) and clamps the argument at 709.
void exp4(const double in[4], double out[4]);
}  // namespace avx2
#endif

#if defined(ESYM_WITH_NEON)
namespace neon {
double sum(const double* x, std::size_t n);
void sum_and_sumsq(const double* x, std::size_t n, double* sum, double* sumsq);
std::size_t count_positive(const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace esym::kernels
