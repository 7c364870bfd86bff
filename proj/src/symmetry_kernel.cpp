#include "esym/symmetry_kernel.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "esym/parallel.hpp"

namespace esym {

namespace {

// Chunk of the 2^n enumeration; fixed size so results cannot depend on the
// worker count.
constexpr std::uint64_t kEnumChunk = 1ull << 14;

void check_cap(std::size_t n) {
  if (n > static_cast<std::size_t>(kEnumerationCap)) {
    throw std::invalid_argument(
        "kernel enumeration: n = " + std::to_string(n) + " exceeds the cap of " +
        std::to_string(kEnumerationCap) + "; use kernel_sample Monte Carlo instead");
  }
}

}  // namespace

double kernel_expectation(const SampleFn& f, const Summary& m, int n_threads) {
  const std::size_t n = m.size();
  check_cap(n);
  const std::uint64_t total = 1ull << n;
  const std::size_t n_chunks =
      static_cast<std::size_t>((total + kEnumChunk - 1) / kEnumChunk);
  std::vector<double> partial(n_chunks, 0.0);

  parallel_chunks(total, kEnumChunk, n_threads,
                  [&](std::size_t ci, std::uint64_t begin, std::uint64_t end) {
                    std::vector<double> z(m.magnitudes().begin(), m.magnitudes().end());
                    // Gray-code walk: g(idx) and g(idx-1) differ in bit ctz(idx),
                    // so each step flips exactly one sign.
                    const std::uint64_t g0 = begin ^ (begin >> 1);
                    for (std::size_t i = 0; i < n; ++i) {
                      if ((g0 >> i) & 1) z[i] = -z[i];
                    }
                    double sum = 0.0, comp = 0.0;
                    for (std::uint64_t idx = begin; idx < end; ++idx) {
                      if (idx != begin) {
                        const int bit = std::countr_zero(idx);
                        z[static_cast<std::size_t>(bit)] = -z[static_cast<std::size_t>(bit)];
                      }
                      const double v = f(z);
                      const double t = sum + v;
                      comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
                      sum = t;
                    }
                    partial[ci] = sum + comp;
                  });

  double sum = 0.0, comp = 0.0;
  for (double p : partial) {
    const double t = sum + p;
    comp += (std::fabs(sum) >= std::fabs(p)) ? (sum - t) + p : (p - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(total);
}

SignVector sample_signs(std::size_t n, const RngSeed& seed) {
  CounterRng rng(seed);
  SignVector out;
  out.signs.resize(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.bits(i / 64);
    out.signs[i] = ((word >> (i % 64)) & 1) ? 1 : -1;
  }
  return out;
}

Sample kernel_sample(const Summary& m, const RngSeed& seed) {
  return apply_signs(m, sample_signs(m.size(), seed));
}

EVariableReport verify_e_variable(const SampleFn& f, const Summary& m, double tol,
                                  int n_threads) {
  EVariableReport report;
  report.mean = kernel_expectation(f, m, n_threads);
  report.is_e_variable = report.mean <= 1.0 + tol;
  report.is_admissible = std::fabs(report.mean - 1.0) <= tol;
  return report;
}

}  // namespace esym
