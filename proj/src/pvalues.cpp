#include "esym/pvalues.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "esym/etests.hpp"
#include "esym/kernels.hpp"
#include "esym/numerics.hpp"
#include "esym/parallel.hpp"
#include "esym/symmetry_kernel.hpp"

namespace esym {

namespace {

constexpr std::uint64_t kEnumChunk = 1ull << 14;

double doubled(double one_sided) { return std::min(1.0, 2.0 * one_sided); }

}  // namespace

PValue fisher_permutation_pvalue(const Sample& s, Side side, int n_threads) {
  const std::size_t n = s.size();
  if (n > static_cast<std::size_t>(kEnumerationCap)) {
    throw std::invalid_argument(
        "fisher_permutation_pvalue: n exceeds the enumeration cap");
  }
  const double observed = kernels::sum(s.values());
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(s[i]);

  const std::uint64_t total = 1ull << n;
  const std::size_t n_chunks =
      static_cast<std::size_t>((total + kEnumChunk - 1) / kEnumChunk);
  std::vector<std::uint64_t> counts(n_chunks, 0);

  parallel_chunks(total, kEnumChunk, n_threads,
                  [&](std::size_t ci, std::uint64_t begin, std::uint64_t end) {
                    // Gray-code walk over sign assignments; a set bit means
                    // the observation enters with a negative sign
                    double sum = 0.0;
                    const std::uint64_t g0 = begin ^ (begin >> 1);
                    for (std::size_t i = 0; i < n; ++i) {
                      sum += ((g0 >> i) & 1) ? -mags[i] : mags[i];
                    }
                    std::uint64_t gray = g0;
                    std::uint64_t count = 0;
                    for (std::uint64_t idx = begin; idx < end; ++idx) {
                      if (idx != begin) {
                        const int bit = std::countr_zero(idx);
                        const std::uint64_t mask = 1ull << bit;
                        gray ^= mask;
                        sum += (gray & mask) ? -2.0 * mags[static_cast<std::size_t>(bit)]
                                             : 2.0 * mags[static_cast<std::size_t>(bit)];
                      }
                      count += sum >= observed;
                    }
                    counts[ci] = count;
                  });

  std::uint64_t hits = 0;
  for (std::uint64_t c : counts) hits += c;
  const double one_sided =
      static_cast<double>(hits) / static_cast<double>(total);
  return PValue{side == Side::one_sided ? one_sided : doubled(one_sided), side};
}

PValue sign_test_pvalue(const Sample& s, Side side) {
  const std::size_t n = s.size();
  const std::size_t k = sign_count(s);

  double one_sided;
  if (k == 0) {
    one_sided = 1.0;
  } else if (n <= 60) {
    // exact tail count; C(60,30)*60 and the partial sums stay below 2^63
    std::uint64_t coeff = 1;  // C(n, n), then stepped down to C(n, j)
    std::uint64_t tail = 0;
    for (std::size_t j = n; j >= k; --j) {
      tail += coeff;
      coeff = coeff * j / (n - j + 1);  // C(n, j) -> C(n, j-1), exact
    }
    one_sided = std::ldexp(static_cast<double>(tail), -static_cast<int>(n));
  } else {
    // P(Bin(n, 1/2) >= k) = I_{1/2}(k, n - k + 1)
    one_sided = regularized_incomplete_beta(
        0.5, static_cast<double>(k), static_cast<double>(n - k) + 1.0);
  }
  return PValue{side == Side::one_sided ? one_sided : doubled(one_sided), side};
}

}  // namespace esym
