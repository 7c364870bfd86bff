#pragma once

#include <functional>
#include <span>

#include "esym/rng.hpp"
#include "esym/sample.hpp"

namespace esym {

/// Largest n for exact 2^n enumeration (~1.7e7 evaluations).
inline constexpr int kEnumerationCap = 24;

using SampleFn = std::function<double(std::span<const double>)>;

/// Exact mean of f over all 2^n sign assignments applied to the magnitudes
/// (the uniform sign-flip kernel). Deterministic for any n_threads.
/// Throws when n exceeds the enumeration cap.
double kernel_expectation(const SampleFn& f, const Summary& m, int n_threads = 1);

/// One draw from the sign-flip kernel: each sign independently +-1 with
/// probability 1/2, reproducible given the seed.
Sample kernel_sample(const Summary& m, const RngSeed& seed);

SignVector sample_signs(std::size_t n, const RngSeed& seed);

struct EVariableReport {
  double mean = 0.0;
  bool is_e_variable = false;  // mean <= 1 + tol
  bool is_admissible = false;  // |mean - 1| <= tol
};

/// Admissibility oracle: computes the exact kernel mean of f and classifies
/// it. f must be nonnegative on the enumerated sign orbit.
EVariableReport verify_e_variable(const SampleFn& f, const Summary& m,
                                  double tol = 1e-9, int n_threads = 1);

}  // namespace esym
