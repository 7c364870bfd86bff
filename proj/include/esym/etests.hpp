#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "esym/evalue.hpp"
#include "esym/sample.hpp"

namespace esym {

/// Averaging measure over a test parameter (lambda or p): ascending points
/// with nonnegative weights summing to 1.
struct ParamGrid {
  std::vector<double> points;
  std::vector<double> weights;

  static ParamGrid single(double point);
  /// count equally spaced points on [lo, hi], uniform weights with halved
  /// endpoints (trapezoid rule normalized to a probability measure).
  static ParamGrid uniform_trapezoid(double lo, double hi, int count);

  void validate() const;
};

enum class EtestFamily { fisher, delapena, sign_p, sign_lambda, wilcoxon };

const char* family_name(EtestFamily family);

// --- Fisher-type e-test (exponential tilt of the sum) ---

/// C(lambda, |z|) = sum_i log((e^{lambda z_i} + e^{-lambda z_i}) / 2);
/// depends on the sample only through the magnitudes.
double fisher_log_normalizer(double lambda, std::span<const double> values);
double fisher_log_normalizer(double lambda, const Sample& s);

double fisher_log_e(double lambda, std::span<const double> values);
EValue fisher_e(double lambda, const Sample& s);

/// Quadratic-bound variant: log E' = sum_i (lambda z_i - lambda^2 z_i^2 / 2).
/// Valid but dominated by fisher_e pointwise, hence inadmissible.
double delapena_log_e(double lambda, std::span<const double> values);
EValue delapena_e(double lambda, const Sample& s);

/// N(0,1) mixture of the quadratic-bound variant, in closed form:
/// log E = -log(1 + sum z^2)/2 + (sum z)^2 / (2 + 2 sum z^2).
double fisher_mix_log_e(std::span<const double> values);
EValue fisher_mix_e(const Sample& s);

// --- Sign e-test ---

std::size_t sign_count(std::span<const double> values);
std::size_t sign_count(const Sample& s);

/// log E = k log p + (n-k) log(1-p) + n log 2. Interior p only; the closed
/// endpoints are handled by the mixture/grid paths as limits.
double sign_log_e_p(double p, std::size_t k, std::size_t n);
EValue sign_e_p(double p, const Sample& s);

/// Log-odds parameterization: identical to sign_e_p with p = e^l/(1+e^l).
double sign_log_e_lambda(double lambda, std::size_t k, std::size_t n);
EValue sign_e_lambda(double lambda, const Sample& s);

/// Uniform mixture over p in [0,1]: E = 2^n B(k+1, n-k+1).
EValue sign_mix_two_sided(const Sample& s);
/// Uniform mixture over p in [0.5,1]:
/// E = 2^{n+1} (B(k+1, n-k+1) - B(0.5; k+1, n-k+1)).
EValue sign_mix_one_sided(const Sample& s);

// --- Wilcoxon signed-rank e-test ---

struct SignedRankStats {
  std::size_t k = 0;                   // positive observations
  std::vector<int> ranks_of_positive;  // ascending-magnitude ranks, 1-based
  std::uint64_t v = 0;                 // sum of ranks of positive observations
};

/// Ranks magnitudes ascending (rank 1 = smallest). Tied magnitudes are an
/// error naming the offending indices.
SignedRankStats signed_rank_stats(const Sample& s);

/// C(lambda, n) = sum_{i=1}^n (log(1 + e^{lambda i}) - log 2), computed
/// with the softplus branch so large lambda*i cannot overflow.
double wilcoxon_log_normalizer(double lambda, std::size_t n);

double wilcoxon_log_e(double lambda, std::uint64_t v, std::size_t n);
EValue wilcoxon_e(double lambda, const Sample& s);

/// Convex mixture sum_i w_i E(param_i); itself an e-variable. For sign_p the
/// closed interval [0,1] is accepted, endpoints evaluated as limits.
EValue grid_average_e(EtestFamily family, const ParamGrid& grid, const Sample& s);

}  // namespace esym
