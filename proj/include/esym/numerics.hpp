#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace esym {

struct QuadratureSpec {
  double lower = 0.0;
  double upper = 1.0;
  double rel_tol = 1e-9;
  int max_subdivisions = 10000;
};

/// Thrown when adaptive quadrature runs out of subdivisions; carries the
/// best estimate accumulated so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double best_estimate)
      : std::runtime_error(msg), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

/// log sum_i exp(x_i), overflow-safe. Inputs may be -inf (ignored mass)
/// or +inf (dominates). Throws on an empty list.
double log_sum_exp(std::span<const double> xs);

/// log((e^x + e^-x) / 2) = log cosh x, even in x, >= 0, no overflow.
double log_cosh_mean(double x);

/// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Non-regularized incomplete beta B(x; a, b) = int_0^x t^{a-1}(1-t)^{b-1} dt.
double incomplete_beta(double x, double a, double b);

/// Regularized incomplete beta I_x(a, b) = B(x; a, b) / B(a, b).
double regularized_incomplete_beta(double x, double a, double b);

/// int exp(-A x^2 + B x) dx over the real line = sqrt(pi/A) exp(B^2/(4A)).
double gaussian_integral(double a, double b);

/// Adaptive Simpson quadrature of f over [spec.lower, spec.upper].
/// Throws QuadratureError when max_subdivisions is exhausted.
double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec);

}  // namespace esym
