#pragma once

#include <span>

#include "esym/evalue.hpp"
#include "esym/sample.hpp"

namespace esym {

struct GaussAlternative {
  double theta = 0.0;  // mean of N(theta, 1)
};

struct EPowerTarget {
  double beta = 0.0;  // nats, > 0
};

/// Likelihood ratio of N(theta,1) to N(0,1): log E = theta sum z - n theta^2 / 2.
double gauss_lr_log_e(double theta, std::span<const double> values);
EValue gauss_lr_e(double theta, const Sample& s);

/// Optimal e-power of the likelihood ratio under its own alternative:
/// n theta^2 / 2 nats.
double gauss_optimal_epower(double theta, std::size_t n);

/// N(0,1)-mixture over theta: log E = -log(n+1)/2 + (sum z)^2 / (2n+2).
double gauss_mix_log_e(std::span<const double> values);
EValue gauss_mix_e(const Sample& s);

/// KL(N(theta,1) || N(0,1)) = theta^2 / 2.
double kl_gauss(double theta);

/// Minimal observation count for the likelihood-ratio baseline to reach
/// e-power beta at alternative theta: ceil(2 beta / theta^2).
std::size_t baseline_n(EPowerTarget beta, double theta);

}  // namespace esym
