#pragma once

#include <cstdint>
#include <vector>

#include "esym/merging.hpp"
#include "esym/parametric.hpp"
#include "esym/rng.hpp"
#include "esym/sample.hpp"

namespace esym {

enum class TestFamily { fisher, sign, wilcoxon, gauss_lr };

const char* family_name(TestFamily family);

struct AreConfig {
  std::vector<double> theta_sequence = {0.4, 0.3, 0.2, 0.15, 0.1};
  EPowerTarget beta{2.0};
  std::size_t replications = 10000;
  RngSeed seed{};
  std::size_t n_cap = 200000;
  int n_threads = 1;

  void validate() const;
};

struct AreRecord {
  double theta = 0.0;
  std::size_t n_test = 0;      // minimal n for the family under test
  std::size_t n_baseline = 0;  // exact ceil(2 beta / theta^2)
  double ratio = 0.0;          // n_baseline / n_test
};

struct AreResult {
  std::vector<AreRecord> records;
  double extrapolated_are = 0.0;  // ratio at the smallest theta
  double se = 0.0;                // bootstrap standard error of that ratio
};

/// Theory-optimal parameter for testing against N(theta,1):
/// fisher -> lambda = theta; sign -> p = Phi(theta);
/// wilcoxon -> lambda = 3 n theta / (binom(n,2) sqrt(pi)); gauss_lr -> theta.
double tuned_parameter(TestFamily family, double theta, std::size_t n);

/// Closed-form leading term of the e-power: n theta^2/2 (fisher, gauss_lr),
/// n theta^2/pi (sign), 3 n theta^2/(2 pi) (wilcoxon).
double asymptotic_epower(TestFamily family, double theta, std::size_t n);

/// Per-replication observed e-powers of the tuned test on samples of size n
/// from N(theta,1). Replication r uses stream seed.stream + r, so estimates
/// share draws across n and across families (common random numbers).
std::vector<double> epower_samples(TestFamily family, double theta, std::size_t n,
                                   std::size_t reps, RngSeed seed, int n_threads = 1);

EPowerEstimate epower_curve(TestFamily family, double theta, std::size_t n,
                            std::size_t reps, RngSeed seed, int n_threads = 1);

/// Smallest n <= cfg.n_cap whose estimated e-power reaches beta: seeded at
/// the asymptotic prediction, bracketed by doubling/halving, then bisected
/// with common random numbers across n.
std::size_t min_n_for_epower(TestFamily family, double theta, EPowerTarget beta,
                             const AreConfig& cfg);

/// Pitman-type relative efficiency vs the Gaussian likelihood-ratio
/// baseline along cfg.theta_sequence.
AreResult are_estimate(TestFamily family, const AreConfig& cfg);

struct WilcoxonTStat {
  double t = 0.0;  // V / binom(n, 2); can exceed 1 for small n
};

WilcoxonTStat wilcoxon_t(const Sample& s);

}  // namespace esym
