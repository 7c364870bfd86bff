#include "esym/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "esym/etests.hpp"
#include "esym/kernels.hpp"
#include "esym/parallel.hpp"

namespace esym {

namespace {

constexpr std::uint64_t kRepChunk = 64;
// bootstrap streams live far above the replication streams
constexpr std::uint64_t kBootstrapStreamOffset = 1ull << 32;

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

std::uint64_t signed_rank_v(std::span<const double> z, std::vector<std::uint32_t>& order) {
  const std::size_t n = z.size();
  order.resize(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::fabs(z[a]) < std::fabs(z[b]);
  });
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (z[order[j]] > 0.0) v += static_cast<std::uint64_t>(j + 1);
  }
  return v;
}

}  // namespace

const char* family_name(TestFamily family) {
  switch (family) {
    case TestFamily::fisher:
      return "fisher";
    case TestFamily::sign:
      return "sign";
    case TestFamily::wilcoxon:
      return "wilcoxon";
    case TestFamily::gauss_lr:
      return "gauss_lr";
  }
  return "?";
}

void AreConfig::validate() const {
  if (theta_sequence.empty()) {
    throw std::invalid_argument("AreConfig: theta sequence must be nonempty");
  }
  for (std::size_t i = 0; i < theta_sequence.size(); ++i) {
    if (!(theta_sequence[i] > 0.0)) {
      throw std::invalid_argument("AreConfig: thetas must be positive");
    }
    if (i > 0 && !(theta_sequence[i] < theta_sequence[i - 1])) {
      throw std::invalid_argument("AreConfig: thetas must be strictly decreasing");
    }
  }
  if (replications < 1000) {
    throw std::invalid_argument("AreConfig: needs at least 1000 replications");
  }
  if (!(beta.beta > 0.0)) {
    throw std::invalid_argument("AreConfig: beta must be positive");
  }
}

double tuned_parameter(TestFamily family, double theta, std::size_t n) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("tuned_parameter: theta must be positive");
  }
  switch (family) {
    case TestFamily::fisher:
      return theta;
    case TestFamily::sign:
      // exact P(N(theta,1) > 0); agrees with 1/2 + theta/sqrt(2 pi) to
      // first order
      return std_normal_cdf(theta);
    case TestFamily::wilcoxon: {
      const double denom = std::max<double>(static_cast<double>(n - 1), 1.0);
      return 6.0 * theta / (denom * std::sqrt(std::numbers::pi));
    }
    case TestFamily::gauss_lr:
      return theta;
  }
  throw std::invalid_argument("tuned_parameter: unknown family");
}

double asymptotic_epower(TestFamily family, double theta, std::size_t n) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("asymptotic_epower: theta must be finite");
  }
  const double nn = static_cast<double>(n);
  switch (family) {
    case TestFamily::fisher:
    case TestFamily::gauss_lr:
      return 0.5 * nn * theta * theta;
    case TestFamily::sign:
      return nn * theta * theta / std::numbers::pi;
    case TestFamily::wilcoxon:
      return 1.5 * nn * theta * theta / std::numbers::pi;
  }
  throw std::invalid_argument("asymptotic_epower: unknown family");
}

std::vector<double> epower_samples(TestFamily family, double theta, std::size_t n,
                                   std::size_t reps, RngSeed seed, int n_threads) {
  if (n < 1) throw std::invalid_argument("epower_samples: n must be >= 1");
  if (reps < 1) throw std::invalid_argument("epower_samples: reps must be >= 1");

  const double param = tuned_parameter(family, theta, n);
  const double nn = static_cast<double>(n);

  double log_p = 0.0, log_q = 0.0, n_log2 = 0.0, norm_c = 0.0;
  switch (family) {
    case TestFamily::sign:
      log_p = std::log(param);
      log_q = std::log1p(-param);
      n_log2 = nn * std::numbers::ln2;
      break;
    case TestFamily::wilcoxon:
      norm_c = wilcoxon_log_normalizer(param, n);
      break;
    case TestFamily::gauss_lr:
      norm_c = 0.5 * nn * theta * theta;
      break;
    case TestFamily::fisher:
      break;
  }

  std::vector<double> out(reps, 0.0);
  const CounterRng base(seed);
  const auto& ops = kernels::active();

  parallel_chunks(reps, kRepChunk, n_threads,
                  [&](std::size_t, std::uint64_t begin, std::uint64_t end) {
                    std::vector<double> z(n);
                    std::vector<std::uint32_t> order;
                    for (std::uint64_t r = begin; r < end; ++r) {
                      base.derive(r).fill_normal(z, theta);
                      double log_e = 0.0;
                      switch (family) {
                        case TestFamily::gauss_lr:
                          log_e = theta * ops.sum(z.data(), n) - norm_c;
                          break;
                        case TestFamily::fisher:
                          log_e = param * ops.sum(z.data(), n) -
                                  ops.log_cosh_sum(param, z.data(), n);
                          break;
                        case TestFamily::sign: {
                          const double k =
                              static_cast<double>(ops.count_positive(z.data(), n));
                          log_e = k * log_p + (nn - k) * log_q + n_log2;
                          break;
                        }
                        case TestFamily::wilcoxon: {
                          const std::uint64_t v = signed_rank_v(z, order);
                          log_e = param * static_cast<double>(v) - norm_c;
                          break;
                        }
                      }
                      out[r] = log_e;
                    }
                  });
  return out;
}

EPowerEstimate epower_curve(TestFamily family, double theta, std::size_t n,
                            std::size_t reps, RngSeed seed, int n_threads) {
  const std::vector<double> samples =
      epower_samples(family, theta, n, reps, seed, n_threads);
  return e_power_estimate(samples);
}

std::size_t min_n_for_epower(TestFamily family, double theta, EPowerTarget beta,
                             const AreConfig& cfg) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("min_n_for_epower: theta must be positive");
  }
  if (!(beta.beta > 0.0)) {
    throw std::invalid_argument("min_n_for_epower: beta must be positive");
  }

  std::map<std::size_t, double> cache;
  auto estimate = [&](std::size_t n) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const double mean =
        epower_curve(family, theta, n, cfg.replications, cfg.seed, cfg.n_threads).mean;
    cache.emplace(n, mean);
    return mean;
  };
  auto passes = [&](std::size_t n) { return estimate(n) >= beta.beta; };

  const double per_obs = asymptotic_epower(family, theta, 1);
  std::size_t guess = static_cast<std::size_t>(std::ceil(beta.beta / per_obs));
  guess = std::clamp<std::size_t>(guess, 1, cfg.n_cap);

  std::size_t lo = 0, hi = 0;  // lo fails, hi passes
  if (passes(guess)) {
    hi = guess;
    while (hi > 1) {
      const std::size_t cand = hi / 2;
      if (passes(cand)) {
        hi = cand;
      } else {
        lo = cand;
        break;
      }
    }
    if (hi == 1) return 1;
  } else {
    lo = guess;
    std::size_t next = guess * 2;
    for (;;) {
      if (next >= cfg.n_cap) {
        if (!passes(cfg.n_cap)) {
          throw std::runtime_error(
              "min_n_for_epower: e-power stays below beta up to n_cap = " +
              std::to_string(cfg.n_cap));
        }
        hi = cfg.n_cap;
        break;
      }
      if (passes(next)) {
        hi = next;
        break;
      }
      lo = next;
      next *= 2;
    }
  }

  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (passes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

AreResult are_estimate(TestFamily family, const AreConfig& cfg) {
  cfg.validate();
  AreResult result;
  result.records.reserve(cfg.theta_sequence.size());
  for (double theta : cfg.theta_sequence) {
    AreRecord rec;
    rec.theta = theta;
    rec.n_test = min_n_for_epower(family, theta, cfg.beta, cfg);
    rec.n_baseline = baseline_n(cfg.beta, theta);
    rec.ratio = static_cast<double>(rec.n_baseline) / static_cast<double>(rec.n_test);
    result.records.push_back(rec);
  }

  const AreRecord& last = result.records.back();
  result.extrapolated_are = last.ratio;

  // bootstrap over replication draws at the accepted minimal n; the mean
  // maps to n by first-order linearity of the e-power in n
  const std::vector<double> samples = epower_samples(
      family, cfg.theta_sequence.back(), last.n_test, cfg.replications, cfg.seed,
      cfg.n_threads);
  const std::size_t reps = samples.size();
  constexpr int kBootstrap = 200;
  std::vector<double> ratios;
  ratios.reserve(kBootstrap);
  const CounterRng base(cfg.seed);
  for (int b = 0; b < kBootstrap; ++b) {
    const CounterRng rng =
        base.derive(kBootstrapStreamOffset + static_cast<std::uint64_t>(b));
    double sum = 0.0;
    for (std::size_t j = 0; j < reps; ++j) {
      const std::size_t idx = std::min<std::size_t>(
          reps - 1, static_cast<std::size_t>(rng.uniform(j) * static_cast<double>(reps)));
      sum += samples[idx];
    }
    const double mean_b = sum / static_cast<double>(reps);
    if (!(mean_b > 0.0)) continue;
    const double n_b = static_cast<double>(last.n_test) * cfg.beta.beta / mean_b;
    ratios.push_back(static_cast<double>(last.n_baseline) / n_b);
  }
  if (ratios.size() > 1) {
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double ss = 0.0;
    for (double r : ratios) ss += (r - mean) * (r - mean);
    result.se = std::sqrt(ss / static_cast<double>(ratios.size() - 1));
  }
  return result;
}

WilcoxonTStat wilcoxon_t(const Sample& s) {
  const std::size_t n = s.size();
  if (n < 2) {
    throw std::invalid_argument("wilcoxon_t: needs n >= 2");
  }
  const SignedRankStats stats = signed_rank_stats(s);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return WilcoxonTStat{static_cast<double>(stats.v) / pairs};
}

}  // namespace esym
