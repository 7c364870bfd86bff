#include "esym/etests.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "esym/kernels.hpp"
#include "esym/numerics.hpp"

namespace esym {

namespace {

// log(1 + e^x) without overflow for large |x|
double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

// sign e-value in log domain with the closed endpoints evaluated as limits
// (0 log 0 := 0), used by the mixture/grid paths
double sign_log_e_closed(double p, std::size_t k, std::size_t n) {
  const double kk = static_cast<double>(k);
  const double nk = static_cast<double>(n - k);
  const double lp = k == 0 ? 0.0 : kk * std::log(p);
  const double lq = k == n ? 0.0 : nk * std::log1p(-p);
  return lp + lq + static_cast<double>(n) * std::numbers::ln2;
}

void require_finite_param(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

ParamGrid ParamGrid::single(double point) {
  ParamGrid g;
  g.points = {point};
  g.weights = {1.0};
  return g;
}

ParamGrid ParamGrid::uniform_trapezoid(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("ParamGrid: count must be >= 1");
  if (count == 1) {
    if (lo != hi) {
      throw std::invalid_argument("ParamGrid: a single point needs lo == hi");
    }
    return single(lo);
  }
  if (!(lo < hi)) throw std::invalid_argument("ParamGrid: needs lo < hi");
  ParamGrid g;
  g.points.resize(static_cast<std::size_t>(count));
  g.weights.assign(static_cast<std::size_t>(count), 1.0);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) {
    g.points[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
  }
  g.points.back() = hi;
  g.weights.front() = 0.5;
  g.weights.back() = 0.5;
  const double total = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  for (double& w : g.weights) w /= total;
  return g;
}

void ParamGrid::validate() const {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("ParamGrid: points/weights must be nonempty and equal-length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw std::invalid_argument("ParamGrid: nonfinite point");
    if (i > 0 && !(points[i - 1] < points[i])) {
      throw std::invalid_argument("ParamGrid: points must be strictly ascending");
    }
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("ParamGrid: negative weight");
    total += weights[i];
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("ParamGrid: weights must sum to 1");
  }
}

const char* family_name(EtestFamily family) {
  switch (family) {
    case EtestFamily::fisher:
      return "fisher";
    case EtestFamily::delapena:
      return "delapena";
    case EtestFamily::sign_p:
      return "sign";
    case EtestFamily::sign_lambda:
      return "sign-lambda";
    case EtestFamily::wilcoxon:
      return "wilcoxon";
  }
  return "?";
}

double fisher_log_normalizer(double lambda, std::span<const double> values) {
  require_finite_param(lambda, "fisher: lambda");
  return kernels::log_cosh_sum(lambda, values);
}

double fisher_log_normalizer(double lambda, const Sample& s) {
  return fisher_log_normalizer(lambda, s.values());
}

double fisher_log_e(double lambda, std::span<const double> values) {
  return lambda * kernels::sum(values) - fisher_log_normalizer(lambda, values);
}

EValue fisher_e(double lambda, const Sample& s) {
  return EValue::from_log(fisher_log_e(lambda, s.values()));
}

double delapena_log_e(double lambda, std::span<const double> values) {
  require_finite_param(lambda, "delapena: lambda");
  double sum = 0.0, sumsq = 0.0;
  kernels::sum_and_sumsq(values, &sum, &sumsq);
  return lambda * sum - 0.5 * lambda * lambda * sumsq;
}

EValue delapena_e(double lambda, const Sample& s) {
  return EValue::from_log(delapena_log_e(lambda, s.values()));
}

double fisher_mix_log_e(std::span<const double> values) {
  double sum = 0.0, sumsq = 0.0;
  kernels::sum_and_sumsq(values, &sum, &sumsq);
  return -0.5 * std::log1p(sumsq) + sum * sum / (2.0 + 2.0 * sumsq);
}

EValue fisher_mix_e(const Sample& s) {
  return EValue::from_log(fisher_mix_log_e(s.values()));
}

std::size_t sign_count(std::span<const double> values) {
  return kernels::count_positive(values);
}

std::size_t sign_count(const Sample& s) { return sign_count(s.values()); }

double sign_log_e_p(double p, std::size_t k, std::size_t n) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("sign_e_p: p must lie strictly inside (0, 1)");
  }
  return sign_log_e_closed(p, k, n);
}

EValue sign_e_p(double p, const Sample& s) {
  return EValue::from_log(sign_log_e_p(p, sign_count(s), s.size()));
}

double sign_log_e_lambda(double lambda, std::size_t k, std::size_t n) {
  require_finite_param(lambda, "sign_e_lambda: lambda");
  return lambda * static_cast<double>(k) +
         static_cast<double>(n) * (std::numbers::ln2 - softplus(lambda));
}

EValue sign_e_lambda(double lambda, const Sample& s) {
  return EValue::from_log(sign_log_e_lambda(lambda, sign_count(s), s.size()));
}

EValue sign_mix_two_sided(const Sample& s) {
  const std::size_t n = s.size();
  const std::size_t k = sign_count(s);
  const double log_e = static_cast<double>(n) * std::numbers::ln2 +
                       log_beta(static_cast<double>(k) + 1.0,
                                static_cast<double>(n - k) + 1.0);
  return EValue::from_log(log_e);
}

EValue sign_mix_one_sided(const Sample& s) {
  const std::size_t n = s.size();
  const std::size_t k = sign_count(s);
  const double a = static_cast<double>(k) + 1.0;
  const double b = static_cast<double>(n - k) + 1.0;
  // B(a,b) - B(0.5; a,b) = B(a,b) * I_{0.5}(b,a); staying regularized keeps
  // the difference representable for large n
  const double tail = regularized_incomplete_beta(0.5, b, a);
  const double log_e = static_cast<double>(n + 1) * std::numbers::ln2 +
                       log_beta(a, b) + std::log(tail);
  return EValue::from_log(log_e);
}

SignedRankStats signed_rank_stats(const Sample& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(s[a]) < std::fabs(s[b]);
  });
  for (std::size_t j = 1; j < n; ++j) {
    if (std::fabs(s[order[j - 1]]) == std::fabs(s[order[j]])) {
      throw std::invalid_argument(
          "signed_rank_stats: tied magnitudes at indices " +
          std::to_string(order[j - 1]) + " and " + std::to_string(order[j]) +
          " (ranks are undefined under ties)");
    }
  }
  SignedRankStats stats;
  for (std::size_t j = 0; j < n; ++j) {
    if (s[order[j]] > 0.0) {
      const int rank = static_cast<int>(j + 1);
      stats.ranks_of_positive.push_back(rank);
      stats.v += static_cast<std::uint64_t>(rank);
      ++stats.k;
    }
  }
  return stats;
}

double wilcoxon_log_normalizer(double lambda, std::size_t n) {
  require_finite_param(lambda, "wilcoxon: lambda");
  if (n < 1) throw std::invalid_argument("wilcoxon_log_normalizer: n must be >= 1");
  double c = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    c += softplus(lambda * static_cast<double>(i));
  }
  return c - static_cast<double>(n) * std::numbers::ln2;
}

double wilcoxon_log_e(double lambda, std::uint64_t v, std::size_t n) {
  return lambda * static_cast<double>(v) - wilcoxon_log_normalizer(lambda, n);
}

EValue wilcoxon_e(double lambda, const Sample& s) {
  const SignedRankStats stats = signed_rank_stats(s);
  return EValue::from_log(wilcoxon_log_e(lambda, stats.v, s.size()));
}

EValue grid_average_e(EtestFamily family, const ParamGrid& grid, const Sample& s) {
  grid.validate();
  const std::size_t n = s.size();

  std::function<double(double)> log_e_at;
  switch (family) {
    case EtestFamily::fisher:
      log_e_at = [&](double lam) { return fisher_log_e(lam, s.values()); };
      break;
    case EtestFamily::delapena:
      log_e_at = [&](double lam) { return delapena_log_e(lam, s.values()); };
      break;
    case EtestFamily::sign_p: {
      const std::size_t k = sign_count(s);
      log_e_at = [k, n](double p) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw std::invalid_argument("grid_average_e: sign p outside [0, 1]");
        }
        return sign_log_e_closed(p, k, n);
      };
      break;
    }
    case EtestFamily::sign_lambda: {
      const std::size_t k = sign_count(s);
      log_e_at = [k, n](double lam) { return sign_log_e_lambda(lam, k, n); };
      break;
    }
    case EtestFamily::wilcoxon: {
      const std::uint64_t v = signed_rank_stats(s).v;
      log_e_at = [v, n](double lam) { return wilcoxon_log_e(lam, v, n); };
      break;
    }
  }

  std::vector<double> terms;
  terms.reserve(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (grid.weights[i] == 0.0) continue;  // avoid log(0) + inf on skipped mass
    terms.push_back(std::log(grid.weights[i]) + log_e_at(grid.points[i]));
  }
  if (terms.empty()) return EValue::from_value(0.0);
  return EValue::from_log(log_sum_exp(terms));
}

}  // namespace esym
