// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. argv[1] must point at the esym CLI binary (used by the determinism
// criterion).

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "esym/datasets.hpp"
#include "esym/efficiency.hpp"
#include "esym/etests.hpp"
#include "esym/kernels.hpp"
#include "esym/merging.hpp"
#include "esym/numerics.hpp"
#include "esym/parametric.hpp"
#include "esym/pvalues.hpp"
#include "esym/rng.hpp"
#include "esym/sample.hpp"
#include "esym/symmetry_kernel.hpp"

using namespace esym;

namespace {

std::string g_cli_path;
int g_threads = 1;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

bool run_criterion(int id, const std::string& name, double time_limit_s,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0 && elapsed > time_limit_s) {
    check.require(false, "runtime " + std::to_string(elapsed) + " s exceeds " +
                             std::to_string(time_limit_s) + " s");
  }
  std::printf("%s  [%d] %s (%.2f s)%s%s\n", check.ok ? "PASS" : "FAIL", id,
              name.c_str(), elapsed, check.ok ? "" : " -- ",
              check.ok ? "" : check.detail.c_str());
  std::fflush(stdout);
  return check.ok;
}

Sample random_sample(std::size_t n, std::uint64_t stream, double scale = 1.0) {
  CounterRng rng(RngSeed{987654321, stream});
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = rng.normal(i);
    if (z == 0.0) z = 0.437;
    v[i] = scale * z;
  }
  return Sample(std::move(v));
}

std::string run_cli_capture(const std::string& args, int& exit_code) {
  static int counter = 0;
  const std::string path = "esym_acceptance_out_" + std::to_string(counter++) + ".txt";
  const std::string cmd = g_cli_path + " " + args + " > " + path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(path.c_str());
  return ss.str();
}

// ---- criteria ----

void criterion_darwin_fisher(Check& check) {
  const Sample darwin = normalized(Sample(darwin_maize()), Normalization::std_population);
  const double e_half = fisher_e(0.5, darwin).value();
  check.require(std::fabs(e_half - 7.651) <= 0.01,
                "fisher(0.5) = " + std::to_string(e_half) + ", want 7.651 +- 0.01");

  const EValue one_sided =
      grid_average_e(EtestFamily::fisher, ParamGrid::uniform_trapezoid(0.0, 1.0, 1001), darwin);
  check.require(std::fabs(one_sided.value() - 5.149) <= 0.02 * 5.149,
                "one-sided average = " + std::to_string(one_sided.value()) +
                    ", want 5.149 +- 2%");

  const EValue two_sided =
      grid_average_e(EtestFamily::fisher, ParamGrid::uniform_trapezoid(-1.0, 1.0, 1001), darwin);
  check.require(std::fabs(two_sided.value() - 2.633) <= 0.02 * 2.633,
                "two-sided average = " + std::to_string(two_sided.value()) +
                    ", want 2.633 +- 2%");
}

void criterion_darwin_sign(Check& check) {
  const Sample darwin(darwin_maize());

  const double grid_two =
      grid_average_e(EtestFamily::sign_p, ParamGrid::uniform_trapezoid(0.0, 1.0, 1001), darwin)
          .value();
  check.require(grid_two >= 19.25 && grid_two <= 19.55,
                "p-grid average over [0,1] = " + std::to_string(grid_two));

  const double grid_one =
      grid_average_e(EtestFamily::sign_p, ParamGrid::uniform_trapezoid(0.5, 1.0, 1001), darwin)
          .value();
  check.require(grid_one >= 38.4 && grid_one <= 39.0,
                "p-grid average over [0.5,1] = " + std::to_string(grid_one));

  // independent references: B(14,3) = 1/1680 and the polynomial expansion of
  // B(0.5; 14, 3)
  const double two_ref = 32768.0 / 1680.0;
  const double half_incomplete = 1.0 / 3440640.0 + 1.0 / 1048576.0;
  const double one_ref = 65536.0 * (1.0 / 1680.0 - half_incomplete);
  const double two_exact = sign_mix_two_sided(darwin).value();
  const double one_exact = sign_mix_one_sided(darwin).value();
  check.require(std::fabs(two_exact - two_ref) <= 1e-10 * two_ref,
                "two-sided exact mixture = " + std::to_string(two_exact));
  check.require(std::fabs(one_exact - one_ref) <= 1e-10 * one_ref,
                "one-sided exact mixture = " + std::to_string(one_exact));
}

void criterion_darwin_pvalues(Check& check) {
  const Sample darwin(darwin_maize());
  const double fisher_one = fisher_permutation_pvalue(darwin, Side::one_sided, g_threads).value;
  const double fisher_two = fisher_permutation_pvalue(darwin, Side::two_sided, g_threads).value;
  check.require(fisher_one == 863.0 / 32768.0, "fisher one-sided != 863/32768");
  check.require(fisher_two == 2.0 * fisher_one, "fisher two-sided != 2x one-sided");

  const double sign_one = sign_test_pvalue(darwin, Side::one_sided).value;
  const double sign_two = sign_test_pvalue(darwin, Side::two_sided).value;
  check.require(sign_one == 121.0 / 32768.0, "sign one-sided != 121/32768");
  check.require(sign_two == 242.0 / 32768.0, "sign two-sided != 242/32768");

  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", 100.0 * fisher_one);
  check.require(std::string(buf) == "2.634", std::string("rounded ") + buf + " != 2.634");
  std::snprintf(buf, sizeof(buf), "%.3f", 100.0 * fisher_two);
  check.require(std::string(buf) == "5.267", std::string("rounded ") + buf + " != 5.267");
  std::snprintf(buf, sizeof(buf), "%.5f", sign_one);
  check.require(std::string(buf) == "0.00369", std::string("rounded ") + buf + " != 0.00369");
  std::snprintf(buf, sizeof(buf), "%.5f", sign_two);
  check.require(std::string(buf) == "0.00739", std::string("rounded ") + buf + " != 0.00739");
}

void criterion_admissibility(Check& check) {
  const double lambdas[] = {0.1, -0.1, 1.0, -1.0, 5.0};
  for (int trial = 0; trial < 100 && check.ok; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 12);
    const Sample s = random_sample(n, 1000 + static_cast<std::uint64_t>(trial));
    const Summary m = summarize(s);

    std::vector<double> rank_of(n, 0.0);
    {
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return m[a] < m[b];
      });
      for (std::size_t j = 0; j < n; ++j) rank_of[order[j]] = static_cast<double>(j + 1);
    }

    for (double lambda : lambdas) {
      const double fisher_mean = kernel_expectation(
          [lambda](std::span<const double> z) { return std::exp(fisher_log_e(lambda, z)); },
          m, g_threads);
      check.require(std::fabs(fisher_mean - 1.0) <= 1e-9,
                    "fisher mean off at lambda " + std::to_string(lambda));

      const double sign_mean = kernel_expectation(
          [lambda, n](std::span<const double> z) {
            return std::exp(sign_log_e_lambda(lambda, kernels::count_positive(z), n));
          },
          m, g_threads);
      check.require(std::fabs(sign_mean - 1.0) <= 1e-9,
                    "sign mean off at lambda " + std::to_string(lambda));

      const double c = wilcoxon_log_normalizer(lambda, n);
      const double wilcoxon_mean = kernel_expectation(
          [lambda, c, &rank_of](std::span<const double> z) {
            double v = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
              if (z[i] > 0.0) v += rank_of[i];
            }
            return std::exp(lambda * v - c);
          },
          m, g_threads);
      check.require(std::fabs(wilcoxon_mean - 1.0) <= 1e-9,
                    "wilcoxon mean off at lambda " + std::to_string(lambda));

      if (lambda != 0.0) {
        const double delapena_mean = kernel_expectation(
            [lambda](std::span<const double> z) {
              return std::exp(delapena_log_e(lambda, z));
            },
            m, g_threads);
        check.require(delapena_mean < 1.0, "delapena mean not below 1");
      }
    }
  }

  // pointwise dominance on random (lambda, z) pairs; 1e-9 log-domain slack
  // absorbs rounding of the mathematically nonpositive per-term differences
  CounterRng rng(RngSeed{24601, 0});
  for (std::uint64_t pair = 0; pair < 100000 && check.ok; ++pair) {
    const double lambda = 20.0 * (rng.uniform(2 * pair) - 0.5);
    std::vector<double> z(6);
    CounterRng zrng = rng.derive(1 + pair);
    zrng.fill_normal(z, 0.3);
    const double lo = delapena_log_e(lambda, z);
    const double hi = fisher_log_e(lambda, z);
    check.require(lo <= hi + 1e-9, "dominance violated at pair " + std::to_string(pair));
  }
}

void criterion_closed_forms(Check& check) {
  for (int trial = 0; trial < 100 && check.ok; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 11);
    const Sample s = random_sample(n, 5000 + static_cast<std::uint64_t>(trial));
    const auto z = s.values();

    QuadratureSpec lam_spec{-20.0, 20.0, 1e-11, 50000};
    const double fisher_numeric = integrate(
        [&](double lambda) {
          return std::exp(delapena_log_e(lambda, z) - 0.5 * lambda * lambda) /
                 std::sqrt(2.0 * std::numbers::pi);
        },
        lam_spec);
    const double fisher_closed = fisher_mix_e(s).value();
    check.require(std::fabs(fisher_closed - fisher_numeric) <= 1e-8 * fisher_numeric,
                  "fisher_mix mismatch at trial " + std::to_string(trial));

    QuadratureSpec th_spec{-25.0, 25.0, 1e-11, 50000};
    const double gauss_numeric = integrate(
        [&](double theta) {
          return std::exp(gauss_lr_log_e(theta, z) - 0.5 * theta * theta) /
                 std::sqrt(2.0 * std::numbers::pi);
        },
        th_spec);
    const double gauss_closed = gauss_mix_e(s).value();
    check.require(std::fabs(gauss_closed - gauss_numeric) <= 1e-8 * gauss_numeric,
                  "gauss_mix mismatch at trial " + std::to_string(trial));
  }

  // normalizer recursion vs explicit 2^n subset enumeration
  for (std::size_t n = 1; n <= 14 && check.ok; ++n) {
    for (double lambda : {-1.0, -0.6, -0.2, 0.2, 0.6, 1.0}) {
      std::vector<double> exponents;
      exponents.reserve(1u << n);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if ((mask >> i) & 1) sum += static_cast<double>(i + 1);
        }
        exponents.push_back(lambda * sum);
      }
      const double brute =
          log_sum_exp(exponents) - static_cast<double>(n) * std::numbers::ln2;
      const double closed = wilcoxon_log_normalizer(lambda, n);
      check.require(std::fabs(closed - brute) <= 1e-10 * std::max(1.0, std::fabs(brute)),
                    "wilcoxon normalizer mismatch at n " + std::to_string(n));
    }
  }
}

void criterion_epower_calibration(Check& check) {
  const RngSeed seed{20240101, 0};
  const EPowerEstimate gauss =
      epower_curve(TestFamily::gauss_lr, 0.1, 200, 10000, seed, g_threads);
  check.require(std::fabs(gauss.mean - 1.0) <= 4.0 * gauss.se,
                "gauss_lr e-power " + std::to_string(gauss.mean) + " se " +
                    std::to_string(gauss.se));

  for (TestFamily family : {TestFamily::fisher, TestFamily::sign, TestFamily::wilcoxon}) {
    for (double theta : {0.1, 0.2, 0.3}) {
      const std::size_t n = static_cast<std::size_t>(std::ceil(4.0 / (theta * theta)));
      const EPowerEstimate est = epower_curve(family, theta, n, 10000, seed, g_threads);
      const double target = asymptotic_epower(family, theta, n);
      const double tol = std::max(4.0 * est.se, 0.10 * target);
      check.require(std::fabs(est.mean - target) <= tol,
                    std::string(family_name(family)) + " theta " + std::to_string(theta) +
                        ": e-power " + std::to_string(est.mean) + " vs " +
                        std::to_string(target));
    }
  }
}

void criterion_are(Check& check) {
  AreConfig cfg;
  cfg.seed = RngSeed{20240101, 0};
  cfg.n_threads = g_threads;

  const std::pair<TestFamily, double> targets[] = {
      {TestFamily::fisher, 1.0},
      {TestFamily::sign, 2.0 / std::numbers::pi},
      {TestFamily::wilcoxon, 3.0 / std::numbers::pi},
  };
  for (const auto& [family, target] : targets) {
    const AreResult result = are_estimate(family, cfg);
    const double ratio = result.extrapolated_are;
    check.require(std::fabs(ratio - target) <= 0.05,
                  std::string(family_name(family)) + " ARE " + std::to_string(ratio) +
                      ", want " + std::to_string(target) + " +- 0.05");
  }
}

void criterion_merging(Check& check) {
  // F_empty is exactly 1, lift fixes E = 1 exactly
  EVector probe;
  probe.entries = {EValue::from_value(2.0), EValue::from_value(0.5)};
  probe.declared_independent = true;
  const EValue empty = product_merge(probe, std::vector<std::size_t>{});
  check.require(empty.value() == 1.0 && empty.log() == 0.0, "F_empty != 1");
  for (double lambda : {0.05, 0.3, 0.5, 0.99, 1.0}) {
    check.require(lift(lambda, EValue::from_value(1.0)).value() == 1.0,
                  "lift(lambda, 1) != 1");
  }

  // two independent e-variables with positive e-power under the alternative
  const double theta = 0.4;
  const std::size_t n = 40, reps = 10000;
  const CounterRng base(RngSeed{321, 0});
  std::vector<double> log_e1(reps), log_e2(reps);
  std::vector<double> z(n);
  for (std::size_t r = 0; r < reps; ++r) {
    base.derive(2 * r).fill_normal(z, theta);
    log_e1[r] = gauss_lr_log_e(theta, z);
    base.derive(2 * r + 1).fill_normal(z, theta);
    log_e2[r] = gauss_lr_log_e(theta, z);
  }

  MergeSpec mixture;
  mixture.terms = {{{0}, 0.3}, {{1}, 0.3}, {{0, 1}, 0.4}};

  std::vector<std::vector<double>> merged(5, std::vector<double>(reps));
  for (std::size_t r = 0; r < reps; ++r) {
    EVector v;
    v.entries = {EValue::from_log(log_e1[r]), EValue::from_log(log_e2[r])};
    v.declared_independent = true;
    merged[0][r] = product_merge(v, std::vector<std::size_t>{0}).log();
    merged[1][r] = product_merge(v, std::vector<std::size_t>{1}).log();
    merged[2][r] = product_merge(v, std::vector<std::size_t>{0, 1}).log();
    merged[3][r] = mixture_merge(v, mixture).log();
    merged[4][r] = u_statistic_merge(v, 1).log();
  }
  const char* labels[] = {"F_{1}", "F_{2}", "F_{1,2}", "mixture", "U1"};
  for (int i = 0; i < 5; ++i) {
    const EPowerEstimate est = e_power_estimate(merged[static_cast<std::size_t>(i)]);
    check.require(est.mean > 4.0 * est.se,
                  std::string(labels[i]) + " e-power not positive: " +
                      std::to_string(est.mean));
  }
}

void criterion_determinism(Check& check) {
  if (g_cli_path.empty()) {
    check.require(false, "no CLI path given on the command line");
    return;
  }
  const std::string are_args =
      "are --test sign --theta-seq 0.4,0.3 --reps 2000 --seed 7 --beta 1.5";
  std::string reference;
  for (int threads : {1, 2, 8}) {
    for (int repeat = 0; repeat < 2; ++repeat) {
      int code = 0;
      const std::string out =
          run_cli_capture(are_args + " --threads " + std::to_string(threads), code);
      check.require(code == 0, "are run failed");
      if (reference.empty()) {
        reference = out;
      } else {
        check.require(out == reference,
                      "are output differs at threads=" + std::to_string(threads));
      }
    }
  }

  int code = 0;
  const std::string ev1 = run_cli_capture("evalue --test fisher --lambda 0.5 darwin-maize", code);
  check.require(code == 0, "evalue run failed");
  const std::string ev2 = run_cli_capture("evalue --test fisher --lambda 0.5 darwin-maize", code);
  check.require(ev1 == ev2 && !ev1.empty(), "evalue output not reproducible");

  std::string mix_ref;
  for (int threads : {1, 2, 8}) {
    const std::string out = run_cli_capture(
        "pvalue --test fisher --side one --threads " + std::to_string(threads) +
            " darwin-maize",
        code);
    check.require(code == 0, "pvalue run failed");
    if (mix_ref.empty()) {
      mix_ref = out;
    } else {
      check.require(out == mix_ref,
                    "pvalue output differs at threads=" + std::to_string(threads));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  const unsigned hw = std::thread::hardware_concurrency();
  g_threads = hw == 0 ? 1 : static_cast<int>(std::min(8u, hw));

  bool all_ok = true;
  all_ok &= run_criterion(1, "Darwin Fisher e-values", 1.0, criterion_darwin_fisher);
  all_ok &= run_criterion(2, "Darwin sign e-values", 1.0, criterion_darwin_sign);
  all_ok &= run_criterion(3, "Darwin p-values", 1.0, criterion_darwin_pvalues);
  all_ok &= run_criterion(4, "Admissibility oracle", 30.0, criterion_admissibility);
  all_ok &= run_criterion(5, "Closed-form identities", 30.0, criterion_closed_forms);
  all_ok &= run_criterion(6, "E-power calibration", 120.0, criterion_epower_calibration);
  all_ok &= run_criterion(7, "ARE reproduction", 300.0, criterion_are);
  all_ok &= run_criterion(8, "Merging property suite", 30.0, criterion_merging);
  all_ok &= run_criterion(9, "CLI determinism across worker threads", 0.0,
                          criterion_determinism);

  std::printf("%s\n", all_ok ? "ACCEPTANCE: all criteria passed"
                             : "ACCEPTANCE: failures detected");
  return all_ok ? 0 : 1;
}
