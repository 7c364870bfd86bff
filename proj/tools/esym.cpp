// esym: e-value tests of symmetry from the command line.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "esym/datasets.hpp"
#include "esym/efficiency.hpp"
#include "esym/etests.hpp"
#include "esym/ingest.hpp"
#include "esym/merging.hpp"
#include "esym/numerics.hpp"
#include "esym/parametric.hpp"
#include "esym/pvalues.hpp"
#include "esym/sample.hpp"
#include "esym/symmetry_kernel.hpp"
#include "esym/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace esym;

constexpr double kJeffreysSqrt10 = 3.1622776601683795;
constexpr double kJeffreys10 = 10.0;

constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

std::string fmt_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  std::string name;  // optional leading "p:" / "lambda:" label
};

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  GridSpec spec;
  std::size_t first = 0;
  if (parts.size() == 4) {
    spec.name = parts[0];
    first = 1;
  } else if (parts.size() != 3) {
    throw std::invalid_argument("grid must look like [name:]lo:hi:count");
  }
  try {
    spec.lo = std::stod(parts[first]);
    spec.hi = std::stod(parts[first + 1]);
    spec.count = std::stoi(parts[first + 2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like [name:]lo:hi:count");
  }
  if (spec.count < 1) throw std::invalid_argument("grid needs count >= 1");
  return spec;
}

Normalization parse_normalize(const std::string& text) {
  if (text == "none") return Normalization::none;
  if (text == "std_sample") return Normalization::std_sample;
  if (text == "std_population") return Normalization::std_population;
  throw std::invalid_argument("unknown normalization '" + text + "'");
}

Side parse_side(const std::string& text) {
  if (text == "one") return Side::one_sided;
  if (text == "two") return Side::two_sided;
  throw std::invalid_argument("side must be 'one' or 'two'");
}

std::vector<double> parse_theta_seq(const std::string& text) {
  std::vector<double> seq;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      seq.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw std::invalid_argument("theta-seq must be comma-separated reals");
    }
  }
  if (seq.empty()) throw std::invalid_argument("theta-seq is empty");
  return seq;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + output_path);
  out << text;
}

std::string scalar_csv(const ordered_json& doc) {
  std::string header, row;
  bool first = true;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_structured()) continue;
    if (!first) {
      header += ',';
      row += ',';
    }
    first = false;
    header += key;
    if (value.is_string()) {
      row += value.get<std::string>();
    } else if (value.is_boolean()) {
      row += value.get<bool>() ? "true" : "false";
    } else if (value.is_number_float()) {
      row += fmt_double(value.get<double>());
    } else if (value.is_null()) {
      row += "nan";
    } else {
      row += value.dump();
    }
  }
  return header + "\n" + row + "\n";
}

void emit_report(const ordered_json& doc, const std::string& format,
                 const std::string& output_path) {
  if (format == "json") {
    emit(doc.dump(2) + "\n", output_path);
  } else if (format == "csv") {
    emit(scalar_csv(doc), output_path);
  } else {
    throw std::invalid_argument("format must be 'json' or 'csv'");
  }
}

void add_jeffreys(ordered_json& doc, double e_value) {
  doc["jeffreys_sqrt10"] = e_value >= kJeffreysSqrt10;
  doc["jeffreys_10"] = e_value >= kJeffreys10;
}

// --- per-family evaluation helpers ---

EValue pointwise_evalue(const std::string& test, double param, const Sample& s) {
  if (test == "fisher") return fisher_e(param, s);
  if (test == "delapena") return delapena_e(param, s);
  if (test == "sign") return sign_e_p(param, s);
  if (test == "sign-lambda") return sign_e_lambda(param, s);
  if (test == "wilcoxon") return wilcoxon_e(param, s);
  if (test == "gauss-lr") return gauss_lr_e(param, s);
  throw std::invalid_argument("unknown test '" + test + "'");
}

EtestFamily grid_family(const std::string& test) {
  if (test == "fisher") return EtestFamily::fisher;
  if (test == "delapena") return EtestFamily::delapena;
  if (test == "sign") return EtestFamily::sign_p;
  if (test == "sign-lambda") return EtestFamily::sign_lambda;
  if (test == "wilcoxon") return EtestFamily::wilcoxon;
  throw std::invalid_argument("test '" + test + "' has no parameter grid");
}

const char* param_name(const std::string& test) {
  if (test == "sign") return "p";
  if (test == "gauss-lr") return "theta";
  return "lambda";
}

TestFamily are_family(const std::string& test) {
  if (test == "fisher") return TestFamily::fisher;
  if (test == "sign") return TestFamily::sign;
  if (test == "wilcoxon") return TestFamily::wilcoxon;
  if (test == "gauss-lr" || test == "gauss_lr") return TestFamily::gauss_lr;
  throw std::invalid_argument("unknown ARE family '" + test + "'");
}

SampleFn verify_function(const std::string& test, double param, const Sample& s) {
  const std::size_t n = s.size();
  if (test == "fisher") {
    return [param](std::span<const double> z) {
      return std::exp(fisher_log_e(param, z));
    };
  }
  if (test == "delapena") {
    return [param](std::span<const double> z) {
      return std::exp(delapena_log_e(param, z));
    };
  }
  if (test == "sign") {
    return [param, n](std::span<const double> z) {
      return std::exp(sign_log_e_p(param, sign_count(z), n));
    };
  }
  if (test == "sign-lambda") {
    return [param, n](std::span<const double> z) {
      return std::exp(sign_log_e_lambda(param, sign_count(z), n));
    };
  }
  if (test == "wilcoxon") {
    signed_rank_stats(s);  // rejects tied magnitudes up front
    // magnitude ranks are invariant under sign flips; fix them once
    std::vector<double> rank_of(n, 0.0);
    {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(s[a]) < std::fabs(s[b]);
      });
      for (std::size_t j = 0; j < n; ++j) rank_of[order[j]] = static_cast<double>(j + 1);
    }
    const double c = wilcoxon_log_normalizer(param, n);
    return [rank_of, param, c](std::span<const double> z) {
      double v = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] > 0.0) v += rank_of[i];
      }
      return std::exp(param * v - c);
    };
  }
  throw std::invalid_argument("verify does not support test '" + test + "'");
}

struct CommonOptions {
  std::string format = "json";
  std::string output;
};

ordered_json base_report(const std::string& command) {
  ordered_json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  return doc;
}

void attach_sample_stats(ordered_json& doc, const Sample& s) {
  doc["n"] = s.size();
  doc["k"] = sign_count(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"e-value tests of symmetry"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input;
  std::string test;
  std::string normalize_text = "std_population";
  std::string side_text = "two";
  std::string grid_text;
  bool exact_mix = false;
  double lambda_opt = std::numeric_limits<double>::quiet_NaN();
  double p_opt = std::numeric_limits<double>::quiet_NaN();
  double theta_opt = std::numeric_limits<double>::quiet_NaN();
  double tol = 1e-9;
  int threads = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double beta = 2.0;
  std::string theta_seq_text = "0.4,0.3,0.2,0.15,0.1";
  std::size_t reps = 10000;
  std::size_t n_cap = 200000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "json or csv");
    sub->add_option("--output", common.output, "write the report to a file");
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", input, "data file or builtin dataset id (darwin-maize)")
        ->required();
  };

  CLI::App* evalue = app.add_subcommand("evalue", "single e-value of a test family");
  evalue->add_option("--test", test, "fisher|delapena|sign|sign-lambda|wilcoxon|gauss-lr")
      ->required();
  evalue->add_option("--lambda", lambda_opt, "test parameter lambda");
  evalue->add_option("--p", p_opt, "sign-test success probability");
  evalue->add_option("--theta", theta_opt, "Gaussian alternative mean");
  evalue->add_option("--normalize", normalize_text, "none|std_sample|std_population");
  add_common(evalue);
  add_input(evalue);

  CLI::App* curve = app.add_subcommand("curve", "e-value curve over a parameter grid");
  curve->add_option("--test", test, "fisher|delapena|sign|sign-lambda|wilcoxon")->required();
  curve->add_option("--grid", grid_text, "[name:]lo:hi:count")->required();
  curve->add_option("--normalize", normalize_text, "none|std_sample|std_population");
  add_common(curve);
  add_input(curve);

  CLI::App* mix = app.add_subcommand("mix", "parameter-free mixture e-value");
  mix->add_option("--test", test, "fisher|delapena|sign|sign-lambda|wilcoxon|gauss")
      ->required();
  mix->add_option("--grid", grid_text, "[name:]lo:hi:count grid average");
  mix->add_flag("--exact", exact_mix, "closed-form mixture instead of a grid");
  mix->add_option("--side", side_text, "one|two (sign exact mixture)");
  mix->add_option("--normalize", normalize_text, "none|std_sample|std_population");
  add_common(mix);
  add_input(mix);

  CLI::App* verify = app.add_subcommand("verify", "admissibility oracle (exact sign-flip mean)");
  verify->add_option("--test", test, "fisher|delapena|sign|sign-lambda|wilcoxon")->required();
  verify->add_option("--lambda", lambda_opt, "test parameter lambda");
  verify->add_option("--p", p_opt, "sign-test success probability");
  verify->add_option("--tol", tol, "admissibility tolerance");
  verify->add_option("--threads", threads, "worker threads");
  std::string verify_normalize = "none";
  verify->add_option("--normalize", verify_normalize, "none|std_sample|std_population");
  add_common(verify);
  add_input(verify);

  CLI::App* pvalue = app.add_subcommand("pvalue", "classical p-value counterparts");
  pvalue->add_option("--test", test, "fisher|sign")->required();
  pvalue->add_option("--side", side_text, "one|two")->required();
  pvalue->add_option("--threads", threads, "worker threads");
  add_common(pvalue);
  add_input(pvalue);

  CLI::App* are = app.add_subcommand("are", "Monte Carlo relative efficiency vs the Gaussian baseline");
  are->add_option("--test", test, "fisher|sign|wilcoxon|gauss-lr")->required();
  are->add_option("--beta", beta, "target e-power (nats)");
  are->add_option("--theta-seq", theta_seq_text, "decreasing alternatives");
  are->add_option("--reps", reps, "Monte Carlo replications");
  are->add_option("--n-cap", n_cap, "search ceiling for n");
  are->add_option("--seed", seed, "master seed")->envname("ESYM_SEED");
  are->add_option("--stream", stream, "stream id");
  are->add_option("--threads", threads, "worker threads");
  add_common(are);

  CLI::App* ineq = app.add_subcommand("inequality-curve",
                                      "log cosh x vs x^2/2 on a grid");
  std::string ineq_grid = "-3:3:601";
  ineq->add_option("--grid", ineq_grid, "lo:hi:count");
  add_common(ineq);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (app.got_subcommand(evalue)) {
      const Sample raw = ingest(input);
      const Sample s = normalized(raw, parse_normalize(normalize_text));
      double param;
      if (test == "sign") {
        if (std::isnan(p_opt)) throw std::invalid_argument("sign needs --p");
        param = p_opt;
      } else if (test == "gauss-lr") {
        if (std::isnan(theta_opt)) throw std::invalid_argument("gauss-lr needs --theta");
        param = theta_opt;
      } else {
        if (std::isnan(lambda_opt)) throw std::invalid_argument(test + " needs --lambda");
        param = lambda_opt;
      }
      const EValue e = pointwise_evalue(test, param, s);
      ordered_json doc = base_report("evalue");
      doc["test"] = test;
      doc[param_name(test)] = param;
      doc["normalize"] = normalize_text;
      doc["input"] = input;
      attach_sample_stats(doc, s);
      if (test == "wilcoxon") doc["v"] = signed_rank_stats(s).v;
      doc["log_e"] = e.log();
      doc["e_value"] = e.value();
      add_jeffreys(doc, e.value());
      emit_report(doc, common.format, common.output);
    } else if (app.got_subcommand(curve)) {
      const Sample raw = ingest(input);
      const Sample s = normalized(raw, parse_normalize(normalize_text));
      const GridSpec gs = parse_grid(grid_text);
      const ParamGrid grid = ParamGrid::uniform_trapezoid(gs.lo, gs.hi, gs.count);
      const EtestFamily family = grid_family(test);
      ordered_json points = ordered_json::array();
      for (double x : grid.points) {
        const EValue e = grid_average_e(family, ParamGrid::single(x), s);
        points.push_back(ordered_json::array({x, e.value()}));
      }
      if (common.format == "csv") {
        std::string text = "parameter,e_value\n";
        for (const auto& pair : points) {
          text += fmt_double(pair[0].get<double>()) + "," +
                  fmt_double(pair[1].get<double>()) + "\n";
        }
        emit(text, common.output);
      } else {
        ordered_json doc = base_report("curve");
        doc["test"] = test;
        doc["normalize"] = normalize_text;
        doc["input"] = input;
        doc["n"] = s.size();
        doc["grid"] = {{"lo", gs.lo}, {"hi", gs.hi}, {"count", gs.count}};
        doc["points"] = points;
        emit(doc.dump(2) + "\n", common.output);
      }
    } else if (app.got_subcommand(mix)) {
      const Sample raw = ingest(input);
      const Sample s = normalized(raw, parse_normalize(normalize_text));
      if (exact_mix == !grid_text.empty()) {
        throw std::invalid_argument("mix needs exactly one of --grid or --exact");
      }
      ordered_json doc = base_report("mix");
      doc["test"] = test;
      EValue e = EValue::one();
      if (exact_mix) {
        doc["mode"] = "exact";
        if (test == "fisher") {
          e = fisher_mix_e(s);
        } else if (test == "gauss") {
          e = gauss_mix_e(s);
        } else if (test == "sign") {
          const Side side = parse_side(side_text);
          doc["side"] = side_text;
          e = side == Side::one_sided ? sign_mix_one_sided(s) : sign_mix_two_sided(s);
        } else {
          throw std::invalid_argument("no closed-form mixture for test '" + test + "'");
        }
      } else {
        doc["mode"] = "grid";
        doc["grid"] = grid_text;
        const GridSpec gs = parse_grid(grid_text);
        const ParamGrid grid = ParamGrid::uniform_trapezoid(gs.lo, gs.hi, gs.count);
        e = grid_average_e(grid_family(test), grid, s);
      }
      doc["normalize"] = normalize_text;
      doc["input"] = input;
      attach_sample_stats(doc, s);
      doc["log_e"] = e.log();
      doc["e_value"] = e.value();
      add_jeffreys(doc, e.value());
      emit_report(doc, common.format, common.output);
    } else if (app.got_subcommand(verify)) {
      const Sample raw = ingest(input);
      const Sample s = normalized(raw, parse_normalize(verify_normalize));
      double param;
      if (test == "sign") {
        if (std::isnan(p_opt)) throw std::invalid_argument("sign needs --p");
        param = p_opt;
      } else {
        if (std::isnan(lambda_opt)) throw std::invalid_argument(test + " needs --lambda");
        param = lambda_opt;
      }
      const SampleFn f = verify_function(test, param, s);
      const EVariableReport report = verify_e_variable(f, summarize(s), tol, threads);
      ordered_json doc = base_report("verify");
      doc["test"] = test;
      doc[test == "sign" ? "p" : "lambda"] = param;
      doc["input"] = input;
      doc["n"] = s.size();
      doc["tol"] = tol;
      doc["mean"] = report.mean;
      doc["is_e_variable"] = report.is_e_variable;
      doc["is_admissible"] = report.is_admissible;
      emit_report(doc, common.format, common.output);
      if (!report.is_e_variable) return kExitNumericalError;
    } else if (app.got_subcommand(pvalue)) {
      const Sample s = ingest(input);
      const Side side = parse_side(side_text);
      PValue p;
      if (test == "fisher") {
        p = fisher_permutation_pvalue(s, side, threads);
      } else if (test == "sign") {
        p = sign_test_pvalue(s, side);
      } else {
        throw std::invalid_argument("pvalue supports 'fisher' and 'sign'");
      }
      ordered_json doc = base_report("pvalue");
      doc["test"] = test;
      doc["side"] = side_text;
      doc["input"] = input;
      attach_sample_stats(doc, s);
      doc["p_value"] = p.value;
      emit_report(doc, common.format, common.output);
    } else if (app.got_subcommand(are)) {
      AreConfig cfg;
      cfg.theta_sequence = parse_theta_seq(theta_seq_text);
      cfg.beta = EPowerTarget{beta};
      cfg.replications = reps;
      cfg.seed = RngSeed{seed, stream};
      cfg.n_cap = n_cap;
      cfg.n_threads = threads;
      const TestFamily family = are_family(test);
      const AreResult result = are_estimate(family, cfg);
      if (common.format == "csv") {
        std::string text = "theta,n_test,n_baseline,ratio\n";
        for (const AreRecord& rec : result.records) {
          text += fmt_double(rec.theta) + "," + std::to_string(rec.n_test) + "," +
                  std::to_string(rec.n_baseline) + "," + fmt_double(rec.ratio) + "\n";
        }
        text += "# extrapolated_are=" + fmt_double(result.extrapolated_are) +
                " se=" + fmt_double(result.se) + "\n";
        emit(text, common.output);
      } else {
        ordered_json doc = base_report("are");
        doc["test"] = test;
        doc["beta"] = beta;
        doc["replications"] = reps;
        doc["theta_seq"] = cfg.theta_sequence;
        doc["seed"] = seed;
        doc["stream"] = stream;
        doc["n_cap"] = n_cap;
        ordered_json records = ordered_json::array();
        for (const AreRecord& rec : result.records) {
          ordered_json r;
          r["theta"] = rec.theta;
          r["n_test"] = rec.n_test;
          r["n_baseline"] = rec.n_baseline;
          r["ratio"] = rec.ratio;
          records.push_back(r);
        }
        doc["records"] = records;
        doc["extrapolated_are"] = result.extrapolated_are;
        doc["se"] = result.se;
        emit(doc.dump(2) + "\n", common.output);
      }
    } else if (app.got_subcommand(ineq)) {
      const GridSpec gs = parse_grid(ineq_grid);
      const ParamGrid grid = ParamGrid::uniform_trapezoid(gs.lo, gs.hi, gs.count);
      if (common.format == "csv") {
        std::string text = "x,log_cosh,x2_over_2\n";
        for (double x : grid.points) {
          text += fmt_double(x) + "," + fmt_double(log_cosh_mean(x)) + "," +
                  fmt_double(0.5 * x * x) + "\n";
        }
        emit(text, common.output);
      } else {
        ordered_json doc = base_report("inequality-curve");
        doc["grid"] = {{"lo", gs.lo}, {"hi", gs.hi}, {"count", gs.count}};
        ordered_json points = ordered_json::array();
        for (double x : grid.points) {
          points.push_back(ordered_json::array({x, log_cosh_mean(x), 0.5 * x * x}));
        }
        doc["points"] = points;
        emit(doc.dump(2) + "\n", common.output);
      }
    }
  } catch (const IngestError& e) {
    std::cerr << "esym: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "esym: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "esym: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return 0;
}
