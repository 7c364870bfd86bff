#include "esym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace esym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lentz's continued fraction for the regularized incomplete beta, valid on
// x < (a+1)/(a+b+2); the caller applies the symmetry transform otherwise.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;  // all terms are exp(-inf) = 0
  if (m == kInf) return kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double log_cosh_mean(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("log_beta: arguments must be positive");
  }
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete_beta: a, b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incomplete_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_bt =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double bt = std::exp(log_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * beta_cf(a, b, x) / a;
  }
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double incomplete_beta(double x, double a, double b) {
  return regularized_incomplete_beta(x, a, b) * std::exp(log_beta(a, b));
}

double gaussian_integral(double a, double b) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("gaussian_integral: A must be positive");
  }
  return std::sqrt(std::numbers::pi / a) * std::exp(b * b / (4.0 * a));
}

double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  if (!(spec.lower < spec.upper)) {
    throw std::invalid_argument("integrate: lower bound must be below upper");
  }
  if (!(spec.rel_tol > 0.0)) {
    throw std::invalid_argument("integrate: rel_tol must be positive");
  }
  if (spec.max_subdivisions < 1) {
    throw std::invalid_argument("integrate: max_subdivisions must be positive");
  }

  struct Segment {
    double a, b, fa, fm, fb, simpson, eps;
  };
  auto simpson = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };

  const double a0 = spec.lower, b0 = spec.upper;
  const double fa0 = f(a0), fb0 = f(b0), fm0 = f(0.5 * (a0 + b0));
  const double s0 = simpson(a0, b0, fa0, fm0, fb0);
  const double eps0 = spec.rel_tol * std::max(std::fabs(s0), 1e-300);

  std::vector<Segment> stack;
  stack.push_back({a0, b0, fa0, fm0, fb0, s0, eps0});

  double acc = 0.0, comp = 0.0;  // Neumaier accumulation of accepted pieces
  auto accumulate = [&](double v) {
    const double t = acc + v;
    comp += (std::fabs(acc) >= std::fabs(v)) ? (acc - t) + v : (v - t) + acc;
    acc = t;
  };

  int budget = spec.max_subdivisions;
  while (!stack.empty()) {
    const Segment seg = stack.back();
    stack.pop_back();
    const double m = 0.5 * (seg.a + seg.b);
    const double fml = f(0.5 * (seg.a + m));
    const double fmr = f(0.5 * (m + seg.b));
    const double left = simpson(seg.a, m, seg.fa, fml, seg.fm);
    const double right = simpson(m, seg.b, seg.fm, fmr, seg.fb);
    const double delta = left + right - seg.simpson;
    if (std::fabs(delta) <= 15.0 * seg.eps || seg.b - seg.a <= 1e-14 * (b0 - a0)) {
      accumulate(left + right + delta / 15.0);
      continue;
    }
    if (--budget < 0) {
      double best = acc + comp + left + right;
      for (const Segment& s : stack) best += s.simpson;
      throw QuadratureError("integrate: max_subdivisions exhausted", best);
    }
    stack.push_back({m, seg.b, seg.fm, fmr, seg.fb, right, 0.5 * seg.eps});
    stack.push_back({seg.a, m, seg.fa, fml, seg.fm, left, 0.5 * seg.eps});
  }
  return acc + comp;
}

}  // namespace esym
