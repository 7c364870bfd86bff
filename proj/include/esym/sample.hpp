#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace esym {

/// Ordered real observations z_1..z_n. Every value must be finite and
/// nonzero (a zero has no sign under the symmetry null), n >= 1.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Magnitudes (|z_1|,...,|z_n|): the summary the symmetry null conditions on.
class Summary {
 public:
  explicit Summary(std::vector<double> magnitudes);

  std::span<const double> magnitudes() const { return magnitudes_; }
  std::size_t size() const { return magnitudes_.size(); }
  double operator[](std::size_t i) const { return magnitudes_[i]; }

 private:
  std::vector<double> magnitudes_;
};

/// Signs j_i in {-1, +1}, one per observation.
struct SignVector {
  std::vector<std::int8_t> signs;
};

Summary summarize(const Sample& s);

Sample apply_signs(const Summary& m, const SignVector& signs);

enum class Normalization { none, std_sample, std_population };

/// Divides the observations by a scale estimate: the mean-centered standard
/// deviation with denominator n-1 (std_sample) or n (std_population).
Sample normalized(const Sample& s, Normalization mode);

}  // namespace esym
