#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esym/evalue.hpp"

namespace esym {

/// A vector of e-values the caller declares independent. Independence is a
/// hypothesis of the merging guarantees, not something values can prove.
struct EVector {
  std::vector<EValue> entries;
  bool declared_independent = false;
};

struct MergeTerm {
  std::vector<std::size_t> subset;  // 0-based indices into the EVector
  double weight = 0.0;
};

/// A convex mixture of subset products.
struct MergeSpec {
  std::vector<MergeTerm> terms;
  void validate(std::size_t k) const;
};

/// Product over the subset; the empty subset gives 1. Computed in log
/// domain, +inf absorbing.
EValue product_merge(const EVector& v, std::span<const std::size_t> subset);

EValue mixture_merge(const EVector& v, const MergeSpec& spec);

/// Mean of all order-sized subset products (a U-statistic).
EValue u_statistic_merge(const EVector& v, std::size_t order);

/// 1 - lambda + lambda E for lambda in (0, 1]; maps E = 1 to exactly 1.
EValue lift(double lambda, EValue e);

struct EPowerEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error of observed e-powers (log E values drawn
/// under an alternative).
EPowerEstimate e_power_estimate(std::span<const double> log_values);

}  // namespace esym
