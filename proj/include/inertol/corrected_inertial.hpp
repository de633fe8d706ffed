#pragma once

// Corrected inertial tolerancing.
//
// Component inertias are sized from an interval requirement of full width R_Y
// through the ICC coefficient:
//
//   I_xi = beta_i * R_Y / (6 * ICC * sqrt(sum alpha_j^2 beta_j^2))
//
// With every component at its inertia limit and all offsets equal to delta,
// the resultant Cpk is
//
//   Cpk(delta) = (R_Y/2 - n|delta|) / (3 sqrt(R_Y^2 / (36 ICC^2) - n delta^2))
//
// which starts at ICC for delta = 0, falls to sqrt(ICC^2 - n/9) at
// delta* = R_Y / (18 ICC^2), then climbs again toward the inertia limit.
// When n >= 9 ICC^2 there is no interior minimum and the index is unbounded
// below.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "inertol/classical_alloc.hpp"
#include "inertol/stack_model.hpp"

namespace inertol {

/// Lower bound of the resultant Cpk. Either a finite value or unbounded below.
class CpkMinimum {
 public:
  static CpkMinimum of(double value) { return CpkMinimum(value); }
  static CpkMinimum unbounded_below() { return CpkMinimum(std::nullopt); }

  bool bounded() const noexcept { return value_.has_value(); }
  /// Throws InvalidInput when unbounded.
  double value() const;

  friend bool operator==(const CpkMinimum&, const CpkMinimum&) = default;

 private:
  explicit CpkMinimum(std::optional<double> v) : value_(v) {}
  std::optional<double> value_;
};

struct IccAllocation {
  double icc = 0.0;
  std::vector<ComponentBudget> per_component;  // maximum inertias I_xi
  double resultant_width = 0.0;
  CpkMinimum guaranteed_cpk_min = CpkMinimum::unbounded_below();
  std::vector<std::string> warnings;
};

IccAllocation icc_allocate(const AssemblyModel& model, double r_y, double icc);

/// Uniform component inertia limit R_Y / (6 ICC sqrt(n)).
double uniform_inertia_limit(double r_y, double icc, std::size_t n);

/// Resultant Cpk with all n components at their inertia limit and equal
/// offsets delta. Returns +/- infinity (or 0 when the numerator vanishes too)
/// at |delta| == I_x. Throws OutOfDomain beyond it.
double cpk_at_offset(double r_y, double icc, std::size_t n, double delta);

/// d Cpk / d delta on [0, I_x).
double cpk_derivative(double r_y, double icc, std::size_t n, double delta);

/// delta* = R_Y / (18 ICC^2)
double worst_offset(double r_y, double icc);

/// sqrt(ICC^2 - n/9) when n < 9 ICC^2, unbounded below otherwise.
CpkMinimum cpk_min(double icc, std::size_t n);

/// ICC needed to keep Cpk >= cpk_target for n components.
double icc_for_cpk(double cpk_target, std::size_t n);

struct ComponentCapacity {
  double budget = 0.0;     // 9 (ICC^2 - Cpk^2), or 0 when ICC < Cpk
  std::size_t count = 0;   // floor(budget)
  bool insufficient_icc = false;
};

ComponentCapacity max_components(double icc, double cpk_target);

/// Resultant Cpk for a general chain with component i at its allocated
/// inertia limit and offset offsets[i]:
///   (R_Y/2 - sum|alpha_i delta_i|) / (3 sqrt(R_Y^2/(36 ICC^2) - sum alpha_i^2 delta_i^2))
double cpk_general(const AssemblyModel& model, double r_y, double icc,
                   std::span<const double> offsets);

struct AbacusRow {
  std::size_t n = 0;
  double cpk_target = 0.0;
  double icc = 0.0;
};

struct AbacusTable {
  std::vector<AbacusRow> rows;
};

/// Rows are ordered by cpk_target (in the given order), then by n ascending.
AbacusTable build_abacus(std::size_t n_first, std::size_t n_last,
                         std::span<const double> cpk_targets);

struct CpkCurvePoint {
  double delta = 0.0;
  double cpk = 0.0;
};

struct CpkCurve {
  double r_y = 0.0;
  double icc = 0.0;
  std::size_t n = 0;
  std::vector<CpkCurvePoint> samples;
  double delta_star = 0.0;
  bool delta_star_in_domain = false;
  CpkMinimum cpk_min = CpkMinimum::unbounded_below();
  double inertia_limit = 0.0;
  double limit_value = 0.0;  // value of the curve at delta = I_x (may be infinite)
};

/// Sampling stops this fraction short of the inertia limit.
inline constexpr double kCurveEdgeMargin = 1e-9;

CpkCurve sample_cpk_curve(double r_y, double icc, std::size_t n, std::size_t num_points);

}  // namespace inertol
