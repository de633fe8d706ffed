#pragma once

// Interval tolerance allocation: worst case, statistical (RSS) and inflated
// statistical. All three distribute a resultant full width R_Y over the
// components in proportion to their feasibility weights beta_i.

#include <string>
#include <vector>

#include "inertol/stack_model.hpp"

namespace inertol {

struct IntervalMethod {
  enum class Kind { WorstCase, Statistical, Inflated };

  Kind kind = Kind::WorstCase;
  double f = 1.0;  // inflation factor, only meaningful for Inflated

  static IntervalMethod worst_case() { return {Kind::WorstCase, 1.0}; }
  static IntervalMethod statistical() { return {Kind::Statistical, 1.0}; }
  static IntervalMethod inflated(double f) { return {Kind::Inflated, f}; }
};

std::string method_name(const IntervalMethod& method);

struct ComponentBudget {
  std::string name;
  double value = 0.0;
};

struct IntervalAllocation {
  IntervalMethod method;
  std::vector<ComponentBudget> per_component;  // full widths R_xi
  double resultant_width = 0.0;
  std::vector<std::string> warnings;
};

/// R_xi = beta_i * R_Y / sum(|alpha_j| beta_j)
IntervalAllocation worst_case(const AssemblyModel& model, double r_y);

/// R_xi = beta_i * R_Y / sqrt(sum(alpha_j^2 beta_j^2))
IntervalAllocation statistical(const AssemblyModel& model, double r_y);

/// Statistical allocation shrunk by f. Values of f outside [1, sqrt(n)] are
/// accepted and reported through `warnings`.
IntervalAllocation inflated(const AssemblyModel& model, double r_y, double f);

IntervalAllocation allocate_interval(const AssemblyModel& model, double r_y,
                                     const IntervalMethod& method);

/// Resultant width recomputed from an allocation under its own method.
double forward_width(const AssemblyModel& model, const IntervalAllocation& allocation);

namespace detail {

// Shared by the interval and inertial allocators.
double weighted_abs_sum(const AssemblyModel& model);
double weighted_rss(const AssemblyModel& model);
std::vector<ComponentBudget> distribute(const AssemblyModel& model, double scale);
std::vector<std::string> influence_warnings(const AssemblyModel& model);
void require_budget(double value, const char* what);

}  // namespace detail

}  // namespace inertol
