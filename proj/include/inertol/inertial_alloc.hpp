#pragma once

// Inertial tolerance allocation: each component receives a maximum inertia
// I_xi chosen so that the resultant inertia stays within I_Y under one of four
// assumptions about how component offsets combine.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "inertol/classical_alloc.hpp"
#include "inertol/stack_model.hpp"

namespace inertol {

/// Every component inertia is pure offset, all offsets aligned.
struct WorstCaseOffsets {};
/// Offsets independent: the double product averages out.
struct RandomMeans {};
/// Every component shifted by delta = k * sigma on the same side.
struct SystematicShift {
  double k = 0.0;
};
/// m of the n components shifted by delta = k * sigma, the rest centered.
struct PartialShift {
  std::size_t m = 0;
  double k = 0.0;
};

using InertialHypothesis = std::variant<WorstCaseOffsets, RandomMeans, SystematicShift, PartialShift>;

std::string hypothesis_name(const InertialHypothesis& hypothesis);

struct InertiaAllocation {
  InertialHypothesis hypothesis;
  std::vector<ComponentBudget> per_component;  // maximum inertias I_xi
  double resultant_inertia = 0.0;
  std::vector<std::string> warnings;
};

/// I_xi = beta_i * I_Y / sum(|alpha_j| beta_j)
InertiaAllocation allocate_h1(const AssemblyModel& model, double i_y);

/// I_xi = beta_i * I_Y / sqrt(sum(alpha_j^2 beta_j^2))
InertiaAllocation allocate_h2(const AssemblyModel& model, double i_y);

/// Uniform chain of n components, all shifted by k sigma:
/// I_x = I_Y / sqrt(n (n k^2 + 1) / (1 + k^2)).
InertiaAllocation allocate_h3(std::size_t n, double k, double i_y);

/// Uniform chain with m of n components shifted by k sigma:
/// I_x = I_Y * sqrt((1 + k^2) / (n (1 + k^2) + m (m - 1) k^2)).
InertiaAllocation allocate_h4(std::size_t n, std::size_t m, double k, double i_y);

// Model-based forms of H3/H4. They require a uniform chain (|alpha_i| = 1,
// equal beta) and throw UnsupportedHypothesis otherwise. Budgets carry the
// model's component names.
InertiaAllocation allocate_h3(const AssemblyModel& model, double k, double i_y);
InertiaAllocation allocate_h4(const AssemblyModel& model, std::size_t m, double k, double i_y);

InertiaAllocation allocate_inertial(const AssemblyModel& model, double i_y,
                                    const InertialHypothesis& hypothesis);

/// Component statistics with every component at its allocated inertia limit,
/// arranged as the allocation's hypothesis assumes (offsets, when present,
/// aligned with sign(alpha_i); under H4 the first m components are shifted).
/// Composing them gives back the resultant inertia the allocation targets.
std::vector<BatchStats> limit_configuration(const AssemblyModel& model,
                                            const InertiaAllocation& allocation);

/// Resultant inertia equivalent to a centered Cp = 1 on an interval of full
/// width R_Y, i.e. R_Y / 6.
double inertia_budget_from_interval(double r_y);

}  // namespace inertol
