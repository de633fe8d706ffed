#pragma once

// Numerical oracles for the analytic results: Monte Carlo simulation of the
// assembly chain and exhaustive grid search of the resultant Cpk over
// component offsets. Neither relies on the closed forms it checks.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "inertol/stack_model.hpp"

namespace inertol {

enum class Distribution { Normal, Uniform };

struct ComponentProcess {
  double sigma = 0.0;
  double delta = 0.0;
  Distribution distribution = Distribution::Normal;
};

struct SimulationPlan {
  AssemblyModel model;
  std::vector<ComponentProcess> processes;  // one per component
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
};

struct SimulationResult {
  BatchStats empirical;  // of Y against the resultant target
  double se_delta = 0.0;
  double se_sigma = 0.0;
  double se_inertia = 0.0;
  std::size_t sample_count = 0;
};

inline constexpr std::size_t kMinSimulationSamples = 100;

/// Seed of the random stream for one component. Depends only on the plan seed
/// and the component index.
std::uint64_t component_stream_seed(std::uint64_t seed, std::size_t index) noexcept;

SimulationResult monte_carlo_assembly(const SimulationPlan& plan);

struct Agreement {
  double z_delta = 0.0;  // |empirical - expected| / standard error
  double z_sigma = 0.0;
  bool passed = false;
};

/// Compares a simulation against analytic resultant statistics. A zero
/// standard error requires an exact match (to 1e-12 absolute).
Agreement compare_to(const SimulationResult& result, const BatchStats& expected,
                     double max_standard_errors = 4.0);

struct GridSearchResult {
  double min_cpk = 0.0;
  std::vector<double> argmin_offsets;
  std::vector<double> grid_step;  // spacing per component
  std::size_t grid_resolution = 0;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kMaxGridComponents = 4;
inline constexpr std::size_t kMinGridResolution = 11;
/// The grid stops this fraction short of each inertia limit.
inline constexpr double kGridEdgeMargin = 1e-6;

/// Minimum resultant Cpk of a uniform chain whose n components sit at their
/// inertia limit R_Y / (6 ICC sqrt(n)), searched over all offset vectors on
/// a resolution^n grid.
GridSearchResult grid_min_cpk(std::size_t n, double r_y, double icc, std::size_t resolution);

/// Same search for a general chain. Component i is held at the inertia limit
/// allocated for ICC, and its offset runs from 0 to that limit on the side
/// that pushes the resultant away from its target (sign of alpha_i).
GridSearchResult grid_min_cpk_general(const AssemblyModel& model, double r_y, double icc,
                                      std::size_t resolution);

/// |analytic - central difference| / max(1, |analytic|) for the Cpk slope.
double derivative_check(double r_y, double icc, std::size_t n, double delta, double step);

}  // namespace inertol
