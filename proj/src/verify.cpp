#include "inertol/verify.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "inertol/corrected_inertial.hpp"

namespace inertol {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void validate_plan(const SimulationPlan& plan) {
  if (plan.sample_count < kMinSimulationSamples) {
    throw Error(ErrorCategory::InvalidInput,
                "sample count must be >= " + std::to_string(kMinSimulationSamples));
  }
  if (plan.processes.size() != plan.model.size()) {
    throw Error(ErrorCategory::InvalidInput, "one process description per component is required");
  }
  for (const auto& p : plan.processes) {
    if (!std::isfinite(p.sigma) || p.sigma < 0.0 || !std::isfinite(p.delta)) {
      throw Error(ErrorCategory::InvalidInput,
                  "process parameters need a finite sigma >= 0 and a finite delta");
    }
  }
}

// Adds alpha * (draw - target) for every sample of one component.
void add_component(std::vector<double>& deviation, const ComponentProcess& process,
                   double alpha, std::uint64_t stream_seed) {
  if (process.sigma == 0.0) {
    for (double& y : deviation) y += alpha * process.delta;
    return;
  }
  std::mt19937_64 engine(stream_seed);
  if (process.distribution == Distribution::Normal) {
    std::normal_distribution<double> draw(process.delta, process.sigma);
    for (double& y : deviation) y += alpha * draw(engine);
  } else {
    const double half = process.sigma * std::sqrt(3.0);
    std::uniform_real_distribution<double> draw(process.delta - half, process.delta + half);
    for (double& y : deviation) y += alpha * draw(engine);
  }
}

struct GridAxis {
  std::vector<double> shift;     // alpha_i * delta_ij
  std::vector<double> variance;  // alpha_i^2 * sigma_ij^2
  std::vector<double> offset;    // delta_ij
  double step = 0.0;
};

GridAxis make_axis(double alpha, double limit, std::size_t resolution) {
  GridAxis axis;
  const double last = limit * (1.0 - kGridEdgeMargin);
  axis.step = last / static_cast<double>(resolution - 1);
  const double sign = alpha < 0.0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < resolution; ++j) {
    const double d = j + 1 == resolution ? last : axis.step * static_cast<double>(j);
    const double sigma = std::sqrt(limit * limit - d * d);
    axis.offset.push_back(sign * d);
    axis.shift.push_back(alpha * sign * d);
    axis.variance.push_back(alpha * alpha * sigma * sigma);
  }
  return axis;
}

GridSearchResult search(const std::vector<GridAxis>& axes, double r_y, std::size_t resolution) {
  const std::size_t n = axes.size();
  std::vector<std::size_t> index(n, 0);
  GridSearchResult result;
  result.grid_resolution = resolution;
  result.min_cpk = std::numeric_limits<double>::infinity();
  for (const auto& a : axes) result.grid_step.push_back(a.step);
  std::vector<std::size_t> best(n, 0);

  while (true) {
    double shift = 0.0;
    double variance = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      shift += axes[i].shift[index[i]];
      variance += axes[i].variance[index[i]];
    }
    // Interval Cpk of the resultant: (W/2 - |delta_Y|) / (3 sigma_Y).
    const auto value = cpk(r_y, shift, std::sqrt(variance));
    ++result.evaluations;
    if (value && *value < result.min_cpk) {
      result.min_cpk = *value;
      best = index;
    }
    std::size_t i = 0;
    while (i < n && ++index[i] == resolution) index[i++] = 0;
    if (i == n) break;
  }
  for (std::size_t i = 0; i < n; ++i) result.argmin_offsets.push_back(axes[i].offset[best[i]]);
  return result;
}

void validate_grid(std::size_t n, std::size_t resolution) {
  if (n == 0) throw Error(ErrorCategory::InvalidInput, "component count n must be >= 1");
  if (n > kMaxGridComponents) {
    throw Error(ErrorCategory::UnsupportedSize,
                "exhaustive grid search supports at most " + std::to_string(kMaxGridComponents) +
                    " components, got " + std::to_string(n));
  }
  if (resolution < kMinGridResolution) {
    throw Error(ErrorCategory::InvalidInput,
                "grid resolution must be >= " + std::to_string(kMinGridResolution));
  }
}

}  // namespace

std::uint64_t component_stream_seed(std::uint64_t seed, std::size_t index) noexcept {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

SimulationResult monte_carlo_assembly(const SimulationPlan& plan) {
  validate_plan(plan);
  const auto comps = plan.model.components();
  const std::size_t count = plan.sample_count;

  // Y - target, accumulated component by component in index order.
  std::vector<double> deviation(count, plan.model.nominal_resultant() - plan.model.resultant().target());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    add_component(deviation, plan.processes[i], comps[i].alpha, component_stream_seed(plan.seed, i));
  }

  const double nn = static_cast<double>(count);
  double sum = 0.0;
  for (double y : deviation) sum += y;
  const double mean = sum / nn;

  double m2 = 0.0;
  double m4 = 0.0;
  double q_sum = 0.0;
  for (double y : deviation) {
    const double c2 = (y - mean) * (y - mean);
    m2 += c2;
    m4 += c2 * c2;
    q_sum += y * y;
  }
  m2 /= nn;
  m4 /= nn;
  const double q_mean = q_sum / nn;
  double q_var = 0.0;
  for (double y : deviation) q_var += (y * y - q_mean) * (y * y - q_mean);
  q_var /= nn;

  SimulationResult r;
  r.sample_count = count;
  r.empirical.delta = mean;
  r.empirical.sigma = std::sqrt(m2);
  r.empirical.inertia = std::sqrt(q_mean);
  r.se_delta = r.empirical.sigma / std::sqrt(nn);
  if (r.empirical.sigma > 0.0) {
    r.se_sigma = std::sqrt(std::max(0.0, m4 - m2 * m2)) / (2.0 * r.empirical.sigma * std::sqrt(nn));
  }
  if (r.empirical.inertia > 0.0) {
    r.se_inertia = std::sqrt(q_var / nn) / (2.0 * r.empirical.inertia);
  }
  return r;
}

Agreement compare_to(const SimulationResult& result, const BatchStats& expected,
                     double max_standard_errors) {
  constexpr double kExact = 1e-12;
  auto z = [](double diff, double se) {
    if (se > 0.0) return std::abs(diff) / se;
    return std::abs(diff) <= kExact ? 0.0 : std::numeric_limits<double>::infinity();
  };
  Agreement a;
  a.z_delta = z(result.empirical.delta - expected.delta, result.se_delta);
  a.z_sigma = z(result.empirical.sigma - expected.sigma, result.se_sigma);
  a.passed = a.z_delta <= max_standard_errors && a.z_sigma <= max_standard_errors;
  return a;
}

GridSearchResult grid_min_cpk(std::size_t n, double r_y, double icc, std::size_t resolution) {
  validate_grid(n, resolution);
  const double limit = uniform_inertia_limit(r_y, icc, n);
  std::vector<GridAxis> axes;
  for (std::size_t i = 0; i < n; ++i) axes.push_back(make_axis(1.0, limit, resolution));
  return search(axes, r_y, resolution);
}

GridSearchResult grid_min_cpk_general(const AssemblyModel& model, double r_y, double icc,
                                      std::size_t resolution) {
  validate_grid(model.size(), resolution);
  for (const auto& c : model.components()) {
    if (c.alpha == 0.0) {
      throw Error(ErrorCategory::InvalidInput,
                  "grid search needs every alpha_i != 0 ('" + c.name + "' has alpha = 0)");
    }
  }
  const auto alloc = icc_allocate(model, r_y, icc);
  std::vector<GridAxis> axes;
  const auto comps = model.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    axes.push_back(make_axis(comps[i].alpha, alloc.per_component[i].value, resolution));
  }
  return search(axes, r_y, resolution);
}

double derivative_check(double r_y, double icc, std::size_t n, double delta, double step) {
  const double limit = uniform_inertia_limit(r_y, icc, n);
  if (!std::isfinite(step) || step <= 0.0) {
    throw Error(ErrorCategory::InvalidInput, "finite-difference step must be > 0");
  }
  if (!(delta - step > 0.0) || !(delta + step < limit)) {
    std::ostringstream os;
    os << "stencil [" << delta - step << ", " << delta + step << "] leaves (0, " << limit << ")";
    throw Error(ErrorCategory::InvalidInput, os.str());
  }
  const double analytic = cpk_derivative(r_y, icc, n, delta);
  const double central = (cpk_at_offset(r_y, icc, n, delta + step) -
                          cpk_at_offset(r_y, icc, n, delta - step)) /
                         (2.0 * step);
  return std::abs(analytic - central) / std::max(1.0, std::abs(analytic));
}

}  // namespace inertol
