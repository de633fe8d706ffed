#include "inertol/stack_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace inertol {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCategory::InvalidInput, std::string(what) + " must be finite");
  }
}

void require_positive(double value, const char* what) {
  require_finite(value, what);
  if (value <= 0.0) {
    throw Error(ErrorCategory::InvalidInput, std::string(what) + " must be > 0");
  }
}

void require_same_length(const AssemblyModel& model, std::size_t count) {
  if (count != model.size()) {
    throw Error(ErrorCategory::InvalidInput,
                "expected " + std::to_string(model.size()) +
                    " component statistics, got " + std::to_string(count));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ResultantSpec

ResultantSpec ResultantSpec::interval(double target, double full_width) {
  require_finite(target, "resultant target");
  require_positive(full_width, "resultant width");
  return {target, Kind::Interval, full_width};
}

ResultantSpec ResultantSpec::inertia(double target, double max_inertia) {
  require_finite(target, "resultant target");
  require_positive(max_inertia, "resultant inertia");
  return {target, Kind::Inertia, max_inertia};
}

double ResultantSpec::width() const {
  if (kind_ != Kind::Interval) {
    throw Error(ErrorCategory::InvalidInput, "resultant is specified by inertia, not by an interval");
  }
  return value_;
}

double ResultantSpec::max_inertia() const {
  if (kind_ != Kind::Inertia) {
    throw Error(ErrorCategory::InvalidInput, "resultant is specified by an interval, not by inertia");
  }
  return value_;
}

// ---------------------------------------------------------------------------
// AssemblyModel

AssemblyModel::AssemblyModel(std::string name, std::vector<ComponentSpec> components,
                             ResultantSpec resultant, std::optional<double> alpha0)
    : name_(std::move(name)), components_(std::move(components)), resultant_(resultant) {
  if (components_.empty()) {
    throw Error(ErrorCategory::InvalidInput, "assembly needs at least one component");
  }
  std::set<std::string> seen;
  for (const auto& c : components_) {
    if (c.name.empty()) {
      throw Error(ErrorCategory::InvalidInput, "component name must not be empty");
    }
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCategory::InvalidInput, "duplicate component name '" + c.name + "'");
    }
    require_finite(c.alpha, "alpha");
    require_finite(c.target, "component target");
    if (!std::isfinite(c.beta) || c.beta <= 0.0) {
      throw Error(ErrorCategory::InvalidInput, "beta of '" + c.name + "' must be > 0");
    }
  }
  if (alpha0) {
    require_finite(*alpha0, "alpha0");
    alpha0_ = *alpha0;
  } else {
    alpha0_ = resultant_.target();
    for (const auto& c : components_) alpha0_ -= c.alpha * c.target;
  }
}

double AssemblyModel::nominal_resultant() const noexcept {
  double y = alpha0_;
  for (const auto& c : components_) y += c.alpha * c.target;
  return y;
}

std::vector<std::string> AssemblyModel::non_influential() const {
  std::vector<std::string> names;
  for (const auto& c : components_) {
    if (c.alpha == 0.0) names.push_back(c.name);
  }
  return names;
}

bool AssemblyModel::is_uniform() const noexcept {
  for (const auto& c : components_) {
    if (std::abs(c.alpha) != 1.0 || c.beta != components_.front().beta) return false;
  }
  return true;
}

AssemblyModel uniform_chain(std::size_t n, ResultantSpec resultant) {
  std::vector<ComponentSpec> comps;
  comps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    comps.push_back({"x" + std::to_string(i + 1), 1.0, 1.0, 0.0});
  }
  return AssemblyModel("uniform", std::move(comps), resultant);
}

// ---------------------------------------------------------------------------
// Batch statistics and capability

BatchStats BatchStats::from(double sigma, double delta) {
  return {delta, sigma, inertia_from_stats(sigma, delta)};
}

double inertia_from_stats(double sigma, double delta) {
  require_finite(sigma, "sigma");
  require_finite(delta, "delta");
  if (sigma < 0.0) throw Error(ErrorCategory::InvalidInput, "sigma must be >= 0");
  return std::hypot(sigma, delta);
}

BatchStats inertia_from_samples(std::span<const double> samples, double target) {
  if (samples.empty()) {
    throw Error(ErrorCategory::InvalidInput, "sample set is empty");
  }
  require_finite(target, "target");
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double x : samples) {
    require_finite(x, "sample");
    sum += x;
  }
  const double mean = sum / n;
  double ss_mean = 0.0;
  for (double x : samples) ss_mean += (x - mean) * (x - mean);

  BatchStats s;
  s.delta = mean - target;
  s.sigma = std::sqrt(ss_mean / n);
  // Direct form of the inertia; agrees with hypot(sigma, delta).
  double ss_target = 0.0;
  for (double x : samples) ss_target += (x - target) * (x - target);
  s.inertia = std::sqrt(ss_target / n);
  return s;
}

double taguchi_loss(double k, const BatchStats& stats) {
  require_positive(k, "loss constant k");
  return k * stats.inertia * stats.inertia;
}

std::optional<double> cp_inertial(double i_max, double sigma) {
  require_positive(i_max, "I_max");
  require_finite(sigma, "sigma");
  if (sigma < 0.0) throw Error(ErrorCategory::InvalidInput, "sigma must be >= 0");
  if (sigma == 0.0) return std::nullopt;
  return i_max / sigma;
}

std::optional<double> cpi(double i_max, const BatchStats& stats) {
  require_positive(i_max, "I_max");
  if (stats.inertia == 0.0) return std::nullopt;
  return i_max / stats.inertia;
}

std::optional<double> cpk(double full_width, double delta, double sigma) {
  require_positive(full_width, "interval width");
  require_finite(delta, "delta");
  require_finite(sigma, "sigma");
  if (sigma < 0.0) throw Error(ErrorCategory::InvalidInput, "sigma must be >= 0");
  if (sigma == 0.0) return std::nullopt;
  return (full_width / 2.0 - std::abs(delta)) / (3.0 * sigma);
}

CapabilitySet capability(double i_max, std::optional<double> full_width,
                         const BatchStats& stats) {
  CapabilitySet set;
  set.cp = cp_inertial(i_max, stats.sigma);
  set.cpi = cpi(i_max, stats);
  if (full_width) set.cpk = cpk(*full_width, stats.delta, stats.sigma);
  return set;
}

// ---------------------------------------------------------------------------
// Composition

BatchStats resultant_stats(const AssemblyModel& model,
                           std::span<const BatchStats> component_stats) {
  require_same_length(model, component_stats.size());
  double var = 0.0;
  double delta = 0.0;
  const auto comps = model.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& s = component_stats[i];
    if (!(s.sigma >= 0.0)) throw Error(ErrorCategory::InvalidInput, "sigma must be >= 0");
    const double a = comps[i].alpha;
    var += a * a * s.sigma * s.sigma;
    delta += a * s.delta;
  }
  return BatchStats::from(std::sqrt(var), delta);
}

double resultant_inertia(const AssemblyModel& model,
                         std::span<const BatchStats> component_stats) {
  require_same_length(model, component_stats.size());
  const auto comps = model.components();
  double squares = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& si = component_stats[i];
    if (!(si.sigma >= 0.0)) throw Error(ErrorCategory::InvalidInput, "sigma must be >= 0");
    const double ai = comps[i].alpha;
    const double ii = inertia_from_stats(si.sigma, si.delta);
    squares += ai * ai * ii * ii;
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      cross += ai * comps[j].alpha * si.delta * component_stats[j].delta;
    }
  }
  // Rounding can push a fully cancelling sum a hair below zero.
  return std::sqrt(std::max(0.0, squares + 2.0 * cross));
}

}  // namespace inertol
