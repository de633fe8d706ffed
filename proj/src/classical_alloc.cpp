#include "inertol/classical_alloc.hpp"

#include <cmath>
#include <sstream>

namespace inertol {

namespace detail {

double weighted_abs_sum(const AssemblyModel& model) {
  double sum = 0.0;
  for (const auto& c : model.components()) sum += std::abs(c.alpha) * c.beta;
  if (sum == 0.0) {
    throw Error(ErrorCategory::DegenerateModel, "every incidence coefficient is zero");
  }
  return sum;
}

double weighted_rss(const AssemblyModel& model) {
  double sum = 0.0;
  for (const auto& c : model.components()) sum += c.alpha * c.alpha * c.beta * c.beta;
  if (sum == 0.0) {
    throw Error(ErrorCategory::DegenerateModel, "every incidence coefficient is zero");
  }
  return std::sqrt(sum);
}

std::vector<ComponentBudget> distribute(const AssemblyModel& model, double scale) {
  std::vector<ComponentBudget> out;
  out.reserve(model.size());
  for (const auto& c : model.components()) out.push_back({c.name, c.beta * scale});
  return out;
}

std::vector<std::string> influence_warnings(const AssemblyModel& model) {
  std::vector<std::string> warnings;
  for (const auto& name : model.non_influential()) {
    warnings.push_back("component '" + name + "' has alpha = 0 and does not influence the resultant");
  }
  return warnings;
}

void require_budget(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCategory::InvalidInput, std::string(what) + " must be a finite value > 0");
  }
}

}  // namespace detail

std::string method_name(const IntervalMethod& method) {
  switch (method.kind) {
    case IntervalMethod::Kind::WorstCase: return "worst-case";
    case IntervalMethod::Kind::Statistical: return "statistical";
    case IntervalMethod::Kind::Inflated: {
      std::ostringstream os;
      os << "inflated(f=" << method.f << ")";
      return os.str();
    }
  }
  return "unknown";
}

IntervalAllocation worst_case(const AssemblyModel& model, double r_y) {
  detail::require_budget(r_y, "R_Y");
  const double scale = r_y / detail::weighted_abs_sum(model);
  return {IntervalMethod::worst_case(), detail::distribute(model, scale), r_y,
          detail::influence_warnings(model)};
}

IntervalAllocation statistical(const AssemblyModel& model, double r_y) {
  detail::require_budget(r_y, "R_Y");
  const double scale = r_y / detail::weighted_rss(model);
  return {IntervalMethod::statistical(), detail::distribute(model, scale), r_y,
          detail::influence_warnings(model)};
}

IntervalAllocation inflated(const AssemblyModel& model, double r_y, double f) {
  detail::require_budget(r_y, "R_Y");
  detail::require_budget(f, "inflation factor f");
  const double scale = r_y / (f * detail::weighted_rss(model));
  IntervalAllocation alloc{IntervalMethod::inflated(f), detail::distribute(model, scale), r_y,
                           detail::influence_warnings(model)};
  const double upper = std::sqrt(static_cast<double>(model.size()));
  if (f < 1.0 || f > upper) {
    std::ostringstream os;
    os << "inflation factor f = " << f << " lies outside [1, sqrt(n)] = [1, " << upper << "]";
    alloc.warnings.push_back(os.str());
  }
  return alloc;
}

IntervalAllocation allocate_interval(const AssemblyModel& model, double r_y,
                                     const IntervalMethod& method) {
  switch (method.kind) {
    case IntervalMethod::Kind::WorstCase: return worst_case(model, r_y);
    case IntervalMethod::Kind::Statistical: return statistical(model, r_y);
    case IntervalMethod::Kind::Inflated: return inflated(model, r_y, method.f);
  }
  throw Error(ErrorCategory::InvalidInput, "unknown interval method");
}

double forward_width(const AssemblyModel& model, const IntervalAllocation& allocation) {
  const auto comps = model.components();
  if (allocation.per_component.size() != comps.size()) {
    throw Error(ErrorCategory::InvalidInput, "allocation does not match the model");
  }
  double linear = 0.0;
  double squares = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double r = allocation.per_component[i].value;
    linear += std::abs(comps[i].alpha) * r;
    squares += comps[i].alpha * comps[i].alpha * r * r;
  }
  switch (allocation.method.kind) {
    case IntervalMethod::Kind::WorstCase: return linear;
    case IntervalMethod::Kind::Statistical: return std::sqrt(squares);
    case IntervalMethod::Kind::Inflated: return allocation.method.f * std::sqrt(squares);
  }
  return 0.0;
}

}  // namespace inertol
