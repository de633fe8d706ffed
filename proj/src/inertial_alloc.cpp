#include "inertol/inertial_alloc.hpp"

#include <cmath>
#include <sstream>

namespace inertol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_shift(double k) {
  if (!std::isfinite(k) || k < 0.0) {
    throw Error(ErrorCategory::InvalidInput, "shift ratio k must be a finite value >= 0");
  }
}

void require_count(std::size_t n) {
  if (n == 0) throw Error(ErrorCategory::InvalidInput, "component count n must be >= 1");
}

std::vector<ComponentBudget> uniform_budgets(std::size_t n, double value) {
  std::vector<ComponentBudget> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({"x" + std::to_string(i + 1), value});
  return out;
}

void require_uniform(const AssemblyModel& model, const char* hypothesis) {
  if (!model.is_uniform()) {
    throw Error(ErrorCategory::UnsupportedHypothesis,
                std::string(hypothesis) +
                    " allocation is only defined for uniform chains (|alpha_i| = 1, equal beta)");
  }
}

void rename(InertiaAllocation& alloc, const AssemblyModel& model) {
  const auto comps = model.components();
  for (std::size_t i = 0; i < comps.size(); ++i) alloc.per_component[i].name = comps[i].name;
}

}  // namespace

std::string hypothesis_name(const InertialHypothesis& hypothesis) {
  return std::visit(
      overloaded{
          [](const WorstCaseOffsets&) -> std::string { return "inertial-h1"; },
          [](const RandomMeans&) -> std::string { return "inertial-h2"; },
          [](const SystematicShift& h) -> std::string {
            std::ostringstream os;
            os << "inertial-h3(k=" << h.k << ")";
            return os.str();
          },
          [](const PartialShift& h) -> std::string {
            std::ostringstream os;
            os << "inertial-h4(m=" << h.m << ", k=" << h.k << ")";
            return os.str();
          },
      },
      hypothesis);
}

InertiaAllocation allocate_h1(const AssemblyModel& model, double i_y) {
  detail::require_budget(i_y, "I_Y");
  const double scale = i_y / detail::weighted_abs_sum(model);
  return {WorstCaseOffsets{}, detail::distribute(model, scale), i_y,
          detail::influence_warnings(model)};
}

InertiaAllocation allocate_h2(const AssemblyModel& model, double i_y) {
  detail::require_budget(i_y, "I_Y");
  const double scale = i_y / detail::weighted_rss(model);
  return {RandomMeans{}, detail::distribute(model, scale), i_y,
          detail::influence_warnings(model)};
}

InertiaAllocation allocate_h3(std::size_t n, double k, double i_y) {
  require_count(n);
  require_shift(k);
  detail::require_budget(i_y, "I_Y");
  const double nn = static_cast<double>(n);
  const double k2 = k * k;
  const double value = i_y / std::sqrt(nn * (nn * k2 + 1.0) / (1.0 + k2));
  return {SystematicShift{k}, uniform_budgets(n, value), i_y, {}};
}

InertiaAllocation allocate_h4(std::size_t n, std::size_t m, double k, double i_y) {
  require_count(n);
  require_shift(k);
  detail::require_budget(i_y, "I_Y");
  if (m > n) {
    throw Error(ErrorCategory::InvalidInput, "shifted component count m must not exceed n");
  }
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double k2 = k * k;
  const double value = i_y * std::sqrt((1.0 + k2) / (nn * (1.0 + k2) + mm * (mm - 1.0) * k2));
  return {PartialShift{m, k}, uniform_budgets(n, value), i_y, {}};
}

InertiaAllocation allocate_h3(const AssemblyModel& model, double k, double i_y) {
  require_uniform(model, "inertial-h3");
  auto alloc = allocate_h3(model.size(), k, i_y);
  rename(alloc, model);
  return alloc;
}

InertiaAllocation allocate_h4(const AssemblyModel& model, std::size_t m, double k, double i_y) {
  require_uniform(model, "inertial-h4");
  auto alloc = allocate_h4(model.size(), m, k, i_y);
  rename(alloc, model);
  return alloc;
}

InertiaAllocation allocate_inertial(const AssemblyModel& model, double i_y,
                                    const InertialHypothesis& hypothesis) {
  return std::visit(
      overloaded{
          [&](const WorstCaseOffsets&) { return allocate_h1(model, i_y); },
          [&](const RandomMeans&) { return allocate_h2(model, i_y); },
          [&](const SystematicShift& h) { return allocate_h3(model, h.k, i_y); },
          [&](const PartialShift& h) { return allocate_h4(model, h.m, h.k, i_y); },
      },
      hypothesis);
}

std::vector<BatchStats> limit_configuration(const AssemblyModel& model,
                                            const InertiaAllocation& allocation) {
  const auto comps = model.components();
  if (allocation.per_component.size() != comps.size()) {
    throw Error(ErrorCategory::InvalidInput, "allocation does not match the model");
  }
  std::vector<BatchStats> stats;
  stats.reserve(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double limit = allocation.per_component[i].value;
    const double side = comps[i].alpha < 0.0 ? -1.0 : 1.0;
    auto shifted = [&](double k) {
      const double sigma = limit / std::sqrt(1.0 + k * k);
      return BatchStats{side * k * sigma, sigma, limit};
    };
    stats.push_back(std::visit(
        overloaded{
            [&](const WorstCaseOffsets&) { return BatchStats{side * limit, 0.0, limit}; },
            [&](const RandomMeans&) { return BatchStats{0.0, limit, limit}; },
            [&](const SystematicShift& h) { return shifted(h.k); },
            [&](const PartialShift& h) {
              return i < h.m ? shifted(h.k) : BatchStats{0.0, limit, limit};
            },
        },
        allocation.hypothesis));
  }
  return stats;
}

double inertia_budget_from_interval(double r_y) {
  detail::require_budget(r_y, "R_Y");
  return r_y / 6.0;
}

}  // namespace inertol
