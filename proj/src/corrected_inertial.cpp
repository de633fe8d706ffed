#include "inertol/corrected_inertial.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace inertol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Offsets this close to the inertia limit (relative) are treated as on it.
constexpr double kDomainSlack = 8.0 * std::numeric_limits<double>::epsilon();

void require_icc(double icc) {
  if (!std::isfinite(icc) || icc <= 0.0) {
    throw Error(ErrorCategory::InvalidInput, "ICC must be a finite value > 0");
  }
}

void require_count(std::size_t n) {
  if (n == 0) throw Error(ErrorCategory::InvalidInput, "component count n must be >= 1");
}

void require_cpk_target(double cpk) {
  if (!std::isfinite(cpk) || cpk < 0.0) {
    throw Error(ErrorCategory::InvalidInput, "Cpk target must be a finite value >= 0");
  }
}

// |delta| clamped onto [0, limit]; throws when it lies clearly outside.
double checked_offset(double delta, double limit) {
  if (!std::isfinite(delta)) throw Error(ErrorCategory::InvalidInput, "offset must be finite");
  const double a = std::abs(delta);
  if (a > limit * (1.0 + kDomainSlack)) {
    std::ostringstream os;
    os << "offset " << delta << " exceeds the inertia limit " << limit;
    throw Error(ErrorCategory::OutOfDomain, os.str());
  }
  return std::min(a, limit);
}

double ratio_or_limit(double numerator, double variance) {
  if (variance > 0.0) return numerator / (3.0 * std::sqrt(variance));
  if (numerator > 0.0) return kInf;
  if (numerator < 0.0) return -kInf;
  // Both vanish only when n = 9 ICC^2; the curve tends to 0 there.
  return 0.0;
}

std::size_t influential_count(const AssemblyModel& model) {
  std::size_t n = 0;
  for (const auto& c : model.components()) n += c.alpha != 0.0 ? 1 : 0;
  return n;
}

}  // namespace

double CpkMinimum::value() const {
  if (!value_) throw Error(ErrorCategory::InvalidInput, "Cpk is unbounded below");
  return *value_;
}

IccAllocation icc_allocate(const AssemblyModel& model, double r_y, double icc) {
  detail::require_budget(r_y, "R_Y");
  require_icc(icc);
  const double scale = r_y / (6.0 * icc * detail::weighted_rss(model));
  IccAllocation alloc;
  alloc.icc = icc;
  alloc.per_component = detail::distribute(model, scale);
  alloc.resultant_width = r_y;
  alloc.guaranteed_cpk_min = cpk_min(icc, influential_count(model));
  alloc.warnings = detail::influence_warnings(model);
  return alloc;
}

double uniform_inertia_limit(double r_y, double icc, std::size_t n) {
  detail::require_budget(r_y, "R_Y");
  require_icc(icc);
  require_count(n);
  return r_y / (6.0 * icc * std::sqrt(static_cast<double>(n)));
}

double cpk_at_offset(double r_y, double icc, std::size_t n, double delta) {
  const double limit = uniform_inertia_limit(r_y, icc, n);
  const double d = checked_offset(delta, limit);
  const double nn = static_cast<double>(n);
  const double numerator = r_y / 2.0 - nn * d;
  // n (I_x^2 - delta^2), factored to keep precision near the limit.
  const double variance = nn * (limit - d) * (limit + d);
  return ratio_or_limit(numerator, variance);
}

double cpk_derivative(double r_y, double icc, std::size_t n, double delta) {
  const double limit = uniform_inertia_limit(r_y, icc, n);
  if (!std::isfinite(delta) || delta < 0.0 || delta >= limit) {
    std::ostringstream os;
    os << "derivative needs 0 <= delta < " << limit << ", got " << delta;
    throw Error(ErrorCategory::OutOfDomain, os.str());
  }
  const double nn = static_cast<double>(n);
  const double variance = nn * (limit - delta) * (limit + delta);
  const double root = std::sqrt(variance);
  const double numerator = r_y / 2.0 - nn * delta;
  return numerator * nn * delta / (3.0 * variance * root) - nn / (3.0 * root);
}

double worst_offset(double r_y, double icc) {
  detail::require_budget(r_y, "R_Y");
  require_icc(icc);
  return r_y / (18.0 * icc * icc);
}

CpkMinimum cpk_min(double icc, std::size_t n) {
  require_icc(icc);
  const double room = icc * icc - static_cast<double>(n) / 9.0;
  // n == 9 ICC^2 still has its minimum (0) inside the domain.
  if (room < 0.0) return CpkMinimum::unbounded_below();
  return CpkMinimum::of(std::sqrt(room));
}

double icc_for_cpk(double cpk_target, std::size_t n) {
  require_cpk_target(cpk_target);
  require_count(n);
  return std::sqrt(cpk_target * cpk_target + static_cast<double>(n) / 9.0);
}

ComponentCapacity max_components(double icc, double cpk_target) {
  require_icc(icc);
  require_cpk_target(cpk_target);
  if (icc < cpk_target) return {0.0, 0, true};
  const double budget = 9.0 * (icc * icc - cpk_target * cpk_target);
  return {budget, static_cast<std::size_t>(std::floor(budget)), false};
}

double cpk_general(const AssemblyModel& model, double r_y, double icc,
                   std::span<const double> offsets) {
  const auto alloc = icc_allocate(model, r_y, icc);
  const auto comps = model.components();
  if (offsets.size() != comps.size()) {
    throw Error(ErrorCategory::InvalidInput,
                "expected " + std::to_string(comps.size()) + " offsets, got " +
                    std::to_string(offsets.size()));
  }
  double shift = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double limit = alloc.per_component[i].value;
    const double d = checked_offset(offsets[i], limit);
    const double a = comps[i].alpha;
    shift += std::abs(a) * d;
    variance += a * a * (limit - d) * (limit + d);
  }
  return ratio_or_limit(r_y / 2.0 - shift, variance);
}

AbacusTable build_abacus(std::size_t n_first, std::size_t n_last,
                         std::span<const double> cpk_targets) {
  require_count(n_first);
  if (n_last < n_first) {
    throw Error(ErrorCategory::InvalidInput, "component range is empty");
  }
  if (cpk_targets.empty()) {
    throw Error(ErrorCategory::InvalidInput, "at least one Cpk target is required");
  }
  AbacusTable table;
  table.rows.reserve(cpk_targets.size() * (n_last - n_first + 1));
  for (double cpk : cpk_targets) {
    for (std::size_t n = n_first; n <= n_last; ++n) {
      table.rows.push_back({n, cpk, icc_for_cpk(cpk, n)});
    }
  }
  return table;
}

CpkCurve sample_cpk_curve(double r_y, double icc, std::size_t n, std::size_t num_points) {
  if (num_points < 2) throw Error(ErrorCategory::InvalidInput, "a curve needs at least 2 points");
  CpkCurve curve;
  curve.r_y = r_y;
  curve.icc = icc;
  curve.n = n;
  curve.inertia_limit = uniform_inertia_limit(r_y, icc, n);
  curve.delta_star = worst_offset(r_y, icc);
  curve.delta_star_in_domain = curve.delta_star <= curve.inertia_limit;
  curve.cpk_min = cpk_min(icc, n);
  curve.limit_value = cpk_at_offset(r_y, icc, n, curve.inertia_limit);

  const double last = curve.inertia_limit * (1.0 - kCurveEdgeMargin);
  const double step = last / static_cast<double>(num_points - 1);
  curve.samples.reserve(num_points);
  for (std::size_t j = 0; j < num_points; ++j) {
    const double delta = j + 1 == num_points ? last : step * static_cast<double>(j);
    curve.samples.push_back({delta, cpk_at_offset(r_y, icc, n, delta)});
  }
  return curve;
}

}  // namespace inertol
