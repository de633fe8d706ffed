#pragma once

// Core domain types for a linearized 1D assembly chain
//
//   Y = alpha0 + sum_i alpha_i * x_i
//
// together with batch statistics (offset, dispersion, inertia), capability
// indices and the composition of component statistics into the resultant.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inertol/error.hpp"

namespace inertol {

struct ComponentSpec {
  std::string name;
  double alpha = 1.0;   // incidence coefficient
  double beta = 1.0;    // feasibility weight, only relative values matter
  double target = 0.0;  // nominal value of the characteristic

  friend bool operator==(const ComponentSpec&, const ComponentSpec&) = default;
};

/// Requirement on the resultant: a symmetric interval of full width R_Y about
/// the target, or a maximum inertia I_Y.
class ResultantSpec {
 public:
  enum class Kind { Interval, Inertia };

  static ResultantSpec interval(double target, double full_width);
  static ResultantSpec inertia(double target, double max_inertia);

  double target() const noexcept { return target_; }
  Kind kind() const noexcept { return kind_; }
  bool is_interval() const noexcept { return kind_ == Kind::Interval; }

  /// Full width UT - LT. Throws InvalidInput for inertia specs.
  double width() const;
  /// Maximum resultant inertia. Throws InvalidInput for interval specs.
  double max_inertia() const;

  double lower() const { return target_ - width() / 2.0; }
  double upper() const { return target_ + width() / 2.0; }

  friend bool operator==(const ResultantSpec&, const ResultantSpec&) = default;

 private:
  ResultantSpec(double target, Kind kind, double value)
      : target_(target), kind_(kind), value_(value) {}

  double target_;
  Kind kind_;
  double value_;
};

/// Validated chain model. Construction enforces n >= 1, unique names,
/// finite alpha and beta > 0.
class AssemblyModel {
 public:
  /// alpha0 defaults to the value that puts the nominal chain on the
  /// resultant target: target - sum(alpha_i * target_i).
  AssemblyModel(std::string name, std::vector<ComponentSpec> components,
                ResultantSpec resultant,
                std::optional<double> alpha0 = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  double alpha0() const noexcept { return alpha0_; }
  std::span<const ComponentSpec> components() const noexcept { return components_; }
  const ResultantSpec& resultant() const noexcept { return resultant_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// alpha0 + sum(alpha_i * target_i)
  double nominal_resultant() const noexcept;

  /// Components with alpha = 0 do not influence the resultant.
  std::vector<std::string> non_influential() const;

  /// All |alpha_i| == 1 and all beta_i equal.
  bool is_uniform() const noexcept;

  friend bool operator==(const AssemblyModel&, const AssemblyModel&) = default;

 private:
  std::string name_;
  std::vector<ComponentSpec> components_;
  ResultantSpec resultant_;
  double alpha0_;
};

/// Uniform chain helper: n components named x1..xn, alpha = beta = 1.
AssemblyModel uniform_chain(std::size_t n, ResultantSpec resultant);

struct BatchStats {
  double delta = 0.0;    // mean - target
  double sigma = 0.0;    // population standard deviation
  double inertia = 0.0;  // sqrt(sigma^2 + delta^2)

  static BatchStats from(double sigma, double delta);
};

struct CapabilitySet {
  std::optional<double> cp;
  std::optional<double> cpi;
  std::optional<double> cpk;
};

double inertia_from_stats(double sigma, double delta);

/// Descriptive statistics of a batch against a target (divisor n).
BatchStats inertia_from_samples(std::span<const double> samples, double target);

/// Quality loss k * (sigma^2 + delta^2).
double taguchi_loss(double k, const BatchStats& stats);

/// Inertial Cp = I_max / sigma; empty when sigma == 0.
std::optional<double> cp_inertial(double i_max, double sigma);

/// Cpi = I_max / I_batch; empty for a perfect batch (I == 0).
std::optional<double> cpi(double i_max, const BatchStats& stats);

/// Interval Cpk = (W/2 - |delta|) / (3 sigma); empty when sigma == 0.
std::optional<double> cpk(double full_width, double delta, double sigma);

/// Indices of a batch against a maximum inertia and, optionally, an interval
/// of full width `full_width` centered on the target.
CapabilitySet capability(double i_max, std::optional<double> full_width,
                         const BatchStats& stats);

/// sigma_Y = sqrt(sum alpha_i^2 sigma_i^2), delta_Y = sum alpha_i delta_i.
BatchStats resultant_stats(const AssemblyModel& model,
                           std::span<const BatchStats> component_stats);

/// Resultant inertia from squared component inertias plus the offset double
/// product: sqrt(sum a_i^2 I_i^2 + 2 sum_{i<j} a_i a_j d_i d_j).
double resultant_inertia(const AssemblyModel& model,
                         std::span<const BatchStats> component_stats);

}  // namespace inertol
