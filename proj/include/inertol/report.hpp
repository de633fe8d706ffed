#pragma once

// Plain-text reports: a human-readable body followed by a machine-readable
// section of comma-separated tables at full (round-trip) precision.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inertol {

/// Value with `digits` significant digits ("%.6g" style).
std::string format_sig(double value, int digits);
/// Value with `decimals` digits after the point ("%.3f" style).
std::string format_fixed(double value, int decimals);
/// Shortest representation that round-trips to the same double.
std::string format_exact(double value);
/// format_sig, or `undefined_label` for an empty optional.
std::string format_sig_or(std::optional<double> value, int digits, std::string_view undefined_label);

class Report {
 public:
  explicit Report(std::string title) : title_(std::move(title)) {}

  void line(std::string text = {}) { body_.push_back(std::move(text)); }

  /// Left-aligned text table with a header row.
  void table(const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows);

  /// Adds a machine-readable CSV table; cells should use format_exact().
  void data(std::string name, std::vector<std::string> header,
            std::vector<std::vector<std::string>> rows);

  std::string render() const;

 private:
  struct DataTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
  };

  std::string title_;
  std::vector<std::string> body_;
  std::vector<DataTable> data_;
};

}  // namespace inertol
