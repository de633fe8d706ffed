#include "inertol/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace inertol {

namespace {

std::string special(double value) {
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

// Avoids printing "-0.000" for tiny negative values.
double clean_zero(double value) { return value == 0.0 ? 0.0 : value; }

}  // namespace

std::string format_sig(double value, int digits) {
  if (!std::isfinite(value)) return special(value);
  return fmt::format("{:.{}g}", clean_zero(value), digits);
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return special(value);
  auto text = fmt::format("{:.{}f}", value, decimals);
  if (text.front() == '-' && text.find_first_not_of("-0.") == std::string::npos) text.erase(0, 1);
  return text;
}

std::string format_exact(double value) {
  if (!std::isfinite(value)) return special(value);
  return fmt::format("{}", clean_zero(value));
}

std::string format_sig_or(std::optional<double> value, int digits, std::string_view undefined_label) {
  return value ? format_sig(*value, digits) : std::string(undefined_label);
}

void Report::table(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  };
  widen(header);
  for (const auto& r : rows) widen(r);

  auto emit = [&](const std::vector<std::string>& row) {
    std::string text = "  ";
    for (std::size_t i = 0; i < row.size(); ++i) {
      text += row[i];
      if (i + 1 < row.size()) text += std::string(width[i] - row[i].size() + 2, ' ');
    }
    body_.push_back(std::move(text));
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

void Report::data(std::string name, std::vector<std::string> header,
                  std::vector<std::vector<std::string>> rows) {
  data_.push_back({std::move(name), std::move(header), std::move(rows)});
}

std::string Report::render() const {
  std::string out = title_ + "\n\n";
  for (const auto& l : body_) out += l + "\n";
  if (!data_.empty()) {
    out += "\n--- machine-readable ---\n";
    for (const auto& t : data_) {
      out += "[" + t.name + "]\n";
      auto join = [](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
        return s;
      };
      out += join(t.header) + "\n";
      for (const auto& r : t.rows) out += join(r) + "\n";
    }
  }
  return out;
}

}  // namespace inertol
