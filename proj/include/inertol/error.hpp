#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inertol {

enum class ErrorCategory {
  InvalidInput,
  DegenerateModel,
  UnsupportedHypothesis,
  OutOfDomain,
  UnsupportedSize,
  Parse,
  Data,
  Io,
  Usage,
};

/// Stable lowercase identifier, used in CLI error lines.
std::string_view category_name(ErrorCategory category) noexcept;

/// Process exit status associated with a category (always nonzero).
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace inertol
