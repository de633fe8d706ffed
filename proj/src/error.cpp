#include "inertol/error.hpp"

namespace inertol {

std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InvalidInput: return "invalid-input";
    case ErrorCategory::DegenerateModel: return "degenerate-model";
    case ErrorCategory::UnsupportedHypothesis: return "unsupported-hypothesis";
    case ErrorCategory::OutOfDomain: return "out-of-domain";
    case ErrorCategory::UnsupportedSize: return "unsupported-size";
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Io: return "io";
    case ErrorCategory::Usage: return "usage";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::Usage: return 2;
    case ErrorCategory::Parse: return 3;
    case ErrorCategory::Data: return 4;
    case ErrorCategory::Io: return 5;
    case ErrorCategory::InvalidInput: return 6;
    case ErrorCategory::DegenerateModel: return 7;
    case ErrorCategory::UnsupportedHypothesis: return 8;
    case ErrorCategory::OutOfDomain: return 9;
    case ErrorCategory::UnsupportedSize: return 10;
  }
  return 64;
}

}  // namespace inertol
