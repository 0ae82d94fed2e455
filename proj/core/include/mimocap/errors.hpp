#pragma once

#include <stdexcept>

namespace mimocap {

// Requested configuration lies outside the range where the closed-form
// coefficient construction is numerically trustworthy.  Callers should fall
// back to the Monte-Carlo estimator for such configurations.
class envelope_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An internal computation produced a non-finite or inconsistent value
// (catastrophic cancellation, failed eigendecomposition, ...).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mimocap
