#pragma once

#include <cmath>
#include <limits>

namespace fragsim {

/// Neumaier (improved Kahan) summation that also keeps the running sum of
/// magnitudes, which bounds how much cancellation has taken place.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
    magnitude_ += std::abs(x);
    ++count_;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }
  double magnitude() const noexcept { return magnitude_; }
  long count() const noexcept { return count_; }

  /// Rounding error of the summation itself (excludes errors in the terms).
  double rounding_bound() const noexcept {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    return 2.0 * eps * std::abs(value()) + 2.0 * eps * eps * count_ * magnitude_;
  }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double magnitude_ = 0.0;
  long count_ = 0;
};

}  // namespace fragsim
