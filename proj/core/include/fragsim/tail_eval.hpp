#pragma once

#include <algorithm>

namespace fragsim {

/// A probability (or density) together with an estimate of the absolute
/// floating-point error accumulated while evaluating it.
struct TailEval {
  double value = 0.0;
  double abs_error = 0.0;

  static TailEval clamped(double raw, double err) {
    return TailEval{std::clamp(raw, 0.0, 1.0), std::max(err, 0.0)};
  }
};

}  // namespace fragsim
