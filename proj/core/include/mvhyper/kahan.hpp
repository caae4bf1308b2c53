#pragma once

#include <cmath>

namespace mvhyper {

/// Neumaier-compensated accumulator. Risk differences are small gaps between
/// close sums, so plain accumulation is not good enough for the 1e-9 checks.
class KahanSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace mvhyper
