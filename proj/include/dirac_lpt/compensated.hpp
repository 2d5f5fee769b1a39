#pragma once

#include <cmath>

namespace dirac_lpt {

/// Neumaier's variant of Kahan summation. The running compensation also
/// captures the error when the addend is larger than the partial sum, which
/// is the common case in the Laurent convolutions where late terms dominate.
template <typename Real> class CompensatedSum {
public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real init) : sum_(init) {}

  CompensatedSum &operator+=(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    magnitude_ += std::abs(x);
    return *this;
  }

  CompensatedSum &operator-=(Real x) { return *this += -x; }

  Real value() const { return sum_ + comp_; }

  /// Sum of |addends|; the scale against which cancellation is judged.
  Real magnitude() const { return magnitude_; }

private:
  Real sum_{0};
  Real comp_{0};
  Real magnitude_{0};
};

} // namespace dirac_lpt
