#pragma once

#include <cmath>
#include <limits>

#include "energynet/error.hpp"

namespace energynet {

// Piecewise-linear saturating rate function with unit slope between the
// kinks. beta2 is always beta1 + 1.
template <typename Scalar = double>
class HardSigmoid {
 public:
  HardSigmoid() : HardSigmoid(Scalar(-0.5)) {}

  explicit HardSigmoid(Scalar beta1) : beta1_(beta1), beta2_(beta1 + Scalar(1)) {
    if (!(beta1_ < Scalar(0) && Scalar(0) < beta2_)) {
      throw Error(ErrorCode::kInvalidConfig, "hard sigmoid needs beta1 < 0 < beta2");
    }
  }

  // Validating constructor for externally supplied pairs.
  HardSigmoid(Scalar beta1, Scalar beta2) : HardSigmoid(beta1) {
    using std::abs;
    if (abs((beta2 - beta1) - Scalar(1)) > Scalar(4) * std::numeric_limits<Scalar>::epsilon()) {
      throw Error(ErrorCode::kInvalidConfig, "hard sigmoid needs beta2 - beta1 = 1");
    }
  }

  Scalar beta1() const noexcept { return beta1_; }
  Scalar beta2() const noexcept { return beta2_; }

  Scalar rate(Scalar s) const noexcept {
    if (s < beta1_) return Scalar(0);
    if (s > beta2_) return Scalar(1);
    return s - beta1_;
  }

  // Subgradient convention: slope 1 on the closed interval [beta1, beta2].
  Scalar slope(Scalar s) const noexcept {
    return (s >= beta1_ && s <= beta2_) ? Scalar(1) : Scalar(0);
  }

  Scalar kink_distance(Scalar s) const noexcept {
    using std::abs;
    using std::min;
    return min(abs(s - beta1_), abs(s - beta2_));
  }

  bool saturated(Scalar s) const noexcept { return slope(s) == Scalar(0); }

  friend bool operator==(const HardSigmoid&, const HardSigmoid&) = default;

 private:
  Scalar beta1_;
  Scalar beta2_;
};

template <typename Scalar>
Scalar rho(const HardSigmoid<Scalar>& nl, Scalar s) {
  return nl.rate(s);
}

template <typename Scalar>
Scalar rho_prime(const HardSigmoid<Scalar>& nl, Scalar s) {
  return nl.slope(s);
}

}  // namespace energynet
