#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <string>

#include "gpgoodwin/error.hpp"

namespace gpgoodwin {

/// A share or probability on the [0, 100] scale.
///
/// Construction tolerates rounding noise of order 1e-9 outside the interval
/// and clamps it away; anything further out is rejected.
class Percent {
 public:
  static constexpr double kSlack = 1e-9;

  constexpr Percent() = default;
  explicit Percent(double value) {
    if (!std::isfinite(value) || value < -kSlack || value > 100.0 + kSlack) {
      throw ParameterError("percent value out of [0, 100]: " + std::to_string(value));
    }
    value_ = std::clamp(value, 0.0, 100.0);
  }

  constexpr double value() const noexcept { return value_; }
  constexpr double fraction() const noexcept { return value_ / 100.0; }

  /// 100 - value.
  Percent complement() const { return Percent(100.0 - value_); }

  friend constexpr auto operator<=>(Percent, Percent) = default;

 private:
  double value_ = 0.0;
};

}  // namespace gpgoodwin
