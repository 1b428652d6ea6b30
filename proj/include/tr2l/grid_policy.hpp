#pragma once

#include <cstddef>

namespace tr2l {

/// Step counts used when a caller does not build a TimeGrid by hand.
/// Rescaled windows use the same count as the reference window: the faster
/// rescaled drive needs the full resolution to keep the reference/rescaled
/// propagators within 1e-6 of each other.
struct GridPolicy {
  std::size_t reference_steps = 20000;
  std::size_t rescaled_steps = 20000;

  std::size_t steps_for(double a) const {
    return a == 1.0 ? reference_steps : rescaled_steps;
  }
};

} // namespace tr2l
