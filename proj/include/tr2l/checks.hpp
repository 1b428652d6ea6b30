#pragma once

#include <cmath>
#include <cstddef>

#include "tr2l/grid_policy.hpp"
#include "tr2l/protocol.hpp"
#include "tr2l/rescale.hpp"

namespace tr2l {

struct CheckTolerances {
  double map = 1e-12;
  double composition = 1e-12; // relative to the channel amplitude
  double boundary = 1e-12;
  double peak = 1e-9;
  double propagator = 1e-6;
};

/// Everything `validate` reports for one contraction parameter.
struct ProtocolCheck {
  double a = 1.0;
  ValidationReport map;

  // max |tr(tau) - f'(tau) ref(f(tau))| over a uniform grid, divided by
  // Omega0 (rabi) or 2 beta^2 t0 / pi (detuning).
  double composition_rabi = 0.0;
  double composition_detuning = 0.0;
  // max of the start/end mismatches between rescaled and reference drives.
  double boundary_rabi = 0.0;
  double boundary_detuning = 0.0;

  bool peak_checked = false; // only for a >= 1
  double peak_rabi = 0.0;
  double peak_expected = 0.0;
  double peak_time = 0.0;

  std::size_t reference_steps = 0;
  std::size_t rescaled_steps = 0;
  double propagator_distance = 0.0;
  double phase_difference = 0.0;
  double reference_p2 = 0.0;
  double rescaled_p2 = 0.0;

  CheckTolerances tol;

  bool map_ok() const { return map.passed(); }
  bool composition_ok() const {
    return composition_rabi <= tol.composition &&
           composition_detuning <= tol.composition;
  }
  bool boundary_ok() const {
    return boundary_rabi <= tol.boundary && boundary_detuning <= tol.boundary;
  }
  bool peak_ok() const {
    return !peak_checked || std::abs(peak_rabi - peak_expected) <= tol.peak;
  }
  bool equality_ok() const { return propagator_distance <= tol.propagator; }
  bool passed() const {
    return map_ok() && composition_ok() && boundary_ok() && peak_ok() &&
           equality_ok();
  }
};

ProtocolCheck check_protocol(const AEParams &params, double a,
                             const GridPolicy &policy = {},
                             const CheckTolerances &tol = {},
                             std::size_t samples = 2001);

} // namespace tr2l
