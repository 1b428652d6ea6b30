#include "tr2l/checks.hpp"

#include <algorithm>
#include <cmath>

#include "tr2l/propagate.hpp"

namespace tr2l {

ProtocolCheck check_protocol(const AEParams &params, double a,
                             const GridPolicy &policy,
                             const CheckTolerances &tol, std::size_t samples) {
  params.validate();
  const RescaleMap map(a, params.t_f());

  ProtocolCheck c;
  c.a = a;
  c.tol = tol;
  c.map = validate_map(map, tol.map);

  // Odd sample count puts a node exactly on the peak tau = t_f / (2a).
  samples = std::max<std::size_t>(samples | 1u, 3);
  const double rabi_scale = params.omega0;
  const double detuning_scale = params.chirp_amplitude();
  c.peak_rabi = -1.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double tau = map.duration() * (static_cast<double>(k) / (samples - 1));
    const double t = map.eval(tau);
    const double speed = map.derivative(tau);
    const double rabi = tr_rabi(tau, params, map);
    const double detuning = tr_detuning(tau, params, map);
    c.composition_rabi = std::max(
        c.composition_rabi, std::abs(rabi - speed * ae_rabi(t, params)) / rabi_scale);
    c.composition_detuning =
        std::max(c.composition_detuning,
                 std::abs(detuning - speed * ae_detuning(t, params)) / detuning_scale);
    if (rabi > c.peak_rabi) {
      c.peak_rabi = rabi;
      c.peak_time = tau;
    }
  }

  const double end = map.duration();
  c.boundary_rabi = std::max(
      std::abs(tr_rabi(0.0, params, map) - ae_rabi(0.0, params)),
      std::abs(tr_rabi(end, params, map) - ae_rabi(params.t_f(), params)));
  c.boundary_detuning = std::max(
      std::abs(tr_detuning(0.0, params, map) - ae_detuning(0.0, params)),
      std::abs(tr_detuning(end, params, map) - ae_detuning(params.t_f(), params)));

  c.peak_checked = a >= 1.0;
  c.peak_expected = (2.0 * a - 1.0) * params.omega0;

  c.reference_steps = policy.reference_steps;
  c.rescaled_steps = policy.steps_for(a);
  const Propagator2 ref = evolve(reference_drive(params), c.reference_steps);
  const Propagator2 tr = evolve(rescaled_drive(params, map), c.rescaled_steps);
  c.propagator_distance = propagator_distance(ref, tr);
  c.phase_difference = propagator_phase_difference(ref.u, tr.u);
  c.reference_p2 = ref.transition_probability(0, 1);
  c.rescaled_p2 = tr.transition_probability(0, 1);
  return c;
}

} // namespace tr2l
