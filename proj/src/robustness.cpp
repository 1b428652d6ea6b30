#include "tr2l/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "parallel.hpp"
#include "tr2l/error.hpp"
#include "tr2l/propagate.hpp"

namespace tr2l {

const char *to_string(ErrorKind kind) {
  return kind == ErrorKind::rabi ? "rabi" : "detuning";
}

double fidelity(const AEParams &params, const RescaleMap &map, double eps,
                double delta, std::size_t n_steps) {
  const AEParams perturbed = params.with_errors(eps, delta);
  const Drive drive = rescaled_drive(perturbed, map);
  return evolve(drive, n_steps).transition_probability(0, 1);
}

double fidelity(const AEParams &params, double a, double eps, double delta,
                const GridPolicy &policy) {
  return fidelity(params, RescaleMap(a, params.t_f()), eps, delta,
                  policy.steps_for(a));
}

double pi_pulse_fidelity(double eps) {
  const double s = std::sin((1.0 + eps) * kPi / 2.0);
  return s * s;
}

std::vector<double> uniform_values(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0)
    return out;
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(i + 1 == count ? hi : lo + (hi - lo) * (static_cast<double>(i) / (count - 1)));
  return out;
}

void SweepSpec::validate() const {
  if (values.empty())
    throw InvalidArgument("sweep needs at least one error value");
  if (a_values.empty())
    throw InvalidArgument("sweep needs at least one contraction parameter");
  for (double v : values)
    if (!(v > -1.0) || !std::isfinite(v))
      throw InvalidArgument("error fractions must be finite and exceed -1");
  for (double a : a_values)
    if (!(a > 0.0) || !std::isfinite(a))
      throw InvalidArgument("contraction parameters must be positive");
  if (grid.reference_steps == 0 || grid.rescaled_steps == 0)
    throw InvalidArgument("step counts must be positive");
  base.validate();
}

SweepResult sweep(const SweepSpec &spec) {
  spec.validate();
  SweepResult result;
  result.kind = spec.kind;
  const std::size_t n_err = spec.values.size();
  result.rows.resize(spec.a_values.size() * n_err);

  std::mutex failure_lock;
  detail::parallel_for(result.rows.size(), [&](std::size_t i) {
    SweepRow &row = result.rows[i];
    row.a = spec.a_values[i / n_err];
    row.error = spec.values[i % n_err];
    const double eps = spec.kind == ErrorKind::rabi ? row.error : 0.0;
    const double delta = spec.kind == ErrorKind::detuning ? row.error : 0.0;
    try {
      row.fidelity = fidelity(spec.base, row.a, eps, delta, spec.grid);
    } catch (const std::exception &e) {
      row.fidelity = std::nan("");
      std::lock_guard lock(failure_lock);
      result.failures.push_back({i, e.what()});
    }
  });
  std::sort(result.failures.begin(), result.failures.end(),
            [](const SweepFailure &l, const SweepFailure &r) { return l.index < r.index; });
  return result;
}

} // namespace tr2l
