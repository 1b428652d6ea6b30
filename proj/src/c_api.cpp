#include "tr2l/tr2l.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "tr2l/checks.hpp"
#include "tr2l/error.hpp"
#include "tr2l/propagate.hpp"
#include "tr2l/protocol.hpp"
#include "tr2l/rescale.hpp"
#include "tr2l/robustness.hpp"
#include "tr2l/workstats.hpp"

struct tr2l_drive {
  tr2l::Drive drive;
};

struct tr2l_trajectory {
  std::vector<tr2l_trajectory_point> points;
};

struct tr2l_sweep {
  tr2l::SweepResult result;
};

struct tr2l_work_report {
  tr2l::EqualityReport report;
};

namespace {

thread_local std::string last_error;

tr2l_status fail(tr2l_status status, const char *message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body> tr2l_status guarded(Body &&body) {
  try {
    body();
    return TR2L_OK;
  } catch (const tr2l::InvalidArgument &e) {
    return fail(TR2L_ERR_INVALID_ARGUMENT, e.what());
  } catch (const tr2l::DomainError &e) {
    return fail(TR2L_ERR_DOMAIN, e.what());
  } catch (const tr2l::ConvergenceError &e) {
    return fail(TR2L_ERR_CONVERGENCE, e.what());
  } catch (const tr2l::DegenerateError &e) {
    return fail(TR2L_ERR_DEGENERATE, e.what());
  } catch (const tr2l::NonUnitaryError &e) {
    return fail(TR2L_ERR_NON_UNITARY, e.what());
  } catch (const std::bad_alloc &) {
    return fail(TR2L_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(TR2L_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TR2L_ERR_INTERNAL, "unknown error");
  }
}

template <typename... Ptrs> bool any_null(const Ptrs *...ptrs) {
  return ((ptrs == nullptr) || ...);
}

tr2l_status null_argument() {
  return fail(TR2L_ERR_INVALID_ARGUMENT, "null pointer argument");
}

tr2l::AEParams to_params(const tr2l_ae_params &p) {
  return {p.omega0, p.beta_chirp, p.t0};
}

tr2l::GridPolicy to_policy(const tr2l_grid_policy *p) {
  if (p == nullptr)
    return {};
  return {p->reference_steps, p->rescaled_steps};
}

tr2l::DriveSample to_sample(const tr2l_drive_sample &s) {
  return {s.rabi, s.detuning, s.phase};
}

tr2l_drive_sample from_sample(const tr2l::DriveSample &s) {
  return {s.rabi, s.detuning, s.phase};
}

tr2l::Matrix2c to_matrix(const tr2l_matrix2 &m) {
  tr2l::Matrix2c out;
  for (int i = 0; i < 4; ++i)
    out(i / 2, i % 2) = tr2l::Complex(m.re[i], m.im[i]);
  return out;
}

tr2l_matrix2 from_matrix(const tr2l::Matrix2c &m) {
  tr2l_matrix2 out;
  for (int i = 0; i < 4; ++i) {
    out.re[i] = m(i / 2, i % 2).real();
    out.im[i] = m(i / 2, i % 2).imag();
  }
  return out;
}

tr2l_state from_vector(const tr2l::Vector2c &v) {
  return {v(0).real(), v(0).imag(), v(1).real(), v(1).imag()};
}

tr2l_propagator from_propagator(const tr2l::Propagator2 &p) {
  return {from_matrix(p.u), p.t_start, p.t_end, p.steps};
}

tr2l_speed from_speed(tr2l::Speed s) {
  switch (s) {
  case tr2l::Speed::faster:
    return TR2L_SPEED_FASTER;
  case tr2l::Speed::slower:
    return TR2L_SPEED_SLOWER;
  default:
    return TR2L_SPEED_SAME;
  }
}

tr2l_rescale_report from_report(const tr2l::ValidationReport &r) {
  tr2l_rescale_report out{};
  out.a = r.a;
  out.t_f = r.t_f;
  out.initial_time_residual = r.initial_time_residual;
  out.final_time = r.final_time;
  out.initial_rate_residual = r.initial_rate_residual;
  out.final_rate_residual = r.final_rate_residual;
  out.min_rate = r.min_rate;
  out.max_rate = r.max_rate;
  out.same_start = r.same_start;
  out.same_initial_hamiltonian = r.same_initial_h;
  out.same_final_hamiltonian = r.same_final_h;
  out.rate_bound = r.rate_bound;
  out.speed = from_speed(r.speed);
  out.passed = r.passed();
  out.is_shortcut = r.is_shortcut();
  return out;
}

tr2l_work_atom from_atom(const tr2l::WorkAtom &a) {
  return {a.initial, a.final, a.work, a.probability};
}

} // namespace

extern "C" {

const char *tr2l_version(void) { return "1.0.0"; }

const char *tr2l_status_string(tr2l_status status) {
  switch (status) {
  case TR2L_OK:
    return "ok";
  case TR2L_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case TR2L_ERR_DOMAIN:
    return "domain error";
  case TR2L_ERR_CONVERGENCE:
    return "convergence failure";
  case TR2L_ERR_DEGENERATE:
    return "degenerate Hamiltonian";
  case TR2L_ERR_NON_UNITARY:
    return "non-unitary evolution operator";
  case TR2L_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *tr2l_last_error(void) { return last_error.c_str(); }

void tr2l_ae_params_default(tr2l_ae_params *out) {
  if (out == nullptr)
    return;
  const tr2l::AEParams p;
  *out = {p.omega0, p.beta_chirp, p.t0};
}

void tr2l_grid_policy_default(tr2l_grid_policy *out) {
  if (out == nullptr)
    return;
  const tr2l::GridPolicy p;
  *out = {p.reference_steps, p.rescaled_steps};
}

tr2l_status tr2l_rescale_eval(double a, double t_f, double tau, double *out) {
  if (any_null(out))
    return null_argument();
  return guarded([&] { *out = tr2l::RescaleMap(a, t_f).eval(tau); });
}

tr2l_status tr2l_rescale_derivative(double a, double t_f, double tau, double *out) {
  if (any_null(out))
    return null_argument();
  return guarded([&] { *out = tr2l::RescaleMap(a, t_f).derivative(tau); });
}

tr2l_status tr2l_rescale_inverse(double a, double t_f, double t, double *out) {
  if (any_null(out))
    return null_argument();
  return guarded([&] { *out = tr2l::RescaleMap(a, t_f).inverse(t); });
}

tr2l_status tr2l_rescale_validate(double a, double t_f, double tol,
                                  tr2l_rescale_report *out) {
  if (any_null(out))
    return null_argument();
  return guarded([&] {
    *out = from_report(tr2l::validate_map(tr2l::RescaleMap(a, t_f), tol));
  });
}

tr2l_status tr2l_drive_create_reference(const tr2l_ae_params *params,
                                        tr2l_drive **out) {
  if (any_null(params, out))
    return null_argument();
  return guarded([&] {
    *out = new tr2l_drive{tr2l::reference_drive(to_params(*params))};
  });
}

tr2l_status tr2l_drive_create_rescaled(const tr2l_ae_params *params, double a,
                                       double eps, double delta,
                                       tr2l_drive **out) {
  if (any_null(params, out))
    return null_argument();
  return guarded([&] {
    const tr2l::AEParams p = to_params(*params).with_errors(eps, delta);
    *out = new tr2l_drive{tr2l::rescaled_drive(p, a)};
  });
}

tr2l_status tr2l_drive_create_constant(const tr2l_drive_sample *sample,
                                       double t_start, double t_end,
                                       tr2l_drive **out) {
  if (any_null(sample, out))
    return null_argument();
  return guarded([&] {
    *out = new tr2l_drive{tr2l::constant_drive(to_sample(*sample), t_start, t_end)};
  });
}

void tr2l_drive_destroy(tr2l_drive *drive) { delete drive; }

tr2l_status tr2l_drive_window(const tr2l_drive *drive, double *t_start,
                              double *t_end) {
  if (any_null(drive, t_start, t_end))
    return null_argument();
  *t_start = drive->drive.t_start();
  *t_end = drive->drive.t_end();
  return TR2L_OK;
}

tr2l_status tr2l_drive_sample_at(const tr2l_drive *drive, double t,
                                 tr2l_drive_sample *out) {
  if (any_null(drive, out))
    return null_argument();
  return guarded([&] { *out = from_sample(drive->drive(t)); });
}

tr2l_status tr2l_adiabaticity_metric(const tr2l_drive *drive, double t,
                                     double *out) {
  if (any_null(drive, out))
    return null_argument();
  return guarded([&] { *out = tr2l::adiabaticity_metric(drive->drive, t); });
}

tr2l_status tr2l_hamiltonian(const tr2l_drive_sample *sample, tr2l_matrix2 *out) {
  if (any_null(sample, out))
    return null_argument();
  return guarded([&] { *out = from_matrix(tr2l::hamiltonian(to_sample(*sample))); });
}

tr2l_status tr2l_eigensystem_of(const tr2l_drive_sample *sample,
                                tr2l_eigensystem *out) {
  if (any_null(sample, out))
    return null_argument();
  return guarded([&] {
    const tr2l::Eigensystem2 e = tr2l::eigensystem(to_sample(*sample));
    *out = {e.theta, e.omega_gen, e.e_plus, e.e_minus, from_vector(e.n_plus),
            from_vector(e.n_minus)};
  });
}

tr2l_status tr2l_adiabatic_populations(const tr2l_ae_params *params, double t,
                                       double *p1, double *p2) {
  if (any_null(params, p1, p2))
    return null_argument();
  return guarded([&] {
    const tr2l::Populations p = tr2l::adiabatic_populations(t, to_params(*params));
    *p1 = p.p1;
    *p2 = p.p2;
  });
}

tr2l_status tr2l_step_propagator(const tr2l_drive_sample *sample, double dt,
                                 tr2l_propagator *out) {
  if (any_null(sample, out))
    return null_argument();
  return guarded([&] {
    *out = from_propagator(tr2l::step_propagator(to_sample(*sample), dt));
  });
}

tr2l_status tr2l_evolve(const tr2l_drive *drive, size_t steps,
                        tr2l_propagator *out) {
  if (any_null(drive, out))
    return null_argument();
  return guarded([&] { *out = from_propagator(tr2l::evolve(drive->drive, steps)); });
}

tr2l_status tr2l_propagator_distance(const tr2l_matrix2 *u1, const tr2l_matrix2 *u2,
                                     double *distance, double *phase) {
  if (any_null(u1, u2, distance))
    return null_argument();
  return guarded([&] {
    const tr2l::Matrix2c a = to_matrix(*u1);
    const tr2l::Matrix2c b = to_matrix(*u2);
    *distance = tr2l::propagator_distance(a, b);
    if (phase != nullptr)
      *phase = tr2l::propagator_phase_difference(a, b);
  });
}

tr2l_status tr2l_trajectory_create(const tr2l_drive *drive, size_t steps,
                                   const tr2l_state *psi0, tr2l_trajectory **out) {
  if (any_null(drive, out))
    return null_argument();
  return guarded([&] {
    tr2l::PureState2 start = tr2l::PureState2::ground();
    if (psi0 != nullptr)
      start.amplitudes << tr2l::Complex(psi0->c1_re, psi0->c1_im),
          tr2l::Complex(psi0->c2_re, psi0->c2_im);
    const tr2l::TimeGrid grid = tr2l::TimeGrid::over(drive->drive, steps);
    const auto states = tr2l::evolve_trajectory(drive->drive, grid, start);
    auto traj = std::make_unique<tr2l_trajectory>();
    traj->points.reserve(states.size());
    for (const tr2l::TrajectoryPoint &pt : states) {
      const tr2l::Populations pop = tr2l::populations(pt.state);
      const tr2l::DriveSample s = drive->drive(pt.time);
      traj->points.push_back(
          {pt.time, pop.p1, pop.p2, s.rabi, s.detuning, from_vector(pt.state.amplitudes)});
    }
    *out = traj.release();
  });
}

void tr2l_trajectory_destroy(tr2l_trajectory *trajectory) { delete trajectory; }

size_t tr2l_trajectory_size(const tr2l_trajectory *trajectory) {
  return trajectory == nullptr ? 0 : trajectory->points.size();
}

tr2l_status tr2l_trajectory_point_at(const tr2l_trajectory *trajectory,
                                     size_t index, tr2l_trajectory_point *out) {
  if (any_null(trajectory, out))
    return null_argument();
  if (index >= trajectory->points.size())
    return fail(TR2L_ERR_INVALID_ARGUMENT, "trajectory index out of range");
  *out = trajectory->points[index];
  return TR2L_OK;
}

tr2l_status tr2l_check_protocol(const tr2l_ae_params *params, double a,
                                const tr2l_grid_policy *policy,
                                tr2l_protocol_check *out) {
  if (any_null(params, out))
    return null_argument();
  return guarded([&] {
    const tr2l::ProtocolCheck c =
        tr2l::check_protocol(to_params(*params), a, to_policy(policy));
    tr2l_protocol_check r{};
    r.a = c.a;
    r.map = from_report(c.map);
    r.composition_rabi = c.composition_rabi;
    r.composition_detuning = c.composition_detuning;
    r.boundary_rabi = c.boundary_rabi;
    r.boundary_detuning = c.boundary_detuning;
    r.peak_checked = c.peak_checked;
    r.peak_rabi = c.peak_rabi;
    r.peak_expected = c.peak_expected;
    r.peak_time = c.peak_time;
    r.reference_steps = c.reference_steps;
    r.rescaled_steps = c.rescaled_steps;
    r.propagator_distance = c.propagator_distance;
    r.phase_difference = c.phase_difference;
    r.reference_p2 = c.reference_p2;
    r.rescaled_p2 = c.rescaled_p2;
    r.map_ok = c.map_ok();
    r.composition_ok = c.composition_ok();
    r.boundary_ok = c.boundary_ok();
    r.peak_ok = c.peak_ok();
    r.equality_ok = c.equality_ok();
    r.passed = c.passed();
    *out = r;
  });
}

tr2l_status tr2l_fidelity(const tr2l_ae_params *params, double a, double eps,
                          double delta, const tr2l_grid_policy *policy,
                          double *out) {
  if (any_null(params, out))
    return null_argument();
  return guarded([&] {
    *out = tr2l::fidelity(to_params(*params), a, eps, delta, to_policy(policy));
  });
}

double tr2l_pi_pulse_fidelity(double eps) { return tr2l::pi_pulse_fidelity(eps); }

tr2l_status tr2l_sweep_run(const tr2l_ae_params *params, tr2l_error_kind kind,
                           const double *values, size_t n_values,
                           const double *a_values, size_t n_a,
                           const tr2l_grid_policy *policy, tr2l_sweep **out) {
  if (any_null(params, out) || (n_values > 0 && values == nullptr) ||
      (n_a > 0 && a_values == nullptr))
    return null_argument();
  if (kind != TR2L_ERROR_RABI && kind != TR2L_ERROR_DETUNING)
    return fail(TR2L_ERR_INVALID_ARGUMENT, "unknown error kind");
  return guarded([&] {
    tr2l::SweepSpec spec;
    spec.kind = kind == TR2L_ERROR_DETUNING ? tr2l::ErrorKind::detuning
                                            : tr2l::ErrorKind::rabi;
    spec.values.assign(values, values + n_values);
    spec.a_values.assign(a_values, a_values + n_a);
    spec.base = to_params(*params);
    spec.grid = to_policy(policy);
    *out = new tr2l_sweep{tr2l::sweep(spec)};
  });
}

void tr2l_sweep_destroy(tr2l_sweep *sweep) { delete sweep; }

size_t tr2l_sweep_size(const tr2l_sweep *sweep) {
  return sweep == nullptr ? 0 : sweep->result.rows.size();
}

tr2l_status tr2l_sweep_row_at(const tr2l_sweep *sweep, size_t index,
                              tr2l_sweep_row *out) {
  if (any_null(sweep, out))
    return null_argument();
  if (index >= sweep->result.rows.size())
    return fail(TR2L_ERR_INVALID_ARGUMENT, "sweep index out of range");
  const tr2l::SweepRow &row = sweep->result.rows[index];
  *out = {row.a, row.error, row.fidelity, std::isfinite(row.fidelity) ? 1 : 0};
  return TR2L_OK;
}

size_t tr2l_sweep_failure_count(const tr2l_sweep *sweep) {
  return sweep == nullptr ? 0 : sweep->result.failures.size();
}

tr2l_status tr2l_sweep_failure_at(const tr2l_sweep *sweep, size_t i,
                                  size_t *row_index, const char **message) {
  if (any_null(sweep, row_index, message))
    return null_argument();
  if (i >= sweep->result.failures.size())
    return fail(TR2L_ERR_INVALID_ARGUMENT, "failure index out of range");
  *row_index = sweep->result.failures[i].index;
  *message = sweep->result.failures[i].message.c_str();
  return TR2L_OK;
}

tr2l_status tr2l_gibbs_probabilities(const tr2l_matrix2 *h_i, double beta_thermal,
                                     double probabilities[2], double energies[2]) {
  if (any_null(h_i, probabilities, energies))
    return null_argument();
  return guarded([&] {
    const tr2l::GibbsState g =
        tr2l::gibbs_state(to_matrix(*h_i), tr2l::ThermalSpec{beta_thermal});
    for (int n = 0; n < 2; ++n) {
      probabilities[n] = g.probabilities[n];
      energies[n] = g.basis.energies[n];
    }
  });
}

tr2l_status tr2l_transition_matrix(const tr2l_matrix2 *u, const tr2l_matrix2 *h_i,
                                   const tr2l_matrix2 *h_f, double out[4]) {
  if (any_null(u, h_i, h_f, out))
    return null_argument();
  return guarded([&] {
    const Eigen::Matrix2d t =
        tr2l::transition_matrix(to_matrix(*u), to_matrix(*h_i), to_matrix(*h_f));
    for (int i = 0; i < 4; ++i)
      out[i] = t(i / 2, i % 2);
  });
}

tr2l_status tr2l_work_distribution(const tr2l_matrix2 *u, const tr2l_matrix2 *h_i,
                                   const tr2l_matrix2 *h_f, double beta_thermal,
                                   tr2l_work_atom out[4]) {
  if (any_null(u, h_i, h_f, out))
    return null_argument();
  return guarded([&] {
    const tr2l::WorkDistribution d =
        tr2l::work_distribution(to_matrix(*u), to_matrix(*h_i), to_matrix(*h_f),
                                tr2l::ThermalSpec{beta_thermal});
    for (int k = 0; k < 4; ++k)
      out[k] = from_atom(d.atoms[k]);
  });
}

tr2l_status tr2l_work_moments_of(const tr2l_matrix2 *u, const tr2l_matrix2 *h_i,
                                 const tr2l_matrix2 *h_f, double beta_thermal,
                                 tr2l_work_moments *out) {
  if (any_null(u, h_i, h_f, out))
    return null_argument();
  return guarded([&] {
    const tr2l::WorkMoments m =
        tr2l::moments(to_matrix(*u), to_matrix(*h_i), to_matrix(*h_f),
                      tr2l::ThermalSpec{beta_thermal});
    *out = {m.mean, m.second, m.variance, m.fluctuation};
  });
}

tr2l_status tr2l_work_characteristic(double r, const tr2l_matrix2 *u,
                                     const tr2l_matrix2 *h_i,
                                     const tr2l_matrix2 *h_f, double beta_thermal,
                                     double *re, double *im) {
  if (any_null(u, h_i, h_f, re, im))
    return null_argument();
  return guarded([&] {
    const tr2l::Complex chi =
        tr2l::characteristic_function(r, to_matrix(*u), to_matrix(*h_i),
                                      to_matrix(*h_f), tr2l::ThermalSpec{beta_thermal});
    *re = chi.real();
    *im = chi.imag();
  });
}

tr2l_status tr2l_protocol_work_atoms(const tr2l_ae_params *params, double a,
                                     double beta_thermal,
                                     const tr2l_grid_policy *policy,
                                     tr2l_work_atom out[4]) {
  if (any_null(params, out))
    return null_argument();
  return guarded([&] {
    const tr2l::GridPolicy grid = to_policy(policy);
    const tr2l::ProtocolRun run =
        tr2l::run_protocol(tr2l::rescaled_drive(to_params(*params), a), grid.steps_for(a));
    const tr2l::WorkDistribution d =
        tr2l::work_distribution(run.propagator.u, run.h_initial, run.h_final,
                                tr2l::ThermalSpec{beta_thermal});
    for (int k = 0; k < 4; ++k)
      out[k] = from_atom(d.atoms[k]);
  });
}

tr2l_status tr2l_work_compare(const tr2l_ae_params *params, const double *a_values,
                              size_t n_a, const double *betas, size_t n_beta,
                              const tr2l_grid_policy *policy,
                              tr2l_work_report **out) {
  if (any_null(params, out) || (n_a > 0 && a_values == nullptr) ||
      (n_beta > 0 && betas == nullptr))
    return null_argument();
  return guarded([&] {
    *out = new tr2l_work_report{tr2l::compare_protocols(
        to_params(*params), std::vector<double>(a_values, a_values + n_a),
        std::vector<double>(betas, betas + n_beta), to_policy(policy))};
  });
}

void tr2l_work_report_destroy(tr2l_work_report *report) { delete report; }

size_t tr2l_work_report_size(const tr2l_work_report *report) {
  return report == nullptr ? 0 : report->report.rows.size();
}

tr2l_status tr2l_work_report_row_at(const tr2l_work_report *report, size_t index,
                                    tr2l_work_row *out) {
  if (any_null(report, out))
    return null_argument();
  if (index >= report->report.rows.size())
    return fail(TR2L_ERR_INVALID_ARGUMENT, "report index out of range");
  const tr2l::EqualityRow &r = report->report.rows[index];
  *out = {r.a,
          r.beta_thermal,
          r.reference.mean,
          r.rescaled.mean,
          r.reference.fluctuation,
          r.rescaled.fluctuation,
          r.mean_gap,
          r.fluctuation_gap,
          r.propagator_distance,
          r.within() ? 1 : 0};
  return TR2L_OK;
}

double tr2l_work_equality_tolerance(void) { return tr2l::kWorkEqualityTolerance; }

} // extern "C"
