#include "tr2l/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "tr2l/error.hpp"

namespace tr2l {

namespace {

void check_reference_window(double t, const AEParams &p) {
  if (!(t >= 0.0 && t <= p.t_f())) {
    std::ostringstream msg;
    msg << "time " << t << " outside reference window [0, " << p.t_f() << "]";
    throw DomainError(msg.str());
  }
}

void check_compatible(const AEParams &p, const RescaleMap &map) {
  if (map.reference_duration() != p.t_f())
    throw InvalidArgument("rescale map t_f does not match 8 t0 of the pulse");
}

void check_rescaled_window(double tau, const RescaleMap &map) {
  if (!(tau >= 0.0 && tau <= map.duration())) {
    std::ostringstream msg;
    msg << "rescaled time " << tau << " outside [0, " << map.duration() << "]";
    throw DomainError(msg.str());
  }
}

// pi / (2 t0)
double pulse_rate(const AEParams &p) { return kPi / (2.0 * p.t0); }

double sech(double x) { return 1.0 / std::cosh(x); }

// Reference envelope shapes and their derivatives with respect to t.
struct Shapes {
  double rabi;
  double detuning;
  double rabi_rate;
  double detuning_rate;
};

Shapes reference_shapes(double t, const AEParams &p) {
  const double k = pulse_rate(p);
  const double x = k * (t - 4.0 * p.t0);
  const double s = sech(x);
  const double th = std::tanh(x);
  const double amp = p.chirp_amplitude();
  return {p.omega0 * s, amp * th, -p.omega0 * k * s * th, amp * k * s * s};
}

} // namespace

double AEParams::chirp_amplitude() const {
  return 2.0 * beta_chirp * beta_chirp * t0 / kPi;
}

AEParams AEParams::with_errors(double eps, double delta) const {
  if (!(eps > -1.0) || !(delta > -1.0))
    throw InvalidArgument("systematic error fractions must exceed -1");
  AEParams out = *this;
  out.omega0 = omega0 * (1.0 + eps);
  out.beta_chirp = beta_chirp * std::sqrt(1.0 + delta);
  return out;
}

void AEParams::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(omega0))
    throw InvalidArgument("omega0 must be positive");
  if (!ok(beta_chirp))
    throw InvalidArgument("beta_chirp must be positive");
  if (!ok(t0))
    throw InvalidArgument("t0 must be positive");
}

Drive::Drive(double t_start, double t_end, Sampler sample, Sampler rate)
    : t_start_(t_start), t_end_(t_end), sample_(std::move(sample)),
      rate_(std::move(rate)) {
  if (!(t_end >= t_start))
    throw InvalidArgument("drive window must satisfy t_end >= t_start");
  if (!sample_)
    throw InvalidArgument("drive needs a sampler");
}

double Drive::clamp_to_window(double t) const {
  // Grid nodes computed in floating point may overshoot the window by an ulp.
  const double slack = 1e-12 * std::max(1.0, std::abs(t_end_ - t_start_));
  if (!(t >= t_start_ - slack && t <= t_end_ + slack)) {
    std::ostringstream msg;
    msg << "time " << t << " outside drive window [" << t_start_ << ", "
        << t_end_ << "]";
    throw DomainError(msg.str());
  }
  return std::clamp(t, t_start_, t_end_);
}

DriveSample Drive::operator()(double t) const {
  return sample_(clamp_to_window(t));
}

DriveSample Drive::rate(double t) const {
  if (!rate_)
    throw InvalidArgument("drive has no analytic rate");
  return rate_(clamp_to_window(t));
}

double ae_rabi(double t, const AEParams &p) {
  check_reference_window(t, p);
  return p.omega0 * sech(pulse_rate(p) * (t - 4.0 * p.t0));
}

double ae_detuning(double t, const AEParams &p) {
  check_reference_window(t, p);
  return p.chirp_amplitude() * std::tanh(pulse_rate(p) * (t - 4.0 * p.t0));
}

namespace {

// f'(tau) and f(tau) - 4 t0 written out as in the closed-form TR drive.
struct Rescaled {
  double speed;
  double argument;
};

Rescaled rescaled_argument(double tau, const AEParams &p, const RescaleMap &map) {
  const double a = map.contraction();
  const double t_f = map.reference_duration();
  const double w = 2.0 * kPi * a / t_f;
  const double speed = a - (a - 1.0) * std::cos(w * tau);
  const double f = a * tau - (a - 1.0) / (2.0 * kPi * a) * t_f * std::sin(w * tau);
  return {speed, pulse_rate(p) * (f - 4.0 * p.t0)};
}

} // namespace

double tr_rabi(double tau, const AEParams &p, const RescaleMap &map) {
  check_compatible(p, map);
  check_rescaled_window(tau, map);
  const Rescaled r = rescaled_argument(tau, p, map);
  return p.omega0 * r.speed * sech(r.argument);
}

double tr_detuning(double tau, const AEParams &p, const RescaleMap &map) {
  check_compatible(p, map);
  check_rescaled_window(tau, map);
  const Rescaled r = rescaled_argument(tau, p, map);
  return p.chirp_amplitude() * r.speed * std::tanh(r.argument);
}

Drive reference_drive(const AEParams &p) {
  p.validate();
  auto sample = [p](double t) {
    return DriveSample{ae_rabi(t, p), ae_detuning(t, p), 0.0};
  };
  auto rate = [p](double t) {
    const Shapes s = reference_shapes(t, p);
    return DriveSample{s.rabi_rate, s.detuning_rate, 0.0};
  };
  return Drive(0.0, p.t_f(), sample, rate);
}

Drive rescaled_drive(const AEParams &p, const RescaleMap &map) {
  p.validate();
  check_compatible(p, map);
  auto sample = [p, map](double tau) {
    return DriveSample{tr_rabi(tau, p, map), tr_detuning(tau, p, map), 0.0};
  };
  // d/dtau [f' g(f)] = f'' g(f) + f'^2 g'(f)
  auto rate = [p, map](double tau) {
    const double f = map.eval(tau);
    const double f1 = map.derivative(tau);
    const double f2 = map.second_derivative(tau);
    const Shapes s = reference_shapes(f, p);
    return DriveSample{f2 * s.rabi + f1 * f1 * s.rabi_rate,
                       f2 * s.detuning + f1 * f1 * s.detuning_rate, 0.0};
  };
  return Drive(0.0, map.duration(), sample, rate);
}

Drive rescaled_drive(const AEParams &p, double a) {
  return rescaled_drive(p, RescaleMap(a, p.t_f()));
}

Drive constant_drive(const DriveSample &s, double t_start, double t_end) {
  return Drive(
      t_start, t_end, [s](double) { return s; },
      [](double) { return DriveSample{}; });
}

Matrix2c hamiltonian(const DriveSample &s) {
  const Complex coupling = s.rabi * std::polar(1.0, s.phase);
  Matrix2c h;
  h << s.detuning, coupling, std::conj(coupling), -s.detuning;
  return 0.5 * h;
}

Eigensystem2 eigensystem(const DriveSample &s) {
  const double omega = std::hypot(s.detuning, s.rabi);
  if (!(omega > 0.0))
    throw DegenerateError("generalized Rabi frequency vanishes; mixing angle undefined");

  // A negative Rabi amplitude is the same coupling with phase shifted by pi.
  const double phase = s.rabi < 0.0 ? s.phase + kPi : s.phase;

  Eigensystem2 e;
  e.omega_gen = omega;
  e.theta = std::acos(std::clamp(s.detuning / omega, -1.0, 1.0));
  e.e_plus = 0.5 * omega;
  e.e_minus = -0.5 * omega;
  const double c = std::cos(0.5 * e.theta);
  const double sn = std::sin(0.5 * e.theta);
  const Complex w = std::polar(1.0, -phase);
  e.n_plus << c, w * sn;
  e.n_minus << sn, -w * c;
  return e;
}

Populations adiabatic_populations(double t, const AEParams &p) {
  const Eigensystem2 e =
      eigensystem(DriveSample{ae_rabi(t, p), ae_detuning(t, p), 0.0});
  const double s = std::sin(0.5 * e.theta);
  const double c = std::cos(0.5 * e.theta);
  return {s * s, c * c};
}

double adiabaticity_metric(const Drive &drive, double t) {
  const DriveSample s = drive(t);
  const DriveSample ds = drive.rate(t);
  const double omega = std::hypot(s.detuning, s.rabi);
  if (!(omega > 0.0))
    throw DegenerateError("generalized Rabi frequency vanishes");
  return std::abs(s.rabi * ds.detuning - ds.rabi * s.detuning) /
         (omega * omega * omega);
}

double adiabaticity_metric(double t, const AEParams &p) {
  return adiabaticity_metric(reference_drive(p), t);
}

} // namespace tr2l
