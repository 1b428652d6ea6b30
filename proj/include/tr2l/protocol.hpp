#pragma once

#include <functional>

#include "tr2l/linalg.hpp"
#include "tr2l/rescale.hpp"

namespace tr2l {

/// Allen-Eberly pulse parameters. The protocol window is [0, 8 t0].
struct AEParams {
  double omega0 = 2.0;        // peak Rabi frequency
  double beta_chirp = 1.4142135623730951; // chirp constant, enters as beta^2 t0
  double t0 = 1.0;            // characteristic timescale

  double t_f() const { return 8.0 * t0; }
  /// Detuning envelope 2 beta^2 t0 / pi.
  double chirp_amplitude() const;

  /// Copy with Omega0 -> Omega0 (1 + eps) and beta^2 -> beta^2 (1 + delta).
  AEParams with_errors(double eps, double delta) const;

  /// Throws InvalidArgument unless every field is finite and positive.
  void validate() const;
};

struct DriveSample {
  double rabi = 0.0;
  double detuning = 0.0;
  double phase = 0.0;
};

/// A drive defined on a closed window [t_start, t_end]. Sampling outside the
/// window throws DomainError. `rate` returns the time derivative of the
/// rabi and detuning channels (phase rate is left at zero) when the drive
/// knows it analytically.
class Drive {
public:
  using Sampler = std::function<DriveSample(double)>;

  Drive(double t_start, double t_end, Sampler sample, Sampler rate = {});

  DriveSample operator()(double t) const;
  DriveSample rate(double t) const;
  bool has_rate() const { return static_cast<bool>(rate_); }

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double duration() const { return t_end_ - t_start_; }

private:
  double clamp_to_window(double t) const;

  double t_start_;
  double t_end_;
  Sampler sample_;
  Sampler rate_;
};

// Allen-Eberly reference drive on [0, t_f].
double ae_rabi(double t, const AEParams &p);
double ae_detuning(double t, const AEParams &p);

// Time-rescaled drive on [0, t_f / a]. `map` must share t_f with `p`.
double tr_rabi(double tau, const AEParams &p, const RescaleMap &map);
double tr_detuning(double tau, const AEParams &p, const RescaleMap &map);

Drive reference_drive(const AEParams &p);
Drive rescaled_drive(const AEParams &p, const RescaleMap &map);
/// rescaled_drive(p, RescaleMap(a, p.t_f())); a = 1 gives the reference.
Drive rescaled_drive(const AEParams &p, double a);
Drive constant_drive(const DriveSample &s, double t_start, double t_end);

/// (1/2) [[Delta, Omega_R e^{i phi}], [Omega_R e^{-i phi}, -Delta]], hbar = 1.
Matrix2c hamiltonian(const DriveSample &s);

struct Eigensystem2 {
  double theta = 0.0;     // arccos(Delta / Omega)
  double omega_gen = 0.0; // sqrt(Delta^2 + Omega_R^2)
  double e_plus = 0.0;
  double e_minus = 0.0;
  Vector2c n_plus;
  Vector2c n_minus;
};

/// Instantaneous eigensystem with H n_pm = (+-Omega/2) n_pm:
///   n_+ = ( cos(theta/2),  e^{-i phi} sin(theta/2) )
///   n_- = ( sin(theta/2), -e^{-i phi} cos(theta/2) )
/// Throws DegenerateError when Omega = 0.
Eigensystem2 eigensystem(const DriveSample &s);

struct Populations {
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Adiabatic populations sin^2(theta/2), cos^2(theta/2) of the eigenstate
/// that starts close to |1> (Delta(0) < 0).
Populations adiabatic_populations(double t, const AEParams &p);

/// |Omega_R dDelta/dt - dOmega_R/dt Delta| / Omega^3 with analytic rates.
double adiabaticity_metric(const Drive &drive, double t);
double adiabaticity_metric(double t, const AEParams &p);

} // namespace tr2l
