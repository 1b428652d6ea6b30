#include "tr2l/propagate.hpp"

#include <cmath>
#include <sstream>

#include "tr2l/error.hpp"

namespace tr2l {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end))
    throw InvalidArgument("time grid bounds must be finite");
  if (n_steps == 0) {
    if (t_end != t_start)
      throw InvalidArgument("a grid with zero steps must have t_end == t_start");
    return;
  }
  if (!(t_end > t_start))
    throw InvalidArgument("time grid needs t_end > t_start");
}

TimeGrid TimeGrid::over(const Drive &drive, std::size_t n_steps) {
  return TimeGrid(drive.t_start(), drive.t_end(), n_steps);
}

double TimeGrid::dt() const {
  return n_steps_ == 0 ? 0.0 : (t_end_ - t_start_) / static_cast<double>(n_steps_);
}

double TimeGrid::node(std::size_t k) const {
  if (k >= n_steps_)
    return t_end_;
  return t_start_ + (t_end_ - t_start_) * (static_cast<double>(k) / n_steps_);
}

double TimeGrid::midpoint(std::size_t k) const {
  return t_start_ +
         (t_end_ - t_start_) * ((static_cast<double>(k) + 0.5) / n_steps_);
}

Propagator2 step_propagator(const DriveSample &s, double dt) {
  Propagator2 out;
  out.t_end = dt;
  out.steps = 1;
  const double omega = std::hypot(s.detuning, s.rabi);
  if (omega == 0.0)
    return out;

  // H = (Omega/2) n.sigma, so exp(-i H dt) = cos(eta) I - i sin(eta) n.sigma
  // with eta = Omega dt / 2.
  const double eta = 0.5 * omega * dt;
  const double c = std::cos(eta);
  const double sn = std::sin(eta);
  const Complex coupling = (s.rabi / omega) * std::polar(1.0, s.phase);
  const double nz = s.detuning / omega;
  const Complex minus_i(0.0, -1.0);
  out.u(0, 0) = Complex(c, -sn * nz);
  out.u(1, 1) = Complex(c, sn * nz);
  out.u(0, 1) = minus_i * sn * coupling;
  out.u(1, 0) = minus_i * sn * std::conj(coupling);
  return out;
}

Propagator2 evolve(const Drive &drive, const TimeGrid &grid) {
  Propagator2 out;
  out.t_start = grid.t_start();
  out.t_end = grid.t_end();
  out.steps = grid.n_steps();
  const double dt = grid.dt();
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    const Matrix2c step = step_propagator(drive(grid.midpoint(k)), dt).u;
    out.u = (step * out.u).eval();
  }
  return out;
}

Propagator2 evolve(const Drive &drive, std::size_t n_steps) {
  return evolve(drive, TimeGrid::over(drive, n_steps));
}

std::vector<TrajectoryPoint> evolve_trajectory(const Drive &drive,
                                               const TimeGrid &grid,
                                               const PureState2 &psi0) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw InvalidArgument("initial state must be normalized");
  std::vector<TrajectoryPoint> out;
  out.reserve(grid.n_steps() + 1);
  out.push_back({grid.t_start(), psi0});
  Vector2c psi = psi0.amplitudes;
  const double dt = grid.dt();
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    psi = (step_propagator(drive(grid.midpoint(k)), dt).u * psi).eval();
    out.push_back({grid.node(k + 1), PureState2{psi}});
  }
  return out;
}

Populations populations(const PureState2 &psi) {
  return {std::norm(psi.c1()), std::norm(psi.c2())};
}

double propagator_phase_difference(const Matrix2c &u1, const Matrix2c &u2) {
  // ||u1 - e^{ia} u2||^2 = |u1|^2 + |u2|^2 - 2 Re(e^{ia} tr(u1^dag u2));
  // minimized by a = -arg tr(u1^dag u2).
  const Complex overlap = (u1.adjoint() * u2).trace();
  if (std::abs(overlap) == 0.0)
    return 0.0;
  return -std::arg(overlap);
}

double propagator_distance(const Matrix2c &u1, const Matrix2c &u2) {
  // Evaluate the residual explicitly; the closed form
  // sqrt(|u1|^2 + |u2|^2 - 2|tr|) loses everything below ~1e-8.
  const double alpha = propagator_phase_difference(u1, u2);
  return (u1 - std::polar(1.0, alpha) * u2).norm();
}

double propagator_distance(const Propagator2 &u1, const Propagator2 &u2) {
  return propagator_distance(u1.u, u2.u);
}

} // namespace tr2l
