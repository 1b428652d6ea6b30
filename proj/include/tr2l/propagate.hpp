#pragma once

#include <cstddef>
#include <vector>

#include "tr2l/linalg.hpp"
#include "tr2l/protocol.hpp"

namespace tr2l {

/// Normalized state c1 |1> + c2 |2>.
struct PureState2 {
  Vector2c amplitudes = Vector2c(1.0, 0.0);

  static PureState2 ground() { return {Vector2c(1.0, 0.0)}; }
  static PureState2 excited() { return {Vector2c(0.0, 1.0)}; }

  Complex c1() const { return amplitudes(0); }
  Complex c2() const { return amplitudes(1); }
  double norm() const { return amplitudes.norm(); }
};

struct Propagator2 {
  Matrix2c u = Matrix2c::Identity();
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t steps = 0;

  /// |<to|U|from>|^2 in the {|1>, |2>} basis (0-based indices).
  double transition_probability(int from, int to) const {
    return std::norm(u(to, from));
  }
};

/// Uniform grid t_k = t_start + k (t_end - t_start) / n_steps.
/// n_steps == 0 is only allowed for the single-node grid t_end == t_start.
class TimeGrid {
public:
  TimeGrid(double t_start, double t_end, std::size_t n_steps);

  /// The grid covering a drive's whole window.
  static TimeGrid over(const Drive &drive, std::size_t n_steps);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::size_t n_steps() const { return n_steps_; }
  double dt() const;
  double node(std::size_t k) const;
  double midpoint(std::size_t k) const;

private:
  double t_start_;
  double t_end_;
  std::size_t n_steps_;
};

/// exp(-i H(s) dt) in closed form. Exactly unitary up to rounding.
Propagator2 step_propagator(const DriveSample &s, double dt);

/// Ordered product of midpoint-sampled step propagators (second order).
Propagator2 evolve(const Drive &drive, const TimeGrid &grid);
Propagator2 evolve(const Drive &drive, std::size_t n_steps);

struct TrajectoryPoint {
  double time = 0.0;
  PureState2 state;
};

/// States at every grid node, starting from psi0 at t_start.
std::vector<TrajectoryPoint> evolve_trajectory(const Drive &drive,
                                               const TimeGrid &grid,
                                               const PureState2 &psi0);

/// (|c1|^2, |c2|^2).
Populations populations(const PureState2 &psi);

/// min over alpha of ||u1 - e^{i alpha} u2||_F.
double propagator_distance(const Matrix2c &u1, const Matrix2c &u2);
double propagator_distance(const Propagator2 &u1, const Propagator2 &u2);

/// The global phase alpha in (-pi, pi] that minimizes the distance above.
double propagator_phase_difference(const Matrix2c &u1, const Matrix2c &u2);

} // namespace tr2l
