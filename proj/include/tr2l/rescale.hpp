#pragma once

#include <string>
#include <vector>

namespace tr2l {

/// Relative root tolerance used by RescaleMap::inverse (times t_f).
inline constexpr double kRootTolerance = 1e-12;

/// The time-rescaling function
///
///   f(tau) = a tau - (a - 1) t_f / (2 pi a) sin(2 pi a tau / t_f)
///
/// mapping the rescaled time tau in [0, t_f/a] onto the reference time
/// t in [0, t_f]. f(0) = 0, f(t_f/a) = t_f and f'(0) = f'(t_f/a) = 1, so the
/// rescaled Hamiltonian H[f(tau)] f'(tau) starts and ends on the reference
/// Hamiltonian.
class RescaleMap {
public:
  /// Throws InvalidArgument unless a > 0 and t_f > 0.
  RescaleMap(double a, double t_f);

  double contraction() const { return a_; }
  double reference_duration() const { return t_f_; }
  /// Length t_f / a of the rescaled window.
  double duration() const { return t_f_ / a_; }

  /// f(tau). Throws DomainError outside [0, t_f/a].
  double eval(double tau) const;
  /// f'(tau) = a - (a - 1) cos(2 pi a tau / t_f).
  double derivative(double tau) const;
  /// f''(tau), used for analytic drive rates.
  double second_derivative(double tau) const;

  /// Solves f(tau) = t for t in [0, t_f]. Needs a >= 1/2 so that f is
  /// strictly increasing; throws DomainError otherwise and ConvergenceError
  /// if |f(tau) - t| <= kRootTolerance * t_f is not reached.
  double inverse(double t) const;

  /// True when f is invertible on its window (a >= 1/2).
  bool invertible() const { return a_ >= 0.5; }

private:
  double phase(double tau) const;
  void check_window(double tau) const;

  double a_;
  double t_f_;
};

enum class Speed { faster, same, slower };

/// Residuals of the four shortcut properties of a RescaleMap.
struct ValidationReport {
  double a = 1.0;
  double t_f = 0.0;
  double tolerance = 0.0;

  double initial_time_residual = 0.0; // |f^-1(0)|
  double final_time = 0.0;            // f^-1(t_f)
  double initial_rate_residual = 0.0; // |f'(f^-1(0)) - 1|
  double final_rate_residual = 0.0;   // |f'(f^-1(t_f)) - 1|
  double min_rate = 0.0;              // min f' over a dense grid
  double max_rate = 0.0;

  bool same_start = false;     // f^-1(0) = 0
  bool same_initial_h = false; // f'(0) = 1
  bool same_final_h = false;   // f'(t_f/a) = 1
  bool rate_bound = false; // f' >= 1 - tol for a >= 1, f' >= -tol otherwise
  Speed speed = Speed::same; // faster when f^-1(t_f) < t_f

  bool passed() const {
    return same_start && same_initial_h && same_final_h && rate_bound;
  }
  bool is_shortcut() const { return passed() && speed == Speed::faster; }
  std::vector<std::string> warnings() const;
};

/// Checks the start, endpoint and rate properties of the map. Never throws for a valid map;
/// failures are carried in the report.
ValidationReport validate_map(const RescaleMap &map, double tol,
                              int grid_points = 10001);

} // namespace tr2l
