#include "tr2l/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tr2l/error.hpp"
#include "tr2l/linalg.hpp"

namespace tr2l {

namespace {

constexpr double kBisectionTolerance = 1e-6;
constexpr int kMaxBisection = 200;
constexpr int kMaxNewton = 100;

} // namespace

RescaleMap::RescaleMap(double a, double t_f) : a_(a), t_f_(t_f) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw InvalidArgument("contraction parameter a must be positive");
  if (!(t_f > 0.0) || !std::isfinite(t_f))
    throw InvalidArgument("reference duration t_f must be positive");
}

double RescaleMap::phase(double tau) const {
  return 2.0 * kPi * a_ * tau / t_f_;
}

void RescaleMap::check_window(double tau) const {
  if (!(tau >= 0.0 && tau <= duration())) {
    std::ostringstream msg;
    msg << "rescaled time " << tau << " outside [0, " << duration() << "]";
    throw DomainError(msg.str());
  }
}

double RescaleMap::eval(double tau) const {
  check_window(tau);
  if (tau == duration())
    return t_f_;
  return a_ * tau - (a_ - 1.0) / (2.0 * kPi * a_) * t_f_ * std::sin(phase(tau));
}

double RescaleMap::derivative(double tau) const {
  check_window(tau);
  if (tau == duration())
    return 1.0;
  return a_ - (a_ - 1.0) * std::cos(phase(tau));
}

double RescaleMap::second_derivative(double tau) const {
  check_window(tau);
  return (a_ - 1.0) * 2.0 * kPi * a_ / t_f_ * std::sin(phase(tau));
}

double RescaleMap::inverse(double t) const {
  if (!invertible())
    throw DomainError("f is not monotone for a < 1/2; inverse undefined");
  if (!(t >= 0.0 && t <= t_f_)) {
    std::ostringstream msg;
    msg << "reference time " << t << " outside [0, " << t_f_ << "]";
    throw DomainError(msg.str());
  }
  if (t == 0.0)
    return 0.0;
  if (t == t_f_)
    return duration();

  const double abs_tol = kRootTolerance * t_f_;
  double lo = 0.0;
  double hi = duration();
  for (int i = 0; i < kMaxBisection && hi - lo > kBisectionTolerance * duration(); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) < t)
      lo = mid;
    else
      hi = mid;
  }

  // Newton polish, kept inside the bracket. f' >= min(1, 2a - 1) away from
  // isolated zeros at a = 1/2.
  double tau = 0.5 * (lo + hi);
  for (int i = 0; i < kMaxNewton; ++i) {
    const double residual = eval(tau) - t;
    if (std::abs(residual) <= abs_tol)
      return tau;
    if (residual < 0.0)
      lo = tau;
    else
      hi = tau;
    const double slope = derivative(tau);
    double next = slope > 0.0 ? tau - residual / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    if (next == tau)
      break;
    tau = next;
  }
  if (std::abs(eval(tau) - t) <= abs_tol)
    return tau;
  std::ostringstream msg;
  msg << "inverse of f did not converge at t = " << t << " (a = " << a_ << ")";
  throw ConvergenceError(msg.str());
}

std::vector<std::string> ValidationReport::warnings() const {
  std::vector<std::string> out;
  if (speed == Speed::slower)
    out.emplace_back("slower than reference (a < 1): not a shortcut");
  if (speed == Speed::same)
    out.emplace_back("same duration as reference (a = 1)");
  if (!rate_bound)
    out.emplace_back(a < 0.5 ? "f is not monotone (a < 1/2)"
                             : "f' drops below 1 on the window");
  return out;
}

ValidationReport validate_map(const RescaleMap &map, double tol,
                              int grid_points) {
  ValidationReport r;
  r.a = map.contraction();
  r.t_f = map.reference_duration();
  r.tolerance = tol;

  double start = 0.0;
  double end = map.duration();
  if (map.invertible()) {
    start = map.inverse(0.0);
    end = map.inverse(r.t_f);
  }
  r.initial_time_residual = std::abs(start);
  r.final_time = end;
  r.initial_rate_residual = std::abs(map.derivative(start) - 1.0);
  r.final_rate_residual = std::abs(map.derivative(end) - 1.0);

  grid_points = std::max(grid_points, 2);
  r.min_rate = std::numeric_limits<double>::infinity();
  r.max_rate = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_points; ++k) {
    const double tau = map.duration() * k / (grid_points - 1);
    const double rate = map.derivative(tau);
    r.min_rate = std::min(r.min_rate, rate);
    r.max_rate = std::max(r.max_rate, rate);
  }

  r.same_start = r.initial_time_residual <= tol * r.t_f;
  r.same_initial_h = r.initial_rate_residual <= tol;
  r.same_final_h = r.final_rate_residual <= tol;
  r.rate_bound = r.a >= 1.0 ? r.min_rate >= 1.0 - tol
                            : (r.a >= 0.5 && r.min_rate >= -tol);

  if (r.a > 1.0 && end < r.t_f)
    r.speed = Speed::faster;
  else if (r.a < 1.0)
    r.speed = Speed::slower;
  else
    r.speed = Speed::same;
  return r;
}

} // namespace tr2l
