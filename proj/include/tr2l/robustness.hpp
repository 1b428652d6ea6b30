#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tr2l/grid_policy.hpp"
#include "tr2l/protocol.hpp"

namespace tr2l {

enum class ErrorKind { rabi, detuning };

const char *to_string(ErrorKind kind);

/// Population of |2> after driving |1> with the rescaled pulse built from
/// Omega0 (1 + eps) and beta^2 (1 + delta).
double fidelity(const AEParams &params, const RescaleMap &map, double eps,
                double delta, std::size_t n_steps);
double fidelity(const AEParams &params, double a, double eps, double delta,
                const GridPolicy &policy = {});

/// sin^2((1 + eps) pi / 2): a square resonant pi pulse with area error eps.
double pi_pulse_fidelity(double eps);

/// `count` evenly spaced values on [lo, hi] (endpoints included).
std::vector<double> uniform_values(double lo, double hi, std::size_t count);

struct SweepSpec {
  ErrorKind kind = ErrorKind::rabi;
  std::vector<double> values = uniform_values(-0.2, 0.2, 41);
  std::vector<double> a_values = {1.0, 2.0, 10.0};
  AEParams base;
  GridPolicy grid;

  /// Throws InvalidArgument on empty lists, error values <= -1 or a <= 0.
  void validate() const;
};

struct SweepRow {
  double a = 1.0;
  double error = 0.0;
  double fidelity = 0.0;
};

struct SweepFailure {
  std::size_t index = 0;
  std::string message;
};

/// Rows ordered by (a index, error index) as listed in the SweepSpec.
struct SweepResult {
  ErrorKind kind = ErrorKind::rabi;
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> failures;

  bool ok() const { return failures.empty(); }
};

SweepResult sweep(const SweepSpec &spec);

} // namespace tr2l
