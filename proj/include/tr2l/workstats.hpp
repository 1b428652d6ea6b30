#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tr2l/grid_policy.hpp"
#include "tr2l/linalg.hpp"
#include "tr2l/protocol.hpp"
#include "tr2l/propagate.hpp"

namespace tr2l {

/// Gaps between reference and rescaled work statistics allowed by
/// compare_protocols.
inline constexpr double kWorkEqualityTolerance = 1e-6;

struct ThermalSpec {
  double beta_thermal = 1.0; // 1 / (k_B T), k_B = hbar = 1
};

/// Eigen-decomposition of a 2x2 Hermitian matrix. Index 0 is the upper level
/// ("+"), index 1 the lower ("-"). Each eigenvector has its first nonzero
/// component real and positive.
struct Eigenbasis2 {
  std::array<double, 2> energies{};
  std::array<Vector2c, 2> vectors;
};

/// Throws InvalidArgument if `h` is not Hermitian within 1e-12.
Eigenbasis2 eigenbasis(const Matrix2c &h);

struct GibbsState {
  Eigenbasis2 basis;
  std::array<double, 2> probabilities{}; // e^{-beta E_n} / Z, (+, -)
  double log_partition_function = 0.0;   // log tr e^{-beta H_i}
  Matrix2c rho;
};

GibbsState gibbs_state(const Matrix2c &h_i, const ThermalSpec &spec);

/// Entry (n, m) is |<m_f|U|n_i>|^2 for initial eigenvector n of h_i and
/// final eigenvector m of h_f (both ordered +, -). Throws NonUnitaryError if
/// ||U^dag U - I||_F > 1e-8.
Eigen::Matrix2d transition_matrix(const Matrix2c &u, const Matrix2c &h_i,
                                  const Matrix2c &h_f);

struct WorkAtom {
  int initial = 0; // index into initial eigenbasis (0 = +, 1 = -)
  int final = 0;
  double work = 0.0;
  double probability = 0.0;
};

struct WorkMoments {
  double mean = 0.0;
  double second = 0.0;
  double variance = 0.0;
  double fluctuation = 0.0;
};

/// Two-point-measurement work distribution: four atoms W = E^f_m - E^i_n
/// with weight P^i_n P_{n->m}, ordered (+,+), (+,-), (-,+), (-,-).
struct WorkDistribution {
  std::array<WorkAtom, 4> atoms;
  std::array<double, 2> initial_energies{};
  std::array<double, 2> final_energies{};

  double total_probability() const;
  /// Moments summed directly over the atoms.
  WorkMoments moments() const;
  /// sum_k p_k e^{i r W_k}
  Complex characteristic(double r) const;
};

WorkDistribution work_distribution(const Matrix2c &u, const Matrix2c &h_i,
                                   const Matrix2c &h_f, const ThermalSpec &spec);

/// tr{U^dag e^{i r H_f} U e^{-i r H_i} rho(0)}
Complex characteristic_function(double r, const Matrix2c &u, const Matrix2c &h_i,
                                const Matrix2c &h_f, const ThermalSpec &spec);

/// Moments from the operator traces
///   <W>   = <H_f>_tf - <H_i>_0
///   <W^2> = <H_f^2>_tf + <H_i^2>_0 - 2 tr{U^dag H_f U H_i rho(0)}
/// and the variance assembled term by term from the same traces.
WorkMoments moments(const Matrix2c &u, const Matrix2c &h_i, const Matrix2c &h_f,
                    const ThermalSpec &spec);

/// Propagator and endpoint Hamiltonians of one protocol.
struct ProtocolRun {
  Propagator2 propagator;
  Matrix2c h_initial;
  Matrix2c h_final;
};

ProtocolRun run_protocol(const Drive &drive, std::size_t n_steps);

struct EqualityRow {
  double a = 1.0;
  double beta_thermal = 0.0;
  WorkMoments reference;
  WorkMoments rescaled;
  double mean_gap = 0.0;
  double fluctuation_gap = 0.0;
  double propagator_distance = 0.0;

  bool within(double tol = kWorkEqualityTolerance) const {
    return mean_gap <= tol && fluctuation_gap <= tol;
  }
};

struct EqualityReport {
  std::vector<EqualityRow> rows; // ordered (a, beta) as given

  bool all_within(double tol = kWorkEqualityTolerance) const;
};

/// For each a, compares work moments of the reference pulse on [0, t_f] with
/// the rescaled pulse on [0, t_f / a], for every inverse temperature.
/// Requires a >= 1 and beta >= 0.
EqualityReport compare_protocols(const AEParams &params,
                                 const std::vector<double> &a_values,
                                 const std::vector<double> &betas,
                                 const GridPolicy &policy = {});

} // namespace tr2l
