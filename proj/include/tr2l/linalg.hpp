#pragma once

#include <complex>

#include <Eigen/Core>

namespace tr2l {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;

inline Matrix2c pauli_x() {
  Matrix2c m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix2c pauli_y() {
  Matrix2c m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

inline Matrix2c pauli_z() {
  Matrix2c m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// ||U^dagger U - I||_F
inline double unitarity_defect(const Matrix2c &u) {
  return (u.adjoint() * u - Matrix2c::Identity()).norm();
}

} // namespace tr2l
