#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "restor/hamiltonian.hpp"

namespace fixtures {

inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Eigen::MatrixXd benchmark_a0() {
  Eigen::MatrixXd a0(2, 2);
  a0 << 0.1, 0.05, 0.05, 0.1;
  return a0;
}

inline Eigen::MatrixXd e1e1() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

/// n = 2, d = 1, fast = (1):
///   A = A0 - b cos(2 pi theta1) e1 e1^T + c cos(2 pi theta2) e1 e1^T.
/// The witness is theta* = 3/4 with A* = -2 pi b e1 e1^T.
inline restor::TorusHamiltonian single_harmonic(double b = 5e-4, double c = 2.5e-4,
                                                double scale = 1.0) {
  restor::TrigPolyMatrix a = restor::TrigPolyMatrix::constant(scale * benchmark_a0());
  a.add(restor::TrigPolyScalar::cosine({1, 0}, scale * b), -e1e1());
  a.add(restor::TrigPolyScalar::cosine({0, 1}, scale * c), e1e1());
  return {restor::FrequencyVector(2, 1, {1.0}), a};
}

/// As single_harmonic with the slow mode along -Id, so A* = -2 pi b Id.
inline restor::TorusHamiltonian definite_harmonic(double b = 5e-4, double c = 2.5e-4,
                                                  double scale = 1.0) {
  restor::TrigPolyMatrix a = restor::TrigPolyMatrix::constant(scale * benchmark_a0());
  a.add(restor::TrigPolyScalar::cosine({1, 0}, scale * b), -Eigen::MatrixXd::Identity(2, 2));
  a.add(restor::TrigPolyScalar::cosine({0, 1}, scale * c), e1e1());
  return {restor::FrequencyVector(2, 1, {1.0}), a};
}

}  // namespace fixtures
