#pragma once

#include <vector>

#include <Eigen/Dense>

#include "restor/hamiltonian.hpp"

namespace restor {

struct CheckOptions {
  int grid_per_axis = 256;
  long max_grid_points = 1L << 20;  // per-axis resolution shrinks past this
  double refine_tol = 1e-10;
  double cone_tol = 1e-10;
  double singular_tol = 1e-10;
};

/// Non-constancy of the fast average and the derivative witness.
struct WitnessA1 {
  bool verdict = false;
  std::vector<double> theta_star;  // point of T^d
  int i = -1;                      // 0-based slow index
  Eigen::MatrixXd a_star;          // d_{theta_i} Abar(theta_star)
  double frobenius = 0.0;
  double grid_max = 0.0;   // best Frobenius norm seen on the grid
  double grid_tol = 0.0;   // bound on how far the true max can exceed grid_max
  int grid_per_axis = 0;
};

struct VerdictA2 {
  bool applicable = false;
  bool verdict = false;
  double a_star = 0.0;     // A* e_i . e_i as measured
  bool reversal = false;   // a_star > 0: time must be reversed
};

struct VerdictA3 {
  bool applicable = false;
  bool verdict = false;
  double lambda_star = 0.0;  // largest eigenvalue after normalizing to negative definite
  bool reversal = false;
  Eigen::VectorXd eigenvalues;
};

struct VerdictA4 {
  bool verdict = false;
  bool constant_average = false;
  Eigen::MatrixXd a0;
  double margin = 0.0;  // smallest singular value of A0
};

struct AssumptionReport {
  WitnessA1 a1;
  VerdictA2 a2;
  VerdictA3 a3;
  VerdictA4 a4;
};

struct ConeTest {
  double value = 0.0;
  bool member = false;
};

/// A* v . v and isotropic-cone membership |A* v.v| <= tol |A*|_F |v|_2^2.
ConeTest cone_test(const Eigen::MatrixXd& a_star, const Eigen::VectorXd& v,
                   double tol = 1e-10);

/// gamma* = |A* I0 . I0| / 4; throws for cone members.
double gamma_star(const Eigen::MatrixXd& a_star, const Eigen::VectorXd& i0,
                  double tol = 1e-10);

WitnessA1 check_a1(const TorusHamiltonian& h, const CheckOptions& opts = {});
VerdictA2 check_a2(const WitnessA1& a1, const CheckOptions& opts = {});
VerdictA3 check_a3(const WitnessA1& a1, const CheckOptions& opts = {});
VerdictA4 check_a4(const TorusHamiltonian& h, const CheckOptions& opts = {});

AssumptionReport check_assumptions(const TorusHamiltonian& h,
                                   const CheckOptions& opts = {});

/// d_{theta_i} Abar evaluated at a slow point (fast angles zero).
Eigen::MatrixXd slow_derivative(const TrigPolyMatrix& abar, int i,
                                std::span<const double> slow_point);

}  // namespace restor
