#pragma once

#include <vector>

#include <Eigen/Dense>

#include "restor/action_poly.hpp"
#include "restor/freq_arith.hpp"
#include "restor/trigpoly.hpp"

namespace restor {

/// H(theta, I) = omega . I + A(theta) I . I + R(theta, I), with omega = (0, fast)
/// and every monomial of R of total action degree >= 3.
class TorusHamiltonian {
 public:
  TorusHamiltonian(FrequencyVector freq, TrigPolyMatrix a, ActionPolynomial r,
                   double kappa = 1.0);
  TorusHamiltonian(FrequencyVector freq, TrigPolyMatrix a, double kappa = 1.0);

  const FrequencyVector& freq() const { return freq_; }
  const TrigPolyMatrix& A() const { return a_; }
  const ActionPolynomial& R() const { return r_; }
  double kappa() const { return kappa_; }
  int n() const { return freq_.n(); }
  int d() const { return freq_.d(); }

  /// Coefficient bound for |A|_{C^3}.
  double C1() const;
  /// Bound for the scaled remainder eps^-3 R(theta, eps I) on T^n x B_3,
  /// valid for every 0 < eps <= 1.
  double C2() const;

  /// The full nonlinear part A I.I + R as one action polynomial.
  ActionPolynomial nonlinear() const;
  /// f = A I.I + eps Rtilde, so that the scaled Hamiltonian is omega.I + eps f.
  ActionPolynomial perturbation(double eps) const;

  PhaseFunction phase_function() const;
  double operator()(std::span<const double> theta, std::span<const double> action) const;

  friend bool operator==(const TorusHamiltonian& a, const TorusHamiltonian& b) {
    return a.freq_ == b.freq_ && a.a_ == b.a_ && a.r_ == b.r_ && a.kappa_ == b.kappa_;
  }

 private:
  FrequencyVector freq_;
  TrigPolyMatrix a_;
  ActionPolynomial r_;
  double kappa_;
};

/// Htilde(theta, I) = eps^-1 H(theta, eps I): quadratic part times eps,
/// degree-m remainder terms times eps^(m-1).
TorusHamiltonian scale(const TorusHamiltonian& h, double eps);

/// -H. Its trajectories are those of H run backwards in time; omega flips sign
/// along with A and R.
TorusHamiltonian reverse_time(const TorusHamiltonian& h);

/// Diagonal model omega.I + Diag(a_1(theta_1), ..., a_n(theta_1)) I.I with a_1 = 0.
struct ExampleModel {
  TorusHamiltonian hamiltonian;
  int j;               // index (0-based) with a_j'(theta1_star) > 0
  double theta1_star;  // maximizer of a_j' over the search grid
};

/// Builds the diagonal unstable example. `profiles` are trigonometric
/// polynomials on T^1, one per action.
ExampleModel builtin_example(int n, int d, std::vector<double> fast,
                             const std::vector<TrigPolyScalar>& profiles);

/// The default instance: n = 2, d = 1, fast = (1), a_2 = sin(2 pi theta_1).
ExampleModel builtin_example();

}  // namespace restor
