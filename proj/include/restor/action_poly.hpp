#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "restor/trigpoly.hpp"

namespace restor {

using Powers = std::vector<int>;

int total_degree(std::span<const int> powers);
double monomial(std::span<const int> powers, std::span<const double> action);

/// Polynomial in the actions with trigonometric-polynomial coefficients,
///   P(theta, I) = sum_alpha c_alpha(theta) I^alpha.
class ActionPolynomial {
 public:
  using Terms = std::map<Powers, TrigPolyScalar>;

  ActionPolynomial() = default;
  explicit ActionPolynomial(int n) : n_(n) {}

  /// A(theta) I . I expanded into monomials.
  static ActionPolynomial quadratic_form(const TrigPolyMatrix& a);

  int dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int min_degree() const;
  int max_degree() const;
  int trig_degree() const;

  void add(const Powers& powers, const TrigPolyScalar& coeff);

  double operator()(std::span<const double> theta,
                    std::span<const double> action) const;

  ActionPolynomial average_fast(int d) const;
  ActionPolynomial oscillating(int d) const;
  ActionPolynomial partial_theta(int axis) const;

  ActionPolynomial& operator+=(const ActionPolynomial& other);
  ActionPolynomial& operator-=(const ActionPolynomial& other);
  ActionPolynomial& operator*=(double s);
  friend ActionPolynomial operator+(ActionPolynomial a, const ActionPolynomial& b) {
    return a += b;
  }
  friend ActionPolynomial operator-(ActionPolynomial a, const ActionPolynomial& b) {
    return a -= b;
  }
  friend ActionPolynomial operator*(double s, ActionPolynomial a) { return a *= s; }
  friend bool operator==(const ActionPolynomial& a, const ActionPolynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_ = 0;
  Terms terms_;
};

/// H(theta, I) = linear . I + P(theta, I), flattened for repeated evaluation
/// of values and gradients. Immutable; per-thread scratch lives in Workspace.
class PhaseFunction {
 public:
  struct Workspace {
    std::vector<double> cos_phase;
    std::vector<double> sin_phase;
    std::vector<double> dtrig;
  };

  PhaseFunction() = default;
  PhaseFunction(Eigen::VectorXd linear, const ActionPolynomial& poly);
  explicit PhaseFunction(const ActionPolynomial& poly);

  int dim() const { return n_; }
  const Eigen::VectorXd& linear() const { return linear_; }
  Workspace workspace() const;

  double value(std::span<const double> theta, std::span<const double> action,
               Workspace& ws) const;
  /// d_theta = dH/dtheta, d_action = dH/dI.
  void gradient(std::span<const double> theta, std::span<const double> action,
                std::span<double> d_theta, std::span<double> d_action,
                Workspace& ws) const;

  double value(const Eigen::VectorXd& theta, const Eigen::VectorXd& action) const;

 private:
  struct Coef {
    int mode;
    double a;  // multiplies cos(phase)
    double b;  // multiplies sin(phase)
  };
  struct Term {
    Powers powers;
    std::size_t first;
    std::size_t last;
  };

  void phases(std::span<const double> theta, Workspace& ws) const;

  int n_ = 0;
  Eigen::VectorXd linear_;
  std::vector<int> mode_k_;  // n entries per mode
  std::vector<Coef> coefs_;
  std::vector<Term> terms_;
};

}  // namespace restor
