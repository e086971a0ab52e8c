#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace restor {

/// Resonant frequency omega = (0, fast) in R^d x R^(n-d).
///
/// The fast part is sup-normalized and certified non-resonant up to the
/// l1 bound q_cert: construction enumerates every integer k with
/// 0 < |k|_1 <= q_cert and records the smallest |k . fast| on each l1
/// shell. Those shell minima back psi() and are shared between copies.
class FrequencyVector {
 public:
  static constexpr double kNormTolerance = 1e-12;
  static constexpr double kResonanceThreshold = 1e-14;

  FrequencyVector(int n, int d, std::vector<double> fast, int q_cert = 0);

  int n() const { return n_; }
  int d() const { return d_; }
  int fast_dim() const { return n_ - d_; }
  const std::vector<double>& fast() const { return fast_; }
  int q_cert() const { return q_cert_; }

  Eigen::VectorXd full() const;

  /// Smallest |k . fast| over the shell |k|_1 == s, 1 <= s <= q_cert.
  double shell_min(int s) const;

  /// Same vector with the fast part negated (time reversal). Shares the table.
  FrequencyVector negated() const;

  /// Default certification bound, sized so the lattice count stays ~1e7.
  static int default_q_cert(int fast_dim);

  friend bool operator==(const FrequencyVector& a, const FrequencyVector& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.fast_ == b.fast_ &&
           a.q_cert_ == b.q_cert_;
  }

 private:
  FrequencyVector() = default;

  int n_ = 0;
  int d_ = 0;
  std::vector<double> fast_;
  int q_cert_ = 0;
  std::shared_ptr<const std::vector<double>> shell_min_;
};

/// |k . w| accumulated left to right.
double lattice_divisor(std::span<const int> k, std::span<const double> w);

/// Psi(Q) = max{ |k . fast|^-1 : 0 < |k|_1 <= Q }.
double psi(const FrequencyVector& freq, int q);

/// Breakpoints of Psi up to q_max together with the constant kappa.
class ArithmeticProfile {
 public:
  struct Breakpoint {
    int q;
    double psi;
  };

  ArithmeticProfile(const FrequencyVector& freq, int q_max, double kappa = 1.0);

  double kappa() const { return kappa_; }
  int q_max() const { return q_max_; }
  const std::vector<Breakpoint>& breakpoints() const { return table_; }

  /// Psi at integer q, 1 <= q <= q_max.
  double psi(int q) const;

 private:
  double kappa_;
  int q_max_;
  std::vector<Breakpoint> table_;
};

/// Delta(x) = sup{ Q >= 1 real : Q Psi(floor Q) <= x }.
double delta(const ArithmeticProfile& profile, double x);

/// mu(eps) = 1 / Delta(kappa / eps).
double mu(const ArithmeticProfile& profile, double eps);

/// Truncation order floor(Delta(kappa / eps)) used by the averaging step.
int truncation_order(const ArithmeticProfile& profile, double eps);

}  // namespace restor
