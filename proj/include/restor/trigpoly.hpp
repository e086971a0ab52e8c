#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace restor {

using Wavevector = std::vector<int>;

int l1_norm(std::span<const int> k);

/// Real trigonometric polynomial on T^n = R^n / Z^n,
///   p(theta) = sum_k c_k exp(2 pi i k . theta),
/// stored as the full coefficient map with c_{-k} = conj(c_k).
class TrigPolyScalar {
 public:
  using Terms = std::map<Wavevector, std::complex<double>>;

  TrigPolyScalar() = default;
  explicit TrigPolyScalar(int dim) : dim_(dim) {}

  static TrigPolyScalar constant(int dim, double c);
  /// amplitude * cos(2 pi k . theta)
  static TrigPolyScalar cosine(const Wavevector& k, double amplitude);
  /// amplitude * sin(2 pi k . theta)
  static TrigPolyScalar sine(const Wavevector& k, double amplitude);

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  /// Adds c at k only. Callers keep the conjugate partner consistent.
  void add_raw(const Wavevector& k, std::complex<double> c);
  /// Adds c at k and conj(c) at -k (real part only when k == 0).
  void add_mode(const Wavevector& k, std::complex<double> c);

  std::complex<double> coefficient(const Wavevector& k) const;

  double operator()(std::span<const double> theta) const;
  std::complex<double> evaluate_complex(std::span<const double> theta) const;

  TrigPolyScalar partial(int axis) const;
  /// Keeps the modes with k_{d+1} = ... = k_n = 0.
  TrigPolyScalar average_fast(int d) const;
  /// Complement of average_fast: modes with some nonzero fast index.
  TrigPolyScalar oscillating(int d) const;
  /// max_{j <= l} sum_k (2 pi |k|_1)^j |c_k|, an upper bound on the C^l norm.
  double norm_bound(int l) const;

  bool conjugate_symmetric(double tol = 1e-12) const;

  TrigPolyScalar& operator+=(const TrigPolyScalar& other);
  TrigPolyScalar& operator-=(const TrigPolyScalar& other);
  TrigPolyScalar& operator*=(double s);

  friend TrigPolyScalar operator+(TrigPolyScalar a, const TrigPolyScalar& b) {
    return a += b;
  }
  friend TrigPolyScalar operator-(TrigPolyScalar a, const TrigPolyScalar& b) {
    return a -= b;
  }
  friend TrigPolyScalar operator*(double s, TrigPolyScalar a) { return a *= s; }
  friend bool operator==(const TrigPolyScalar& a, const TrigPolyScalar& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

 private:
  void prune();

  int dim_ = 0;
  Terms terms_;
};

/// Symmetric-matrix valued trigonometric polynomial; upper triangle stored.
class TrigPolyMatrix {
 public:
  TrigPolyMatrix() = default;
  explicit TrigPolyMatrix(int n);

  static TrigPolyMatrix constant(const Eigen::MatrixXd& value);

  int size() const { return n_; }
  const TrigPolyScalar& entry(int p, int q) const;
  TrigPolyScalar& entry(int p, int q);

  /// Adds scalar(theta) * shape, shape symmetric.
  void add(const TrigPolyScalar& scalar, const Eigen::MatrixXd& shape);

  Eigen::MatrixXd operator()(std::span<const double> theta) const;

  TrigPolyMatrix partial(int axis) const;
  TrigPolyMatrix average_fast(int d) const;
  TrigPolyMatrix oscillating(int d) const;
  /// Row-sum (sup-induced operator norm) version of the coefficient bound.
  double norm_bound(int l) const;
  /// True iff no entry carries a mode with k != 0.
  bool is_constant() const;
  Eigen::MatrixXd constant_part() const;
  int degree() const;

  TrigPolyMatrix& operator*=(double s);
  friend TrigPolyMatrix operator*(double s, TrigPolyMatrix m) { return m *= s; }
  friend bool operator==(const TrigPolyMatrix& a, const TrigPolyMatrix& b) {
    return a.n_ == b.n_ && a.upper_ == b.upper_;
  }

 private:
  std::size_t index(int p, int q) const;

  int n_ = 0;
  std::vector<TrigPolyScalar> upper_;
};

// Free-function spellings of the core operations.
inline double evaluate(const TrigPolyScalar& p, std::span<const double> theta) {
  return p(theta);
}
inline Eigen::MatrixXd evaluate(const TrigPolyMatrix& p,
                                std::span<const double> theta) {
  return p(theta);
}
inline TrigPolyScalar partial(const TrigPolyScalar& p, int axis) {
  return p.partial(axis);
}
inline TrigPolyMatrix partial(const TrigPolyMatrix& p, int axis) {
  return p.partial(axis);
}
inline TrigPolyScalar average_fast(const TrigPolyScalar& p, int d) {
  return p.average_fast(d);
}
inline TrigPolyMatrix average_fast(const TrigPolyMatrix& p, int d) {
  return p.average_fast(d);
}
inline double norm_bound(const TrigPolyScalar& p, int l) { return p.norm_bound(l); }
inline double norm_bound(const TrigPolyMatrix& p, int l) { return p.norm_bound(l); }

}  // namespace restor
