#include "restor/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "restor/error.hpp"

namespace restor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Wavevector negate(const Wavevector& k) {
  Wavevector out(k.size());
  std::transform(k.begin(), k.end(), out.begin(), [](int v) { return -v; });
  return out;
}

bool is_origin(const Wavevector& k) {
  return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

double phase(const Wavevector& k, std::span<const double> theta) {
  double acc = 0.0;
  for (std::size_t a = 0; a < k.size(); ++a) acc += k[a] * theta[a];
  return kTwoPi * acc;
}

}  // namespace

int l1_norm(std::span<const int> k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

TrigPolyScalar TrigPolyScalar::constant(int dim, double c) {
  TrigPolyScalar p(dim);
  p.add_raw(Wavevector(dim, 0), c);
  return p;
}

TrigPolyScalar TrigPolyScalar::cosine(const Wavevector& k, double amplitude) {
  TrigPolyScalar p(static_cast<int>(k.size()));
  if (is_origin(k)) {
    p.add_raw(k, amplitude);
  } else {
    p.add_mode(k, 0.5 * amplitude);
  }
  return p;
}

TrigPolyScalar TrigPolyScalar::sine(const Wavevector& k, double amplitude) {
  TrigPolyScalar p(static_cast<int>(k.size()));
  if (!is_origin(k)) p.add_mode(k, std::complex<double>(0.0, -0.5 * amplitude));
  return p;
}

int TrigPolyScalar::degree() const {
  int deg = 0;
  for (const auto& [k, c] : terms_) deg = std::max(deg, l1_norm(k));
  return deg;
}

void TrigPolyScalar::add_raw(const Wavevector& k, std::complex<double> c) {
  if (static_cast<int>(k.size()) != dim_)
    throw Error(ErrorCode::invalid_model, "wavevector dimension mismatch");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void TrigPolyScalar::add_mode(const Wavevector& k, std::complex<double> c) {
  if (is_origin(k)) {
    add_raw(k, c.real());
    return;
  }
  add_raw(k, c);
  add_raw(negate(k), std::conj(c));
}

std::complex<double> TrigPolyScalar::coefficient(const Wavevector& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? std::complex<double>(0.0) : it->second;
}

std::complex<double> TrigPolyScalar::evaluate_complex(
    std::span<const double> theta) const {
  std::complex<double> acc = 0.0;
  for (const auto& [k, c] : terms_) acc += c * std::polar(1.0, phase(k, theta));
  return acc;
}

double TrigPolyScalar::operator()(std::span<const double> theta) const {
  double acc = 0.0;
  for (const auto& [k, c] : terms_) {
    const double phi = phase(k, theta);
    acc += c.real() * std::cos(phi) - c.imag() * std::sin(phi);
  }
  return acc;
}

TrigPolyScalar TrigPolyScalar::partial(int axis) const {
  if (axis < 0 || axis >= dim_) throw Error(ErrorCode::domain, "bad axis");
  TrigPolyScalar out(dim_);
  for (const auto& [k, c] : terms_) {
    if (k[axis] == 0) continue;
    out.terms_.emplace(k, c * std::complex<double>(0.0, kTwoPi * k[axis]));
  }
  return out;
}

TrigPolyScalar TrigPolyScalar::average_fast(int d) const {
  TrigPolyScalar out(dim_);
  for (const auto& [k, c] : terms_) {
    if (std::all_of(k.begin() + d, k.end(), [](int v) { return v == 0; }))
      out.terms_.emplace(k, c);
  }
  return out;
}

TrigPolyScalar TrigPolyScalar::oscillating(int d) const {
  TrigPolyScalar out(dim_);
  for (const auto& [k, c] : terms_) {
    if (std::any_of(k.begin() + d, k.end(), [](int v) { return v != 0; }))
      out.terms_.emplace(k, c);
  }
  return out;
}

double TrigPolyScalar::norm_bound(int l) const {
  double best = 0.0;
  for (int j = 0; j <= l; ++j) {
    double sum = 0.0;
    for (const auto& [k, c] : terms_)
      sum += std::pow(kTwoPi * l1_norm(k), j) * std::abs(c);
    best = std::max(best, sum);
  }
  return best;
}

bool TrigPolyScalar::conjugate_symmetric(double tol) const {
  for (const auto& [k, c] : terms_) {
    const auto partner = coefficient(negate(k));
    if (std::abs(partner - std::conj(c)) > tol * std::max(1.0, std::abs(c)))
      return false;
  }
  return true;
}

void TrigPolyScalar::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

TrigPolyScalar& TrigPolyScalar::operator+=(const TrigPolyScalar& other) {
  if (dim_ == 0) dim_ = other.dim_;
  for (const auto& [k, c] : other.terms_) add_raw(k, c);
  return *this;
}

TrigPolyScalar& TrigPolyScalar::operator-=(const TrigPolyScalar& other) {
  if (dim_ == 0) dim_ = other.dim_;
  for (const auto& [k, c] : other.terms_) add_raw(k, -c);
  return *this;
}

TrigPolyScalar& TrigPolyScalar::operator*=(double s) {
  for (auto& [k, c] : terms_) c *= s;
  prune();
  return *this;
}

// -- TrigPolyMatrix ---------------------------------------------------------

TrigPolyMatrix::TrigPolyMatrix(int n)
    : n_(n), upper_(static_cast<std::size_t>(n * (n + 1) / 2), TrigPolyScalar(n)) {}

std::size_t TrigPolyMatrix::index(int p, int q) const {
  if (p > q) std::swap(p, q);
  if (p < 0 || q >= n_) throw Error(ErrorCode::domain, "matrix index out of range");
  return static_cast<std::size_t>(p * n_ - p * (p - 1) / 2 + (q - p));
}

const TrigPolyScalar& TrigPolyMatrix::entry(int p, int q) const {
  return upper_[index(p, q)];
}

TrigPolyScalar& TrigPolyMatrix::entry(int p, int q) { return upper_[index(p, q)]; }

TrigPolyMatrix TrigPolyMatrix::constant(const Eigen::MatrixXd& value) {
  const int n = static_cast<int>(value.rows());
  TrigPolyMatrix m(n);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q)
      if (value(p, q) != 0.0) m.entry(p, q) = TrigPolyScalar::constant(n, value(p, q));
  return m;
}

void TrigPolyMatrix::add(const TrigPolyScalar& scalar, const Eigen::MatrixXd& shape) {
  if (shape.rows() != n_ || shape.cols() != n_)
    throw Error(ErrorCode::invalid_model, "shape has wrong size");
  if (shape != shape.transpose())
    throw Error(ErrorCode::invalid_model, "shape must be symmetric");
  for (int p = 0; p < n_; ++p)
    for (int q = p; q < n_; ++q)
      if (shape(p, q) != 0.0) entry(p, q) += shape(p, q) * scalar;
}

Eigen::MatrixXd TrigPolyMatrix::operator()(std::span<const double> theta) const {
  Eigen::MatrixXd out(n_, n_);
  for (int p = 0; p < n_; ++p)
    for (int q = p; q < n_; ++q) out(p, q) = out(q, p) = entry(p, q)(theta);
  return out;
}

TrigPolyMatrix TrigPolyMatrix::partial(int axis) const {
  TrigPolyMatrix out(n_);
  for (std::size_t i = 0; i < upper_.size(); ++i) out.upper_[i] = upper_[i].partial(axis);
  return out;
}

TrigPolyMatrix TrigPolyMatrix::average_fast(int d) const {
  TrigPolyMatrix out(n_);
  for (std::size_t i = 0; i < upper_.size(); ++i)
    out.upper_[i] = upper_[i].average_fast(d);
  return out;
}

TrigPolyMatrix TrigPolyMatrix::oscillating(int d) const {
  TrigPolyMatrix out(n_);
  for (std::size_t i = 0; i < upper_.size(); ++i)
    out.upper_[i] = upper_[i].oscillating(d);
  return out;
}

double TrigPolyMatrix::norm_bound(int l) const {
  double best = 0.0;
  for (int j = 0; j <= l; ++j) {
    for (int p = 0; p < n_; ++p) {
      double row = 0.0;
      for (int q = 0; q < n_; ++q)
        for (const auto& [k, c] : entry(p, q).terms())
          row += std::pow(kTwoPi * l1_norm(k), j) * std::abs(c);
      best = std::max(best, row);
    }
  }
  return best;
}

bool TrigPolyMatrix::is_constant() const {
  for (const auto& e : upper_)
    for (const auto& [k, c] : e.terms())
      if (!is_origin(k)) return false;
  return true;
}

Eigen::MatrixXd TrigPolyMatrix::constant_part() const {
  Eigen::MatrixXd out(n_, n_);
  const Wavevector origin(n_, 0);
  for (int p = 0; p < n_; ++p)
    for (int q = p; q < n_; ++q)
      out(p, q) = out(q, p) = entry(p, q).coefficient(origin).real();
  return out;
}

int TrigPolyMatrix::degree() const {
  int deg = 0;
  for (const auto& e : upper_) deg = std::max(deg, e.degree());
  return deg;
}

TrigPolyMatrix& TrigPolyMatrix::operator*=(double s) {
  for (auto& e : upper_) e *= s;
  return *this;
}

}  // namespace restor
