#include "restor/action_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "restor/error.hpp"

namespace restor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Lexicographically positive (first nonzero entry > 0).
bool positive_half(const Wavevector& k) {
  for (int v : k) {
    if (v != 0) return v > 0;
  }
  return false;
}

}  // namespace

int total_degree(std::span<const int> powers) {
  int s = 0;
  for (int v : powers) s += v;
  return s;
}

double monomial(std::span<const int> powers, std::span<const double> action) {
  double r = 1.0;
  for (std::size_t p = 0; p < powers.size(); ++p) r *= ipow(action[p], powers[p]);
  return r;
}

ActionPolynomial ActionPolynomial::quadratic_form(const TrigPolyMatrix& a) {
  const int n = a.size();
  ActionPolynomial out(n);
  for (int p = 0; p < n; ++p) {
    for (int q = p; q < n; ++q) {
      const TrigPolyScalar& e = a.entry(p, q);
      if (e.is_zero()) continue;
      Powers powers(n, 0);
      ++powers[p];
      ++powers[q];
      out.add(powers, p == q ? e : 2.0 * e);
    }
  }
  return out;
}

int ActionPolynomial::min_degree() const {
  int deg = -1;
  for (const auto& [powers, c] : terms_) {
    const int t = total_degree(powers);
    deg = deg < 0 ? t : std::min(deg, t);
  }
  return std::max(deg, 0);
}

int ActionPolynomial::max_degree() const {
  int deg = 0;
  for (const auto& [powers, c] : terms_) deg = std::max(deg, total_degree(powers));
  return deg;
}

int ActionPolynomial::trig_degree() const {
  int deg = 0;
  for (const auto& [powers, c] : terms_) deg = std::max(deg, c.degree());
  return deg;
}

void ActionPolynomial::add(const Powers& powers, const TrigPolyScalar& coeff) {
  if (static_cast<int>(powers.size()) != n_ || coeff.dim() != n_)
    throw Error(ErrorCode::invalid_model, "action polynomial dimension mismatch");
  if (std::any_of(powers.begin(), powers.end(), [](int v) { return v < 0; }))
    throw Error(ErrorCode::invalid_model, "negative action power");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(powers, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

double ActionPolynomial::operator()(std::span<const double> theta,
                                    std::span<const double> action) const {
  double acc = 0.0;
  for (const auto& [powers, c] : terms_) acc += c(theta) * monomial(powers, action);
  return acc;
}

ActionPolynomial ActionPolynomial::average_fast(int d) const {
  ActionPolynomial out(n_);
  for (const auto& [powers, c] : terms_) out.add(powers, c.average_fast(d));
  return out;
}

ActionPolynomial ActionPolynomial::oscillating(int d) const {
  ActionPolynomial out(n_);
  for (const auto& [powers, c] : terms_) out.add(powers, c.oscillating(d));
  return out;
}

ActionPolynomial ActionPolynomial::partial_theta(int axis) const {
  ActionPolynomial out(n_);
  for (const auto& [powers, c] : terms_) out.add(powers, c.partial(axis));
  return out;
}

ActionPolynomial& ActionPolynomial::operator+=(const ActionPolynomial& other) {
  if (n_ == 0) n_ = other.n_;
  for (const auto& [powers, c] : other.terms_) add(powers, c);
  return *this;
}

ActionPolynomial& ActionPolynomial::operator-=(const ActionPolynomial& other) {
  if (n_ == 0) n_ = other.n_;
  for (const auto& [powers, c] : other.terms_) add(powers, -1.0 * c);
  return *this;
}

ActionPolynomial& ActionPolynomial::operator*=(double s) {
  for (auto& [powers, c] : terms_) c *= s;
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

// -- PhaseFunction ------------------------------------------------------------

PhaseFunction::PhaseFunction(const ActionPolynomial& poly)
    : PhaseFunction(Eigen::VectorXd::Zero(poly.dim()), poly) {}

PhaseFunction::PhaseFunction(Eigen::VectorXd linear, const ActionPolynomial& poly)
    : n_(static_cast<int>(linear.size())), linear_(std::move(linear)) {
  if (poly.dim() != 0 && poly.dim() != n_)
    throw Error(ErrorCode::invalid_model, "phase function dimension mismatch");
  std::map<Wavevector, int> mode_index;
  auto mode_of = [&](const Wavevector& k) {
    auto [it, inserted] = mode_index.try_emplace(k, static_cast<int>(mode_index.size()));
    if (inserted) mode_k_.insert(mode_k_.end(), k.begin(), k.end());
    return it->second;
  };
  for (const auto& [powers, c] : poly.terms()) {
    Term term{powers, coefs_.size(), coefs_.size()};
    for (const auto& [k, coef] : c.terms()) {
      const bool origin = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
      if (origin) {
        coefs_.push_back({mode_of(k), coef.real(), 0.0});
      } else if (positive_half(k)) {
        // c e^{i phi} + conj(c) e^{-i phi} = 2 Re c cos(phi) - 2 Im c sin(phi)
        coefs_.push_back({mode_of(k), 2.0 * coef.real(), -2.0 * coef.imag()});
      }
    }
    term.last = coefs_.size();
    if (term.last > term.first) terms_.push_back(std::move(term));
  }
}

PhaseFunction::Workspace PhaseFunction::workspace() const {
  const std::size_t modes = n_ == 0 ? 0 : mode_k_.size() / n_;
  return Workspace{std::vector<double>(modes), std::vector<double>(modes),
                   std::vector<double>(n_)};
}

void PhaseFunction::phases(std::span<const double> theta, Workspace& ws) const {
  const std::size_t modes = ws.cos_phase.size();
  for (std::size_t m = 0; m < modes; ++m) {
    const int* k = &mode_k_[m * n_];
    double acc = 0.0;
    for (int a = 0; a < n_; ++a) acc += k[a] * theta[a];
    const double phi = kTwoPi * acc;
    ws.cos_phase[m] = std::cos(phi);
    ws.sin_phase[m] = std::sin(phi);
  }
}

double PhaseFunction::value(std::span<const double> theta,
                            std::span<const double> action, Workspace& ws) const {
  phases(theta, ws);
  double acc = 0.0;
  for (int p = 0; p < n_; ++p) acc += linear_[p] * action[p];
  for (const Term& term : terms_) {
    double trig = 0.0;
    for (std::size_t i = term.first; i < term.last; ++i) {
      const Coef& c = coefs_[i];
      trig += c.a * ws.cos_phase[c.mode] + c.b * ws.sin_phase[c.mode];
    }
    acc += trig * monomial(term.powers, action);
  }
  return acc;
}

double PhaseFunction::value(const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& action) const {
  Workspace ws = workspace();
  return value(std::span<const double>(theta.data(), theta.size()),
               std::span<const double>(action.data(), action.size()), ws);
}

void PhaseFunction::gradient(std::span<const double> theta,
                             std::span<const double> action,
                             std::span<double> d_theta, std::span<double> d_action,
                             Workspace& ws) const {
  phases(theta, ws);
  for (int p = 0; p < n_; ++p) {
    d_theta[p] = 0.0;
    d_action[p] = linear_[p];
  }
  for (const Term& term : terms_) {
    double trig = 0.0;
    std::fill(ws.dtrig.begin(), ws.dtrig.end(), 0.0);
    for (std::size_t i = term.first; i < term.last; ++i) {
      const Coef& c = coefs_[i];
      const double cs = ws.cos_phase[c.mode];
      const double sn = ws.sin_phase[c.mode];
      trig += c.a * cs + c.b * sn;
      const double slope = c.b * cs - c.a * sn;
      const int* k = &mode_k_[c.mode * n_];
      for (int a = 0; a < n_; ++a)
        if (k[a] != 0) ws.dtrig[a] += kTwoPi * k[a] * slope;
    }
    const Powers& pw = term.powers;
    const double mono = monomial(pw, action);
    for (int a = 0; a < n_; ++a) d_theta[a] += ws.dtrig[a] * mono;
    for (int p = 0; p < n_; ++p) {
      if (pw[p] == 0) continue;
      double g = pw[p] * ipow(action[p], pw[p] - 1);
      for (int q = 0; q < n_; ++q)
        if (q != p) g *= ipow(action[q], pw[q]);
      d_action[p] += trig * g;
    }
  }
}

}  // namespace restor
