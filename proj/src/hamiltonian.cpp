#include "restor/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "restor/error.hpp"

namespace restor {

TorusHamiltonian::TorusHamiltonian(FrequencyVector freq, TrigPolyMatrix a,
                                   ActionPolynomial r, double kappa)
    : freq_(std::move(freq)), a_(std::move(a)), r_(std::move(r)), kappa_(kappa) {
  const int n = freq_.n();
  if (a_.size() != n) throw Error(ErrorCode::invalid_model, "A has wrong size");
  if (r_.dim() == 0) r_ = ActionPolynomial(n);
  if (r_.dim() != n) throw Error(ErrorCode::invalid_model, "R has wrong dimension");
  if (!(kappa_ > 0.0)) throw Error(ErrorCode::invalid_model, "kappa must be positive");
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      if (a_.entry(p, q).dim() != n)
        throw Error(ErrorCode::invalid_model, "A entry has wrong dimension");
      if (!a_.entry(p, q).conjugate_symmetric())
        throw Error(ErrorCode::invalid_model, "A entry is not real-valued");
    }
  for (const auto& [powers, c] : r_.terms()) {
    if (total_degree(powers) < 3)
      throw Error(ErrorCode::invalid_model, "remainder term of action degree < 3");
    if (!c.conjugate_symmetric())
      throw Error(ErrorCode::invalid_model, "remainder coefficient is not real-valued");
  }
}

TorusHamiltonian::TorusHamiltonian(FrequencyVector freq, TrigPolyMatrix a,
                                   double kappa)
    : TorusHamiltonian(std::move(freq), std::move(a), ActionPolynomial(), kappa) {}

double TorusHamiltonian::C1() const { return a_.norm_bound(3); }

double TorusHamiltonian::C2() const {
  // Each monomial c(theta) I^alpha contributes at most
  // |c|_{C^3} * max(1, m)^3 * 3^m on B_3 for derivatives of order <= 3.
  double bound = 0.0;
  for (const auto& [powers, c] : r_.terms()) {
    const int m = total_degree(powers);
    bound += c.norm_bound(3) * std::pow(std::max(1, m), 3) * std::pow(3.0, m);
  }
  return bound;
}

ActionPolynomial TorusHamiltonian::nonlinear() const {
  return ActionPolynomial::quadratic_form(a_) + r_;
}

ActionPolynomial TorusHamiltonian::perturbation(double eps) const {
  ActionPolynomial f = ActionPolynomial::quadratic_form(a_);
  for (const auto& [powers, c] : r_.terms())
    f.add(powers, std::pow(eps, total_degree(powers) - 2) * c);
  return f;
}

PhaseFunction TorusHamiltonian::phase_function() const {
  return PhaseFunction(freq_.full(), nonlinear());
}

double TorusHamiltonian::operator()(std::span<const double> theta,
                                    std::span<const double> action) const {
  const Eigen::VectorXd w = freq_.full();
  double acc = 0.0;
  for (int p = 0; p < n(); ++p) acc += w[p] * action[p];
  return acc + nonlinear()(theta, action);
}

TorusHamiltonian scale(const TorusHamiltonian& h, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::domain, "scale requires eps > 0");
  ActionPolynomial r(h.n());
  for (const auto& [powers, c] : h.R().terms())
    r.add(powers, std::pow(eps, total_degree(powers) - 1) * c);
  return TorusHamiltonian(h.freq(), eps * h.A(), std::move(r), h.kappa());
}

TorusHamiltonian reverse_time(const TorusHamiltonian& h) {
  return TorusHamiltonian(h.freq().negated(), -1.0 * h.A(), -1.0 * h.R(), h.kappa());
}

ExampleModel builtin_example(int n, int d, std::vector<double> fast,
                             const std::vector<TrigPolyScalar>& profiles) {
  if (static_cast<int>(profiles.size()) != n)
    throw Error(ErrorCode::invalid_model, "need one profile per action");
  for (const auto& a : profiles)
    if (a.dim() != 1) throw Error(ErrorCode::invalid_model, "profiles live on T^1");
  if (!profiles[0].is_zero())
    throw Error(ErrorCode::invalid_model, "invalid example: a_1 must vanish identically");

  TrigPolyMatrix a(n);
  for (int k = 0; k < n; ++k) {
    TrigPolyScalar lifted(n);
    for (const auto& [wave, c] : profiles[k].terms()) {
      Wavevector full(n, 0);
      full[0] = wave[0];
      lifted.add_raw(full, c);
    }
    a.entry(k, k) = lifted;
  }

  // Search the largest a_j' over a fine grid of theta_1.
  constexpr int kGrid = 4096;
  int best_j = -1;
  double best_theta = 0.0;
  double best_slope = 0.0;
  for (int j = 1; j < n; ++j) {
    const TrigPolyScalar slope = profiles[j].partial(0);
    for (int g = 0; g < kGrid; ++g) {
      const double t = static_cast<double>(g) / kGrid;
      const double v = slope(std::span<const double>(&t, 1));
      if (v > best_slope) {
        best_slope = v;
        best_j = j;
        best_theta = t;
      }
    }
  }
  if (best_j < 0)
    throw Error(ErrorCode::invalid_model,
                "invalid example: no a_j (j >= 2) with positive slope");

  FrequencyVector freq(n, d, std::move(fast));
  return ExampleModel{TorusHamiltonian(std::move(freq), std::move(a)), best_j,
                      best_theta};
}

ExampleModel builtin_example() {
  std::vector<TrigPolyScalar> profiles{TrigPolyScalar(1),
                                       TrigPolyScalar::sine({1}, 1.0)};
  return builtin_example(2, 1, {1.0}, profiles);
}

}  // namespace restor
