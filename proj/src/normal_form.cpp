#include "restor/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "restor/error.hpp"
#include "restor/parallel.hpp"

namespace restor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ActionPolynomial quadratic_part(const ActionPolynomial& p) {
  ActionPolynomial out(p.dim());
  for (const auto& [powers, c] : p.terms())
    if (total_degree(powers) == 2) out.add(powers, c);
  return out;
}

}  // namespace

AveragedSplit split_average(const ActionPolynomial& f, int d) {
  return {f.average_fast(d), f.oscillating(d)};
}

HomologicalSolution solve_homological(const ActionPolynomial& osc,
                                      const FrequencyVector& freq,
                                      const ArithmeticProfile& profile, int q) {
  const int n = freq.n();
  const int d = freq.d();
  if (q < 1 || q > freq.q_cert() || q > profile.q_max())
    throw Error(ErrorCode::not_certified, "truncation order outside certified range");
  const double floor_divisor = 1.0 / (2.0 * profile.psi(q));

  HomologicalSolution out;
  out.generator = ActionPolynomial(n);
  out.tail = ActionPolynomial(n);
  out.truncation_q = q;
  std::map<Wavevector, double> used;
  for (const auto& [powers, coeff] : osc.terms()) {
    TrigPolyScalar g(n), tail(n);
    for (const auto& [k, c] : coeff.terms()) {
      const std::span<const int> k_fast(k.data() + d, static_cast<std::size_t>(n - d));
      // Slow-only modes need no solve; they stay with the tail.
      const bool slow_only =
          std::all_of(k_fast.begin(), k_fast.end(), [](int v) { return v == 0; });
      if (slow_only || l1_norm(k) > q) {
        tail.add_raw(k, c);
        continue;
      }
      double dot = 0.0;
      for (int j = 0; j < n - d; ++j) dot += k_fast[j] * freq.fast()[j];
      if (std::abs(dot) < floor_divisor) {
        std::ostringstream msg;
        msg << "small divisor " << std::abs(dot) << " below 1/(2 Psi(" << q
            << ")) for a retained mode";
        throw Error(ErrorCode::not_certified, msg.str());
      }
      g.add_raw(k, c / std::complex<double>(0.0, kTwoPi * dot));
      used[k] = 1.0 / std::abs(dot);
    }
    out.generator.add(powers, g);
    out.tail.add(powers, tail);
  }
  for (const auto& [k, inv] : used) {
    out.divisors.push_back({k, inv});
    out.divisor_worst = std::max(out.divisor_worst, inv);
  }
  return out;
}

PhaseState transform_point(const PhaseFunction& chi, const PhaseState& z,
                           const TransformOptions& opts) {
  const auto steps = static_cast<int>(std::lround(1.0 / opts.flow_step));
  StepOptions so;
  so.tol = opts.flow_tol;
  MidpointStepper stepper(chi, so);
  PhaseState out = z;
  reduce_angles(out.theta);
  for (int s = 0; s < steps; ++s) stepper.step(out, 1.0 / steps);
  return out;
}

NormalFormResult apply_transform(const TorusHamiltonian& h_scaled,
                                 const AveragedSplit& split,
                                 const HomologicalSolution& hom, double eps, double mu,
                                 double c2, const TransformOptions& opts) {
  const int n = h_scaled.n();
  NormalFormResult out;
  out.eps = eps;
  out.mu = mu;
  out.truncation_q = hom.truncation_q;
  out.divisor_worst = hom.divisor_worst;
  out.fbar = split.mean;
  out.generator = hom.generator;
  out.tail = hom.tail;
  out.divisors = hom.divisors;

  const PhaseFunction chi(eps * hom.generator);
  const PhaseFunction ham = h_scaled.phase_function();
  const PhaseFunction fbar(split.mean);
  const PhaseFunction abar_quad(quadratic_part(split.mean));
  const Eigen::VectorXd omega = h_scaled.freq().full();
  const bool identity = hom.generator.is_zero();

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-opts.action_radius, opts.action_radius);
  std::vector<Eigen::VectorXd> actions;
  for (int s = 0; s < opts.action_samples; ++s) {
    Eigen::VectorXd v(n);
    for (int p = 0; p < n; ++p) v[p] = unif(rng);
    actions.push_back(v);
  }
  std::size_t grid_count = 1;
  for (int a = 0; a < n; ++a) grid_count *= static_cast<std::size_t>(opts.theta_grid);
  const std::size_t total = grid_count * actions.size();

  struct Sample {
    double remainder, displacement, f_prime, radius;
  };
  std::vector<Sample> samples(total);
  parallel_for(total, [&](std::size_t idx) {
    PhaseState z;
    z.theta.resize(n);
    std::size_t g = idx / actions.size();
    for (int a = n - 1; a >= 0; --a) {
      z.theta[a] = static_cast<double>(g % opts.theta_grid) / opts.theta_grid;
      g /= opts.theta_grid;
    }
    z.action = actions[idx % actions.size()];
    const PhaseState img = identity ? z : transform_point(chi, z, opts);
    const double h_img = ham.value(img.theta, img.action);
    const double lin = omega.dot(z.action);
    Sample s;
    s.remainder = std::abs(h_img - lin - eps * fbar.value(z.theta, z.action));
    s.f_prime = std::abs(h_img - lin - eps * abar_quad.value(z.theta, z.action)) / (eps * mu);
    s.displacement = (img.action - z.action).cwiseAbs().maxCoeff();
    for (int a = 0; a < n; ++a)
      s.displacement =
          std::max(s.displacement, std::abs(angle_difference(img.theta[a], z.theta[a])));
    s.radius = img.action.cwiseAbs().maxCoeff();
    samples[idx] = s;
  });

  for (const Sample& s : samples) {
    if (s.radius >= opts.target_radius) {
      std::ostringstream msg;
      msg << "transform maps B_" << opts.action_radius << " outside B_"
          << opts.target_radius << " (eps=" << eps << " too large)";
      throw Error(ErrorCode::ball_exit, msg.str());
    }
    out.remainder_bound = std::max(out.remainder_bound, s.remainder);
    out.displacement = std::max(out.displacement, s.displacement);
    out.f_prime_bound = std::max(out.f_prime_bound, s.f_prime);
  }
  out.samples = total;
  out.c_star = std::max(out.displacement / mu, out.remainder_bound / (eps * mu));
  out.c_prime = out.c_star + c2;
  out.predicted_scale = eps * mu * out.c_star;
  return out;
}

NormalFormResult normalize(const TorusHamiltonian& h, double eps,
                           const ArithmeticProfile& profile,
                           const TransformOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::domain, "eps must lie in (0, 1)");
  const double m = mu(profile, eps);
  const int q = truncation_order(profile, eps);
  const AveragedSplit split = split_average(h.perturbation(eps), h.d());
  const HomologicalSolution hom = solve_homological(split.oscillating, h.freq(), profile, q);
  return apply_transform(scale(h, eps), split, hom, eps, m, h.C2(), opts);
}

PhaseFunction normalized_hamiltonian(const TorusHamiltonian& h,
                                     const NormalFormResult& result) {
  return PhaseFunction(h.freq().full(), result.eps * result.fbar);
}

}  // namespace restor
