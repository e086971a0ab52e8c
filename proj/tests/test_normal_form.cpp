#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "restor/error.hpp"
#include "restor/normal_form.hpp"

using namespace restor;
using fixtures::kTwoPi;

namespace {

ActionPolynomial monomial_poly(int n, const Powers& powers, const TrigPolyScalar& c) {
  ActionPolynomial p(n);
  p.add(powers, c);
  return p;
}

TransformOptions small_grid() {
  TransformOptions o;
  o.theta_grid = 8;
  o.action_samples = 2;
  return o;
}

}  // namespace

TEST_CASE("split into average and oscillation") {
  const ActionPolynomial c = ActionPolynomial::quadratic_form(
      TrigPolyMatrix::constant(Eigen::Matrix2d{{1, 0.5}, {0.5, 2}}));
  AveragedSplit s = split_average(c, 1);
  CHECK(s.mean == c);
  CHECK(s.oscillating.is_zero());

  const auto f = monomial_poly(2, {2, 0}, TrigPolyScalar::sine({0, 1}, 1.0));
  s = split_average(f, 1);
  CHECK(s.mean.is_zero());
  CHECK(s.oscillating == f);

  const auto mixed = f + monomial_poly(2, {1, 1}, TrigPolyScalar::cosine({1, 0}, 0.3)) +
                     monomial_poly(2, {0, 3}, TrigPolyScalar::cosine({1, 2}, 0.7));
  s = split_average(mixed, 1);
  CHECK(s.mean + s.oscillating == mixed);
}

TEST_CASE("homological equation for a resonant harmonic") {
  const FrequencyVector w(2, 1, {1.0});
  const ArithmeticProfile p(w, 100);
  const auto osc = monomial_poly(2, {2, 0}, TrigPolyScalar::cosine({1, 1}, 1.0));
  const HomologicalSolution g = solve_homological(osc, w, p, 10);
  const auto expect = monomial_poly(2, {2, 0}, TrigPolyScalar::sine({1, 1}, 1.0 / kTwoPi));
  for (const auto& [k, c] : expect.terms().at({2, 0}).terms())
    CHECK(std::abs(g.generator.terms().at({2, 0}).coefficient(k) - c) < 1e-16);
  CHECK(g.divisor_worst == 1.0);

  const auto slow = monomial_poly(2, {2, 0}, TrigPolyScalar::cosine({1, 0}, 1.0));
  CHECK(solve_homological(slow, w, p, 10).generator.is_zero());
}

TEST_CASE("homological residual and coefficient bounds") {
  const FrequencyVector w(3, 1, {1.0, fixtures::kGolden}, 50);
  const ArithmeticProfile prof(w, 50);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> ki(-4, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ActionPolynomial f(3);
  for (int m = 0; m < 20; ++m) {
    Wavevector k{ki(rng), ki(rng), ki(rng)};
    if (k[1] == 0 && k[2] == 0) continue;
    TrigPolyScalar c(3);
    c.add_mode(k, {u(rng), u(rng)});
    f.add({m % 3, 2 - m % 3, 0}, c);
  }
  const int q = 8;
  const HomologicalSolution g = solve_homological(f, w, prof, q);
  // omega . d_theta g == f restricted to |k|_1 <= q, coefficient by coefficient.
  for (const auto& [powers, fc] : f.terms()) {
    TrigPolyScalar lhs(3);
    if (g.generator.terms().count(powers)) {
      const TrigPolyScalar& gc = g.generator.terms().at(powers);
      TrigPolyScalar a = gc.partial(1), b = gc.partial(2);
      a *= w.fast()[0];
      b *= w.fast()[1];
      lhs = a + b;
    }
    for (const auto& [k, c] : fc.terms()) {
      if (l1_norm(k) > q) continue;
      CHECK(std::abs(lhs.coefficient(k) - c) <= 1e-13 * std::abs(c));
      const std::complex<double> gk = g.generator.terms().at(powers).coefficient(k);
      CHECK(std::abs(gk) <= prof.psi(q) * std::abs(c) / kTwoPi * (1 + 1e-14));
    }
  }
  CHECK(g.divisor_worst <= prof.psi(q));
  for (const DivisorUse& d : g.divisors) {
    const int shell = std::abs(d.k[1]) + std::abs(d.k[2]);
    CHECK(d.inverse_divisor <= psi(w, shell) * (1 + 1e-14));
  }
  CHECK(g.tail.max_degree() >= 0);
}

TEST_CASE("identity transform for a purely resonant Hamiltonian") {
  TrigPolyMatrix a = TrigPolyMatrix::constant(fixtures::benchmark_a0());
  a.add(TrigPolyScalar::cosine({1, 0}, 0.01), fixtures::e1e1());
  const TorusHamiltonian h(FrequencyVector(2, 1, {1.0}), a);
  const ArithmeticProfile p(h.freq(), 1000);
  const NormalFormResult r = normalize(h, 1e-2, p, small_grid());
  CHECK(r.generator.is_zero());
  CHECK(r.displacement == 0.0);
  CHECK(r.remainder_bound < 1e-15);
}

TEST_CASE("remainder scales like eps mu") {
  const TorusHamiltonian h = fixtures::single_harmonic();
  const ArithmeticProfile p(h.freq(), 2000);
  const NormalFormResult a = normalize(h, 1e-2, p, small_grid());
  const NormalFormResult b = normalize(h, 1e-3, p, small_grid());
  const double ra = a.remainder_bound / (a.eps * a.mu), rb = b.remainder_bound / (b.eps * b.mu);
  CHECK(std::max(ra, rb) / std::min(ra, rb) < 10.0);
  CHECK(a.displacement <= a.c_star * a.mu);
  CHECK(b.displacement <= b.c_star * b.mu);
  CHECK(std::max(a.c_star, b.c_star) / std::min(a.c_star, b.c_star) < 3.0);
  CHECK(a.truncation_q == 100);
  CHECK(b.c_prime == doctest::Approx(b.c_star + h.C2()));
}

TEST_CASE("the generator flow is symplectic and conserves the generator") {
  const auto g = monomial_poly(2, {2, 0}, TrigPolyScalar::sine({1, 1}, 0.5)) +
                 monomial_poly(2, {1, 1}, TrigPolyScalar::cosine({0, 1}, 0.3));
  const PhaseFunction chi(0.2 * g);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-1.0, 1.0);
  const double h = 1e-6;
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  omega.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  for (int trial = 0; trial < 20; ++trial) {
    const PhaseState z{Eigen::Vector2d(u(rng), u(rng)), Eigen::Vector2d(v(rng), v(rng)), 0.0};
    const PhaseState img = transform_point(chi, z);
    // Midpoint conserves chi up to its O(h^2) energy error at h = 1e-3.
    CHECK(chi.value(img.theta, img.action) ==
          doctest::Approx(chi.value(z.theta, z.action)).epsilon(1e-7));
    Eigen::Matrix4d jac;
    for (int c = 0; c < 4; ++c) {
      PhaseState zp = z, zm = z;
      (c < 2 ? zp.theta[c] : zp.action[c - 2]) += h;
      (c < 2 ? zm.theta[c] : zm.action[c - 2]) -= h;
      const PhaseState ip = transform_point(chi, zp), im = transform_point(chi, zm);
      for (int r = 0; r < 2; ++r) {
        jac(r, c) = angle_difference(ip.theta[r], im.theta[r]) / (2 * h);
        jac(r + 2, c) = (ip.action[r] - im.action[r]) / (2 * h);
      }
    }
    CHECK((jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("transform leaving B_3 is refused") {
  const TorusHamiltonian h = fixtures::single_harmonic(5e-4, 50.0);
  const ArithmeticProfile p(h.freq(), 100);
  try {
    normalize(h, 0.5, p, small_grid());
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ball_exit);
  }
  CHECK_THROWS_AS(normalize(h, 1.5, p, small_grid()), Error);
}
