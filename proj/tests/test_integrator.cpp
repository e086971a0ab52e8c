#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "restor/error.hpp"
#include "restor/integrator.hpp"

using namespace restor;

namespace {

TorusHamiltonian mixing_model() {
  TrigPolyMatrix a = TrigPolyMatrix::constant(Eigen::Matrix2d{{0.5, 0.1}, {0.1, 0.4}});
  a.add(TrigPolyScalar::cosine({1, 0}, 0.3), Eigen::Matrix2d{{1, 0}, {0, -1}});
  a.add(TrigPolyScalar::sine({1, 1}, 0.2), Eigen::Matrix2d{{0, 1}, {1, 0}});
  ActionPolynomial r(2);
  r.add({1, 2}, TrigPolyScalar::cosine({0, 1}, 0.1));
  return {FrequencyVector(2, 1, {1.0}), a, r};
}

double state_distance(const PhaseState& a, const PhaseState& b) {
  double d = (a.action - b.action).cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < a.theta.size(); ++k)
    d = std::max(d, std::abs(angle_difference(a.theta[k], b.theta[k])));
  return d;
}

PhaseState run(const PhaseFunction& h, PhaseState s, double t, double dt) {
  return integrate(h, s, t, dt).samples.back();
}

}  // namespace

TEST_CASE("vector field of linear and constant quadratic Hamiltonians") {
  const FrequencyVector w(3, 1, {1.0, fixtures::kGolden});
  const TorusHamiltonian lin(w, TrigPolyMatrix(3));
  PhaseState s{Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d(0.5, -1.0, 2.0), 0.0};
  VectorField f = vector_field(lin, s);
  CHECK(f.theta_dot == w.full());
  CHECK(f.action_dot.isZero());

  Eigen::Matrix3d a0{{1, 0.2, 0}, {0.2, 2, 0.1}, {0, 0.1, 3}};
  const TorusHamiltonian quad = scale(TorusHamiltonian(w, TrigPolyMatrix::constant(a0)), 0.01);
  f = vector_field(quad, s);
  CHECK((f.theta_dot - (w.full() + 0.02 * a0 * s.action)).norm() < 1e-15);
  CHECK(f.action_dot.isZero());
}

TEST_CASE("vector field matches central differences") {
  const TorusHamiltonian h = mixing_model();
  const PhaseFunction ph = h.phase_function();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-2.0, 2.0);
  const double step = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector2d th(u(rng), u(rng)), ac(v(rng), v(rng));
    const VectorField f = vector_field(ph, PhaseState{th, ac, 0.0});
    for (int a = 0; a < 2; ++a) {
      Eigen::Vector2d e = Eigen::Vector2d::Unit(a) * step;
      const double dth = (ph.value(th + e, ac) - ph.value(th - e, ac)) / (2 * step);
      const double dac = (ph.value(th, ac + e) - ph.value(th, ac - e)) / (2 * step);
      CHECK(std::abs(f.action_dot[a] + dth) < 1e-8 * std::max(1.0, std::abs(dth)));
      CHECK(std::abs(f.theta_dot[a] - dac) < 1e-8 * std::max(1.0, std::abs(dac)));
    }
  }
}

TEST_CASE("midpoint is exact for integrable constant-coefficient flows") {
  const FrequencyVector w(2, 1, {1.0});
  const PhaseFunction lin = TorusHamiltonian(w, TrigPolyMatrix(2)).phase_function();
  PhaseState s{Eigen::Vector2d(0.2, 0.9), Eigen::Vector2d(0.4, 0.7), 0.0};
  PhaseState one = step_midpoint(lin, s, 0.37);
  CHECK(one.theta[0] == doctest::Approx(0.2));
  CHECK(one.theta[1] == doctest::Approx(0.27).epsilon(1e-14));
  CHECK(one.action == s.action);

  const Eigen::Matrix2d a0{{1.0, 0.3}, {0.3, 2.0}};
  const TorusHamiltonian q = scale(TorusHamiltonian(w, TrigPolyMatrix::constant(a0)), 1e-3);
  one = step_midpoint(q.phase_function(), s, 0.01);
  CHECK(one.action == s.action);
  const Eigen::Vector2d adv = 0.01 * (w.full() + 2e-3 * a0 * s.action);
  CHECK(std::abs(angle_difference(one.theta[0], s.theta[0] + adv[0])) < 1e-15);
  CHECK(std::abs(angle_difference(one.theta[1], s.theta[1] + adv[1])) < 1e-15);
}

TEST_CASE("one step forward and back") {
  const PhaseFunction h = mixing_model().phase_function();
  const PhaseState s{Eigen::Vector2d(0.3, 0.6), Eigen::Vector2d(0.5, -0.4), 0.0};
  const PhaseState back = step_midpoint(h, step_midpoint(h, s, 0.05), -0.05);
  CHECK(state_distance(back, s) < 1e-12);
}

TEST_CASE("time reversal over 1e4 steps") {
  const PhaseFunction h = scale(fixtures::single_harmonic(0.05, 0.05), 0.1).phase_function();
  PhaseState s{Eigen::Vector2d(0.75, 0.0), Eigen::Vector2d(1.0, 0.5), 0.0};
  const PhaseState s0 = s;
  MidpointStepper st(h);
  for (int k = 0; k < 10000; ++k) st.step(s, 0.01);
  for (int k = 0; k < 10000; ++k) st.step(s, -0.01);
  CHECK(state_distance(s, s0) < 1e-9);
}

TEST_CASE("linear flow over long times") {
  const PhaseFunction lin =
      TorusHamiltonian(FrequencyVector(3, 1, {1.0, fixtures::kGolden}), TrigPolyMatrix(3))
          .phase_function();
  const PhaseState s{Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d(0.5, -1.0, 2.0), 0.0};
  IntegrateOptions opts;
  opts.stride = 1000;
  const Trajectory t = integrate(lin, s, 1e3, 1e-2, opts);
  for (const PhaseState& p : t.samples) CHECK(p.action == s.action);
  CHECK(t.max_energy_error() < 1e-12);
  CHECK(t.samples.back().t == 1e3);
}

TEST_CASE("energy error is bounded and not secular") {
  const PhaseFunction h = scale(mixing_model(), 0.1).phase_function();
  const PhaseState s{Eigen::Vector2d(0.3, 0.6), Eigen::Vector2d(0.5, -0.4), 0.0};
  const Trajectory t = integrate(h, s, 2000.0, 1e-2);
  const std::size_t half = t.energy.size() / 2;
  double first = 0.0, second = 0.0;
  for (std::size_t k = 0; k < t.energy.size(); ++k) {
    const double e = std::abs(t.energy[k] - t.energy[0]);
    (k < half ? first : second) = std::max(k < half ? first : second, e);
  }
  CHECK(second / first < 2.0);
  for (std::size_t k = 1; k < t.samples.size(); ++k) CHECK(t.samples[k].t > t.samples[k - 1].t);
}

TEST_CASE("second order convergence") {
  const PhaseFunction h = mixing_model().phase_function();
  const PhaseState s{Eigen::Vector2d(0.3, 0.6), Eigen::Vector2d(0.5, -0.4), 0.0};
  std::vector<double> err;
  for (double dt : {0.04, 0.02, 0.01}) {
    err.push_back(state_distance(run(h, s, 2.0, dt), run(h, s, 2.0, dt / 8)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.2));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("ball exits are reported") {
  const ExampleModel ex = builtin_example();
  const PhaseState s{Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.0, 0.5), 0.0};
  IntegrateOptions opts;
  opts.ball_radius = 2.0;
  const Trajectory t = integrate(ex.hamiltonian, s, 100.0, 1e-2, opts);
  CHECK(t.exited);
  // I_1 falls at rate 2 pi * 0.25 and reaches -2 near t = 1.27.
  CHECK(t.exit_time == doctest::Approx(2.0 / (fixtures::kTwoPi * 0.25)).epsilon(1e-2));
}

TEST_CASE("non-convergent steps fail loudly") {
  const PhaseFunction h = mixing_model().phase_function();
  const PhaseState s{Eigen::Vector2d(0.3, 0.6), Eigen::Vector2d(50.0, -40.0), 0.0};
  StepOptions opts;
  opts.max_halvings = 1;
  CHECK_THROWS_AS(step_midpoint(h, s, 1.0, opts), Error);
}
