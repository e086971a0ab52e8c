#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "restor/error.hpp"
#include "restor/freq_arith.hpp"

using namespace restor;
using fixtures::kGolden;

namespace {

// Brute force over the full box [-q, q]^m, no symmetry reduction.
double naive_psi(const std::vector<double>& w, int q) {
  const int m = static_cast<int>(w.size());
  std::vector<int> k(m, -q);
  double best = 0.0;
  for (;;) {
    int l1 = 0;
    for (int v : k) l1 += std::abs(v);
    if (l1 > 0 && l1 <= q) {
      double dot = 0.0;
      for (int j = 0; j < m; ++j) dot += k[j] * w[j];
      best = std::max(best, 1.0 / std::abs(dot));
    }
    int a = m - 1;
    while (a >= 0 && ++k[a] > q) k[a--] = -q;
    if (a < 0) break;
  }
  return best;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::usage;
}

}  // namespace

TEST_CASE("periodic frequency has Psi = 1 and Delta = identity") {
  const FrequencyVector w(2, 1, {1.0}, 200);
  for (int q = 1; q <= 200; ++q) CHECK(psi(w, q) == 1.0);
  const ArithmeticProfile p(w, 200);
  for (double x : {1.0, 1.5, 17.25, 199.0}) CHECK(delta(p, x) == doctest::Approx(x).epsilon(1e-14));
  CHECK(mu(p, 1e-2) == doctest::Approx(1e-2).epsilon(1e-14));
}

TEST_CASE("golden vector psi values") {
  const FrequencyVector w(3, 1, {1.0, kGolden}, 50);
  CHECK(psi(w, 1) == doctest::Approx(1.0 / kGolden));
  CHECK(psi(w, 2) == doctest::Approx(std::pow(kGolden, -2)).epsilon(1e-12));
  CHECK(psi(w, 3) == doctest::Approx(std::pow(kGolden, -3)).epsilon(1e-12));
  // Psi(1) = 1 / min |w_m| exceeds 1 unless every component has modulus 1.
  CHECK(psi(w, 1) > 1.0);
}

TEST_CASE("delta at the golden breakpoints") {
  const FrequencyVector w(3, 1, {1.0, kGolden}, 50);
  const ArithmeticProfile p(w, 50);
  CHECK(delta(p, p.psi(1)) == doctest::Approx(1.0));
  CHECK(delta(p, 2.0 * p.psi(2)) == doctest::Approx(2.0));
  // On [2, 3) Q Psi(2) stays below 10, and 3 Psi(3) > 10: the sup is 3, not attained.
  CHECK(delta(p, 10.0) == doctest::Approx(3.0));
  CHECK(delta(p, 3.5 * p.psi(3)) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("kappa substitution") {
  const FrequencyVector w(3, 1, {1.0, kGolden});
  const ArithmeticProfile p1(w, 2000, 1.0), p2(w, 2000, 2.0);
  for (double e : {1e-2, 3e-3, 1e-3}) CHECK(mu(p2, e) == mu(p1, e / 2.0));
}

TEST_CASE("golden mu scales like sqrt(eps)") {
  const FrequencyVector w(3, 1, {1.0, kGolden});
  const ArithmeticProfile p(w, 2000);
  const double r = std::log(mu(p, 1e-3)) / std::log(1e-3);
  CHECK(r == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("psi agrees with brute force on random frequencies") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 1 + trial % 3;
    std::vector<double> f(m);
    double s = 0.0;
    for (double& x : f) s = std::max(s, std::abs(x = u(rng)));
    for (double& x : f) x /= s;
    const FrequencyVector w(m + 1, 1, f, 20);
    for (int q = 1; q <= 20; ++q) CHECK(psi(w, q) == naive_psi(f, q));
  }
}

TEST_CASE("monotonicity and Galois consistency") {
  const FrequencyVector w(3, 1, {1.0, kGolden});
  const ArithmeticProfile p(w, 500);
  for (int q = 1; q < 500; ++q) CHECK(p.psi(q) <= p.psi(q + 1));
  double prev = 0.0;
  for (double x = p.psi(1); x < 200.0; x *= 1.07) {
    const double dx = delta(p, x);
    CHECK(dx >= prev);
    prev = dx;
    // Psi is taken as a left limit: the sup may sit at a jump without being attained.
    const int left = static_cast<int>(std::ceil(dx)) - 1;
    CHECK(dx * p.psi(std::max(1, left)) <= x * (1 + 1e-14));
    for (const auto& b : p.breakpoints())
      if (b.q > dx) CHECK(b.q * b.psi > x);
  }
  for (double e = 1e-2; e > 1e-4; e /= 1.5) {
    CHECK(mu(p, e) >= e / p.kappa());
    CHECK(mu(p, e) <= mu(p, e * 1.5));
  }
}

TEST_CASE("refusals") {
  CHECK(code_of([] { FrequencyVector(2, 1, {0.5}); }) == ErrorCode::invalid_model);
  CHECK(code_of([] { FrequencyVector(3, 1, {1.0, 0.5}); }) == ErrorCode::not_certified);
  const FrequencyVector w(3, 1, {1.0, kGolden}, 30);
  CHECK(code_of([&] { psi(w, 31); }) == ErrorCode::not_certified);
  const ArithmeticProfile p(w, 30);
  CHECK(code_of([&] { delta(p, 1.0); }) == ErrorCode::domain);
  CHECK(code_of([&] { delta(p, 1e6); }) == ErrorCode::table_exhausted);
}
