#include "restor/assumptions.hpp"

#include <algorithm>
#include <cmath>

#include "restor/error.hpp"

namespace restor {

namespace {

double frobenius_at(const TrigPolyMatrix& m, std::span<const double> theta) {
  return m(theta).norm();
}

// Maximizes f on [lo, hi] by golden-section search.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double wrap_unit(double x) { return x - std::floor(x); }

}  // namespace

ConeTest cone_test(const Eigen::MatrixXd& a_star, const Eigen::VectorXd& v,
                   double tol) {
  ConeTest out;
  out.value = v.dot(a_star * v);
  out.member = std::abs(out.value) <= tol * a_star.norm() * v.squaredNorm();
  return out;
}

double gamma_star(const Eigen::MatrixXd& a_star, const Eigen::VectorXd& i0,
                  double tol) {
  const ConeTest c = cone_test(a_star, i0, tol);
  if (c.member)
    throw Error(ErrorCode::refused,
                "initial action lies in the isotropic cone of A*; gamma* undefined");
  return std::abs(c.value) / 4.0;
}

Eigen::MatrixXd slow_derivative(const TrigPolyMatrix& abar, int i,
                                std::span<const double> slow_point) {
  std::vector<double> theta(abar.size(), 0.0);
  std::copy(slow_point.begin(), slow_point.end(), theta.begin());
  return abar.partial(i)(theta);
}

WitnessA1 check_a1(const TorusHamiltonian& h, const CheckOptions& opts) {
  WitnessA1 out;
  const int n = h.n();
  const int d = h.d();
  const TrigPolyMatrix abar = h.A().average_fast(d);
  if (abar.is_constant()) return out;
  out.verdict = true;

  std::vector<TrigPolyMatrix> derivs;
  for (int l = 0; l < d; ++l) derivs.push_back(abar.partial(l));

  int m = std::max(2, opts.grid_per_axis);
  while (m > 2 && std::pow(static_cast<double>(m), d) > opts.max_grid_points) --m;
  out.grid_per_axis = m;

  std::vector<int> idx(d, 0);
  std::vector<double> theta(n, 0.0);
  double best_norm = -1.0;
  std::vector<double> best_point(d, 0.0);
  int best_i = 0;
  for (;;) {
    for (int a = 0; a < d; ++a) theta[a] = static_cast<double>(idx[a]) / m;
    for (int l = 0; l < d; ++l) {
      const double f = frobenius_at(derivs[l], theta);
      // Ties within rounding go to the later grid point.
      if (f >= best_norm * (1.0 - 1e-12)) {
        best_point.assign(theta.begin(), theta.begin() + d);
        best_i = l;
      }
      best_norm = std::max(best_norm, f);
    }
    int a = d - 1;
    while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
    if (a < 0) break;
  }
  out.grid_max = best_norm;

  // Coordinate ascent within one grid cell of the best grid point.
  std::vector<double> point = best_point;
  auto objective = [&](const std::vector<double>& slow) {
    std::fill(theta.begin(), theta.end(), 0.0);
    std::copy(slow.begin(), slow.end(), theta.begin());
    return frobenius_at(derivs[best_i], theta);
  };
  double current = objective(point);
  const double cell = 1.0 / m;
  for (int sweep = 0; sweep < 50; ++sweep) {
    double moved = 0.0;
    for (int a = 0; a < d; ++a) {
      std::vector<double> trial = point;
      const double centre = point[a];
      const double x = golden_max(
          [&](double s) {
            trial[a] = s;
            return objective(trial);
          },
          centre - cell, centre + cell, opts.refine_tol);
      trial[a] = x;
      const double value = objective(trial);
      if (value > current) {
        moved = std::max(moved, std::abs(x - centre));
        point[a] = x;
        current = value;
      }
    }
    if (moved <= opts.refine_tol) break;
  }
  for (double& v : point) v = wrap_unit(v);

  // Lipschitz bound of |d_l Abar|_F from second-derivative coefficient sums.
  double lip = 0.0;
  for (int l = 0; l < d; ++l) {
    for (int a = 0; a < d; ++a) {
      const TrigPolyMatrix second = derivs[l].partial(a);
      double sq = 0.0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) sq += std::pow(second.entry(p, q).norm_bound(0), 2);
      lip = std::max(lip, std::sqrt(sq));
    }
  }
  out.grid_tol = d * 0.5 * cell * lip;

  out.theta_star = point;
  out.i = best_i;
  out.a_star = slow_derivative(abar, best_i, point);
  out.frobenius = out.a_star.norm();
  return out;
}

VerdictA2 check_a2(const WitnessA1& a1, const CheckOptions& opts) {
  VerdictA2 out;
  if (!a1.verdict) return out;
  out.applicable = true;
  const Eigen::Index n = a1.a_star.rows();
  const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, a1.i);
  const ConeTest c = cone_test(a1.a_star, e, opts.cone_tol);
  out.a_star = c.value;
  out.verdict = !c.member;
  out.reversal = out.verdict && out.a_star > 0.0;
  return out;
}

VerdictA3 check_a3(const WitnessA1& a1, const CheckOptions& opts) {
  VerdictA3 out;
  if (!a1.verdict) return out;
  out.applicable = true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a1.a_star,
                                                        Eigen::EigenvaluesOnly);
  out.eigenvalues = solver.eigenvalues();
  const double floor = opts.cone_tol * a1.a_star.norm();
  const double lo = out.eigenvalues.minCoeff();
  const double hi = out.eigenvalues.maxCoeff();
  if (hi < -floor) {
    out.verdict = true;
    out.lambda_star = hi;
  } else if (lo > floor) {
    out.verdict = true;
    out.reversal = true;
    out.lambda_star = -lo;
  }
  return out;
}

VerdictA4 check_a4(const TorusHamiltonian& h, const CheckOptions& opts) {
  VerdictA4 out;
  const TrigPolyMatrix abar = h.A().average_fast(h.d());
  out.constant_average = abar.is_constant();
  out.a0 = abar.constant_part();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.a0, Eigen::EigenvaluesOnly);
  out.margin = solver.eigenvalues().cwiseAbs().minCoeff();
  out.verdict = out.constant_average && out.margin > opts.singular_tol;
  return out;
}

AssumptionReport check_assumptions(const TorusHamiltonian& h, const CheckOptions& opts) {
  AssumptionReport r;
  r.a1 = check_a1(h, opts);
  r.a2 = check_a2(r.a1, opts);
  r.a3 = check_a3(r.a1, opts);
  r.a4 = check_a4(h, opts);
  return r;
}

}  // namespace restor
