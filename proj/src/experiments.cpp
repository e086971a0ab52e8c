#include "restor/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "restor/error.hpp"
#include "restor/parallel.hpp"

namespace restor {

namespace {

constexpr int kLadderRungs = 12;
constexpr double kRhoStep = 1.0 / 1024.0;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void require_unit_direction(const Eigen::VectorXd& v, int n) {
  if (v.size() != n) throw Error(ErrorCode::domain, "initial direction has wrong length");
  if (std::abs(v.cwiseAbs().maxCoeff() - 1.0) > 1e-12)
    throw Error(ErrorCode::domain, "initial direction must have sup norm 1");
}

ArithmeticProfile profile_for(const TorusHamiltonian& h, const ExperimentConfig& config) {
  return ArithmeticProfile(h.freq(), h.freq().q_cert(), config.kappa.value_or(h.kappa()));
}

// Fast-angle lifts; lift 0 is canonical (all zero).
std::vector<Eigen::VectorXd> draw_lifts(std::mt19937_64& rng, int fast_dim, int samples) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::VectorXd> lifts;
  lifts.push_back(Eigen::VectorXd::Zero(fast_dim));
  for (int l = 1; l < samples; ++l) {
    Eigen::VectorXd v(fast_dim);
    for (int a = 0; a < fast_dim; ++a) v[a] = unif(rng);
    lifts.push_back(v);
  }
  return lifts;
}

LiftRun run_lift(const PhaseFunction& ham, const Eigen::VectorXd& theta0,
                 const Eigen::VectorXd& action0, int slow_index, int d, double tau,
                 const ExperimentConfig& config) {
  const int n = static_cast<int>(theta0.size());
  LiftRun run;
  run.theta0 = theta0;
  run.action0 = action0;
  PhaseState s0{theta0, action0, 0.0};
  const double h0 = ham.value(theta0, action0);
  const double scale =
      ham.linear().cwiseAbs().maxCoeff() * action0.cwiseAbs().maxCoeff() + std::abs(h0);
  IntegrateOptions opts;
  opts.ball_radius = config.ball_radius;
  const int stride = config.trajectory_stride;
  std::size_t count = 0;
  const RunSummary summary =
      integrate_observed(ham, s0, tau, config.dt, opts, [&](const PhaseState& s) {
        for (int j = d; j < n; ++j)
          run.fast_sup = std::max(run.fast_sup, std::abs(s.action[j] - action0[j]));
        run.energy_error =
            std::max(run.energy_error, std::abs(ham.value(s.theta, s.action) - h0) / scale);
        if (stride > 0 && count % stride == 0) run.samples.push_back(s);
        ++count;
      });
  if (stride > 0 && (count - 1) % stride != 0) run.samples.push_back(summary.final_state);
  run.action_end = summary.final_state.action;
  run.slow_signed = run.action_end[slow_index] - action0[slow_index];
  run.growth = run.action_end.cwiseAbs().maxCoeff() / action0.cwiseAbs().maxCoeff();
  run.steps = summary.steps;
  run.exited = summary.exited;
  run.exit_time = summary.exit_time;
  return run;
}

// Runs every (eps, lift) pair from Itilde(0) = direction at (theta*, lift).
DriftReport run_sweep(const TorusHamiltonian& h, const WitnessA1& a1,
                      const Eigen::VectorXd& direction, const DeltaChoice& delta,
                      const std::vector<Eigen::VectorXd>& lifts,
                      const ExperimentConfig& config, const std::string& mode) {
  const int n = h.n();
  const int d = h.d();
  const ArithmeticProfile profile = profile_for(h, config);

  DriftReport report;
  report.mode = mode;
  report.i = a1.i;
  report.theta_star = a1.theta_star;
  report.a_star = a1.a_star;
  report.direction = direction;
  report.kappa = profile.kappa();
  report.dt = config.dt;
  report.seed = config.seed;
  report.delta = delta;

  std::vector<PhaseFunction> hams(config.eps_list.size());
  for (std::size_t e = 0; e < config.eps_list.size(); ++e) {
    EpsilonRecord rec;
    rec.eps = config.eps_list[e];
    rec.tau = delta.delta / rec.eps;
    try {
      if (!(rec.eps > 0.0 && rec.eps < 1.0))
        throw Error(ErrorCode::domain, "eps must lie in (0, 1)");
      rec.mu = mu(profile, rec.eps);
      if (rec.mu > config.mu0) {
        std::ostringstream msg;
        msg << "mu(eps) = " << rec.mu << " exceeds the gate mu0 = " << config.mu0;
        throw Error(ErrorCode::refused, msg.str());
      }
      hams[e] = scale(h, rec.eps).phase_function();
    } catch (const Error& err) {
      rec.refused = true;
      rec.message = err.what();
    }
    rec.runs.resize(lifts.size());
    report.records.push_back(std::move(rec));
  }

  const std::size_t per = lifts.size();
  parallel_for(report.records.size() * per, [&](std::size_t idx) {
    EpsilonRecord& rec = report.records[idx / per];
    if (rec.refused) return;
    const Eigen::VectorXd& lift = lifts[idx % per];
    Eigen::VectorXd theta0(n);
    for (int a = 0; a < d; ++a) theta0[a] = a1.theta_star[a];
    for (int a = d; a < n; ++a) theta0[a] = lift[a - d];
    rec.runs[idx % per] =
        run_lift(hams[idx / per], theta0, direction, a1.i, d, rec.tau, config);
  });

  std::vector<double> xs, ys, slow_all, fast_all, growth_c;
  for (EpsilonRecord& rec : report.records) {
    if (rec.refused) continue;
    std::vector<double> slow, fast, growth;
    rec.slow_signed_min = std::numeric_limits<double>::infinity();
    for (const LiftRun& run : rec.runs) {
      slow.push_back(std::abs(run.slow_signed));
      fast.push_back(run.fast_sup / rec.mu);
      growth.push_back(run.growth);
      rec.slow_signed_min = std::min(rec.slow_signed_min, run.slow_signed);
      rec.energy_error = std::max(rec.energy_error, run.energy_error);
      rec.exited = rec.exited || run.exited;
    }
    rec.slow_worst = *std::min_element(slow.begin(), slow.end());
    rec.slow_median = median(slow);
    rec.fast_worst = *std::max_element(fast.begin(), fast.end());
    rec.fast_median = median(fast);
    rec.growth_worst = *std::min_element(growth.begin(), growth.end());
    rec.growth_median = median(growth);
    if (rec.exited) continue;
    xs.push_back(std::log(rec.eps));
    ys.push_back(std::log(rec.eps * rec.slow_worst));
    slow_all.push_back(rec.slow_worst);
    fast_all.push_back(rec.fast_worst);
    growth_c.push_back(rec.growth_worst - 1.0);
  }
  report.slope = xs.size() >= 2 ? fit_slope(xs, ys) : std::nan("");
  if (!slow_all.empty()) {
    report.c = *std::min_element(slow_all.begin(), slow_all.end());
    report.C = *std::max_element(fast_all.begin(), fast_all.end());
    const double fmin = *std::min_element(fast_all.begin(), fast_all.end());
    report.fast_spread = fmin > 0.0 ? report.C / fmin : std::numeric_limits<double>::infinity();
    report.growth_c_min = *std::min_element(growth_c.begin(), growth_c.end());
    report.growth_c_max = *std::max_element(growth_c.begin(), growth_c.end());
  }
  return report;
}

WitnessA1 require_a1(const TorusHamiltonian& h, const ExperimentConfig& config) {
  WitnessA1 a1 = check_a1(h, config.check);
  if (!a1.verdict)
    throw Error(ErrorCode::refused, "a1 fails: the fast average of A is constant");
  return a1;
}

Eigen::VectorXd direction_or_axis(const ExperimentConfig& config, int n, int i) {
  Eigen::VectorXd v = config.i0_direction;
  if (v.size() == 0) v = Eigen::VectorXd::Unit(n, i);
  require_unit_direction(v, n);
  return v;
}

DeltaChoice resolve_delta(const TorusHamiltonian& h, const WitnessA1& a1,
                          const Eigen::VectorXd& v, const ExperimentConfig& config) {
  if (!config.delta) return choose_delta(h, a1, v);
  if (!(*config.delta > 0.0 && *config.delta < 1.0))
    throw Error(ErrorCode::domain, "delta must lie in (0, 1)");
  DeltaChoice out;
  out.gamma = gamma_star(a1.a_star, v, config.check.cone_tol);
  out.delta = *config.delta;
  return out;
}

}  // namespace

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

DeltaChoice choose_delta(const TorusHamiltonian& h, const WitnessA1& a1,
                         const Eigen::VectorXd& i0) {
  if (!a1.verdict) throw Error(ErrorCode::refused, "a1 witness unavailable");
  const int n = h.n();
  const int d = h.d();
  DeltaChoice out;
  out.gamma = gamma_star(a1.a_star, i0);
  const double sign = i0.dot(a1.a_star * i0) < 0.0 ? -1.0 : 1.0;
  const TrigPolyMatrix deriv = h.A().average_fast(d).partial(a1.i);

  std::vector<double> theta(n, 0.0);
  auto rate_ok = [&](const std::vector<double>& slow) {
    std::copy(slow.begin(), slow.end(), theta.begin());
    return sign * i0.dot(deriv(theta) * i0) >= 2.0 * out.gamma;
  };
  // Every point of the sup-norm shell of radius r around theta*.
  constexpr int kFaceGrid = 16;
  auto shell_ok = [&](double r) {
    std::vector<double> p(d);
    for (int a = 0; a < d; ++a) {
      for (double s : {-1.0, 1.0}) {
        long faces = 1;
        for (int b = 1; b < d; ++b) faces *= kFaceGrid + 1;
        for (long f = 0; f < faces; ++f) {
          long code = f;
          for (int b = 0; b < d; ++b) {
            if (b == a) {
              p[b] = a1.theta_star[b] + s * r;
              continue;
            }
            const int g = static_cast<int>(code % (kFaceGrid + 1));
            code /= kFaceGrid + 1;
            p[b] = a1.theta_star[b] - r + 2.0 * r * g / kFaceGrid;
          }
          if (!rate_ok(p)) return false;
        }
      }
    }
    return true;
  };

  double lo = 0.0, hi = -1.0;
  for (double r = kRhoStep; r <= 0.5; r += kRhoStep) {
    if (!shell_ok(r)) {
      hi = r;
      break;
    }
    lo = r;
  }
  if (hi < 0.0) {
    out.rho = 0.5;
  } else {
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (shell_ok(mid) ? lo : hi) = mid;
    }
    out.rho = lo;
  }
  const double c1 = h.C1();
  for (int m = 0; m <= kLadderRungs; ++m) {
    const double delta = std::ldexp(1.0, -m);
    if (delta * (8.0 * n * c1 + 1.0) <= out.rho && delta * (4.0 * n * c1 + 1.0) <= 1.0) {
      out.delta = delta;
      out.rung = m;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "no delta in the ladder fits rho = " << out.rho << " with C1 = " << c1;
  throw Error(ErrorCode::refused, msg.str());
}

DriftReport theorem1_run(const TorusHamiltonian& h, const ExperimentConfig& config) {
  const WitnessA1 a1 = require_a1(h, config);
  const Eigen::VectorXd v = direction_or_axis(config, h.n(), a1.i);
  const DeltaChoice delta = resolve_delta(h, a1, v, config);
  std::mt19937_64 rng(config.seed);
  const auto lifts = draw_lifts(rng, h.n() - h.d(), config.fast_angle_samples);
  return run_sweep(h, a1, v, delta, lifts, config, "thm1");
}

DriftReport theorem2_run(const TorusHamiltonian& h, const ExperimentConfig& config) {
  WitnessA1 a1 = require_a1(h, config);
  const VerdictA2 a2 = check_a2(a1, config.check);
  if (!a2.verdict)
    throw Error(ErrorCode::refused, "a2 fails: e_i lies in the isotropic cone of A*");
  const TorusHamiltonian run_h = a2.reversal ? reverse_time(h) : h;
  if (a2.reversal) a1.a_star = -a1.a_star;
  const Eigen::VectorXd v = Eigen::VectorXd::Unit(h.n(), a1.i);
  const DeltaChoice delta = resolve_delta(run_h, a1, v, config);
  std::mt19937_64 rng(config.seed);
  const auto lifts = draw_lifts(rng, h.n() - h.d(), config.fast_angle_samples);
  DriftReport report = run_sweep(run_h, a1, v, delta, lifts, config, "thm2");
  report.reversed = a2.reversal;
  return report;
}

Theorem3Report theorem3_run(const TorusHamiltonian& h, const ExperimentConfig& config) {
  WitnessA1 a1 = require_a1(h, config);
  const VerdictA3 a3 = check_a3(a1, config.check);
  if (!a3.verdict) throw Error(ErrorCode::refused, "a3 fails: A* is not sign-definite");
  const TorusHamiltonian run_h = a3.reversal ? reverse_time(h) : h;
  if (a3.reversal) a1.a_star = -a1.a_star;
  const int n = h.n();

  std::mt19937_64 rng(config.seed);
  const auto lifts = draw_lifts(rng, n - h.d(), config.fast_angle_samples);
  std::vector<Eigen::VectorXd> dirs;
  for (int k = 0; k < n; ++k) {
    dirs.push_back(Eigen::VectorXd::Unit(n, k));
    dirs.push_back(-Eigen::VectorXd::Unit(n, k));
  }
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int r = 0; r < config.random_directions; ++r) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v[k] = unif(rng);
    dirs.push_back(v / v.cwiseAbs().maxCoeff());
  }

  Theorem3Report out;
  out.reversed = a3.reversal;
  out.lambda_star = a3.lambda_star;
  out.delta.delta = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& v : dirs) {
    const DeltaChoice c = resolve_delta(run_h, a1, v, config);
    if (c.delta < out.delta.delta) out.delta = c;
  }
  out.uniform_c = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& v : dirs) {
    DeltaChoice c = out.delta;
    c.gamma = gamma_star(a1.a_star, v, config.check.cone_tol);
    DriftReport r = run_sweep(run_h, a1, v, c, lifts, config, "thm3");
    r.reversed = a3.reversal;
    for (const EpsilonRecord& rec : r.records)
      if (!rec.refused) out.uniform_c = std::min(out.uniform_c, rec.slow_signed_min);
    out.directions.push_back(std::move(r));
  }
  return out;
}

ExampleRecord unbounded_example_run(const ExampleModel& ex, double eps, double t_final,
                                    double dt, Eigen::VectorXd action0, int stride) {
  const TorusHamiltonian& h = ex.hamiltonian;
  const int n = h.n();
  ExampleRecord out;
  out.eps = eps;
  out.t_final = t_final;
  out.j = ex.j;
  out.theta1_star = ex.theta1_star;
  if (action0.size() == 0) action0 = eps * Eigen::VectorXd::Unit(n, ex.j);
  if (action0.size() != n) throw Error(ErrorCode::domain, "initial action has wrong length");
  out.action0 = action0;

  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(n);
  theta0[0] = ex.theta1_star;
  std::vector<double> th(theta0.data(), theta0.data() + n);
  for (int k = 1; k < n; ++k) {
    const double slope = h.A().entry(k, k).partial(0)(th);
    out.rate += slope * action0[k] * action0[k];
  }
  const PhaseFunction ham = h.phase_function();
  IntegrateOptions opts;
  std::size_t count = 0;
  const double scale = std::max(std::abs(out.rate) * t_final, std::abs(action0[0]));
  const RunSummary summary = integrate_observed(
      ham, PhaseState{theta0, action0, 0.0}, t_final, dt, opts, [&](const PhaseState& s) {
        const double exact = action0[0] - out.rate * s.t;
        const double dev = std::abs(s.action[0] - exact);
        out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
        out.theta1_deviation = std::max(
            out.theta1_deviation, std::abs(angle_difference(s.theta[0], theta0[0])));
        for (int k = 1; k < n; ++k)
          out.other_deviation =
              std::max(out.other_deviation, std::abs(s.action[k] - action0[k]));
        if (stride > 0 && count % stride == 0) out.samples.push_back(s);
        ++count;
      });
  if (stride > 0 && (count - 1) % stride != 0) out.samples.push_back(summary.final_state);
  out.i1_numeric = summary.final_state.action[0];
  out.i1_exact = action0[0] - out.rate * t_final;
  out.max_rel_deviation = scale > 0.0 ? out.max_abs_deviation / scale : out.max_abs_deviation;
  return out;
}

}  // namespace restor
