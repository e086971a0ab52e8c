#include "restor/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "restor/error.hpp"

namespace restor {

void reduce_angles(Eigen::VectorXd& theta) {
  for (Eigen::Index a = 0; a < theta.size(); ++a) theta[a] -= std::floor(theta[a]);
}

double angle_difference(double a, double b) {
  const double d = a - b;
  return d - std::floor(d + 0.5);
}

VectorField vector_field(const PhaseFunction& h, const PhaseState& state) {
  const int n = h.dim();
  VectorField out{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  Eigen::VectorXd d_theta(n);
  auto ws = h.workspace();
  h.gradient(std::span<const double>(state.theta.data(), n),
             std::span<const double>(state.action.data(), n),
             std::span<double>(d_theta.data(), n),
             std::span<double>(out.theta_dot.data(), n), ws);
  out.action_dot = -d_theta;
  return out;
}

VectorField vector_field(const TorusHamiltonian& h, const PhaseState& state) {
  return vector_field(h.phase_function(), state);
}

MidpointStepper::MidpointStepper(const PhaseFunction& h, StepOptions opts)
    : h_(&h), opts_(opts), ws_(h.workspace()) {
  const auto n = static_cast<std::size_t>(h.dim());
  for (auto* v : {&mid_theta_, &mid_action_, &d_theta_, &d_action_, &z_theta_, &z_action_})
    v->assign(n, 0.0);
}

// Fills d_action_ with theta_dot = dH/dI and d_theta_ with dH/dtheta.
void MidpointStepper::field(const double* theta, const double* action) {
  const int n = h_->dim();
  h_->gradient(std::span<const double>(theta, n), std::span<const double>(action, n),
               std::span<double>(d_theta_), std::span<double>(d_action_), ws_);
}

bool MidpointStepper::try_step(PhaseState& state, double dt) {
  const int n = h_->dim();
  const double* th0 = state.theta.data();
  const double* ac0 = state.action.data();
  field(th0, ac0);
  for (int a = 0; a < n; ++a) {
    z_theta_[a] = th0[a] + dt * d_action_[a];
    z_action_[a] = ac0[a] - dt * d_theta_[a];
  }
  for (int it = 1; it <= opts_.max_iter; ++it) {
    for (int a = 0; a < n; ++a) {
      mid_theta_[a] = 0.5 * (th0[a] + z_theta_[a]);
      mid_action_[a] = 0.5 * (ac0[a] + z_action_[a]);
    }
    field(mid_theta_.data(), mid_action_.data());
    double diff = 0.0;
    for (int a = 0; a < n; ++a) {
      const double nt = th0[a] + dt * d_action_[a];
      const double na = ac0[a] - dt * d_theta_[a];
      diff = std::max({diff, std::abs(nt - z_theta_[a]), std::abs(na - z_action_[a])});
      z_theta_[a] = nt;
      z_action_[a] = na;
    }
    if (!std::isfinite(diff)) return false;
    if (diff <= opts_.tol) {
      for (int a = 0; a < n; ++a) {
        state.theta[a] = z_theta_[a] - std::floor(z_theta_[a]);
        state.action[a] = z_action_[a];
      }
      last_iterations_ = it;
      return true;
    }
  }
  return false;
}

void MidpointStepper::step(PhaseState& state, double dt) {
  if (try_step(state, dt)) return;
  for (int r = 1; r <= opts_.max_halvings; ++r) {
    const int pieces = 1 << r;
    PhaseState trial = state;
    bool ok = true;
    for (int s = 0; s < pieces && ok; ++s) ok = try_step(trial, dt / pieces);
    if (ok) {
      trial.t = state.t;
      state = std::move(trial);
      return;
    }
  }
  throw Error(ErrorCode::step_failure,
              "implicit midpoint fixed-point iteration did not converge");
}

PhaseState step_midpoint(const PhaseFunction& h, const PhaseState& state, double dt,
                         StepOptions opts) {
  MidpointStepper stepper(h, opts);
  PhaseState out = state;
  reduce_angles(out.theta);
  stepper.step(out, dt);
  out.t = state.t + dt;
  return out;
}

double Trajectory::max_energy_error() const {
  double worst = 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()));
  return worst;
}

Trajectory integrate(const PhaseFunction& h, const PhaseState& s0, double t_final,
                     double dt, const IntegrateOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorCode::domain, "step size must be positive");
  if (opts.stride < 1) throw Error(ErrorCode::domain, "stride must be >= 1");
  Trajectory traj;
  traj.step_size = dt;
  std::size_t count = 0;
  PhaseState last;
  const RunSummary summary = integrate_observed(
      h, s0, t_final, dt, opts, [&](const PhaseState& s) {
        if (count % opts.stride == 0) {
          traj.samples.push_back(s);
          traj.energy.push_back(h.value(s.theta, s.action));
        }
        ++count;
      });
  const PhaseState& fin = summary.final_state;
  if (traj.samples.empty() || traj.samples.back().t != fin.t) {
    traj.samples.push_back(fin);
    traj.energy.push_back(h.value(fin.theta, fin.action));
  }
  traj.exited = summary.exited;
  traj.exit_time = summary.exit_time;
  return traj;
}

Trajectory integrate(const TorusHamiltonian& h, const PhaseState& s0, double t_final,
                     double dt, const IntegrateOptions& opts) {
  return integrate(h.phase_function(), s0, t_final, dt, opts);
}

}  // namespace restor
