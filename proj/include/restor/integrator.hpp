#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "restor/action_poly.hpp"
#include "restor/hamiltonian.hpp"

namespace restor {

/// Point of T^n x R^n. Angles are kept reduced to [0, 1).
struct PhaseState {
  Eigen::VectorXd theta;
  Eigen::VectorXd action;
  double t = 0.0;
};

struct VectorField {
  Eigen::VectorXd theta_dot;   // dH/dI
  Eigen::VectorXd action_dot;  // -dH/dtheta
};

VectorField vector_field(const PhaseFunction& h, const PhaseState& state);
VectorField vector_field(const TorusHamiltonian& h, const PhaseState& state);

/// Reduces every angle to [0, 1).
void reduce_angles(Eigen::VectorXd& theta);
/// Signed angular difference wrapped to [-1/2, 1/2).
double angle_difference(double a, double b);

struct StepOptions {
  double tol = 1e-13;
  int max_iter = 50;
  int max_halvings = 4;
};

/// Implicit midpoint rule z1 = z0 + h X((z0 + z1) / 2), solved by fixed-point
/// iteration. Symmetric and symplectic for any smooth Hamiltonian.
class MidpointStepper {
 public:
  explicit MidpointStepper(const PhaseFunction& h, StepOptions opts = {});

  /// Advances in place. On non-convergence the step is split into 2, 4, ...
  /// substeps (up to max_halvings times) before throwing step_failure.
  void step(PhaseState& state, double h);

  /// Fixed-point iterations used by the most recent successful substep.
  int last_iterations() const { return last_iterations_; }

 private:
  bool try_step(PhaseState& state, double h);
  void field(const double* theta, const double* action);

  const PhaseFunction* h_;
  StepOptions opts_;
  PhaseFunction::Workspace ws_;
  std::vector<double> mid_theta_, mid_action_, d_theta_, d_action_;
  std::vector<double> z_theta_, z_action_;
  int last_iterations_ = 0;
};

PhaseState step_midpoint(const PhaseFunction& h, const PhaseState& state, double dt,
                         StepOptions opts = {});

struct IntegrateOptions {
  int stride = 1;  // sample every `stride` steps (the final state is always kept)
  double ball_radius = std::numeric_limits<double>::infinity();
  StepOptions step;
};

struct RunSummary {
  PhaseState final_state;
  std::size_t steps = 0;
  bool exited = false;
  double exit_time = 0.0;
};

struct Trajectory {
  std::vector<PhaseState> samples;
  std::vector<double> energy;
  double step_size = 0.0;
  std::string scheme = "implicit-midpoint";
  bool exited = false;
  double exit_time = 0.0;

  /// max_t |H(t) - H(0)| over the samples.
  double max_energy_error() const;
};

/// Steps from s0 to t_final with step dt (last step shortened to land on
/// t_final), calling observer(state) at the start and after every step.
/// Stops early when |I|_sup reaches ball_radius.
template <typename Observer>
RunSummary integrate_observed(const PhaseFunction& h, PhaseState s0, double t_final,
                              double dt, const IntegrateOptions& opts,
                              Observer&& observer) {
  RunSummary out;
  reduce_angles(s0.theta);
  observer(static_cast<const PhaseState&>(s0));
  const double t0 = s0.t;
  const double span = t_final - t0;
  const auto total = static_cast<std::size_t>(
      span > 0.0 ? std::ceil(span / dt - 1e-9) : 0.0);
  MidpointStepper stepper(h, opts.step);
  if (s0.action.cwiseAbs().maxCoeff() >= opts.ball_radius) {
    out.exited = true;
    out.exit_time = t0;
    out.final_state = std::move(s0);
    return out;
  }
  for (std::size_t i = 0; i < total; ++i) {
    const double t_next = (i + 1 == total) ? t_final : t0 + (i + 1) * dt;
    stepper.step(s0, t_next - s0.t);
    s0.t = t_next;
    ++out.steps;
    observer(static_cast<const PhaseState&>(s0));
    if (s0.action.cwiseAbs().maxCoeff() >= opts.ball_radius) {
      out.exited = true;
      out.exit_time = s0.t;
      break;
    }
  }
  out.final_state = std::move(s0);
  return out;
}

Trajectory integrate(const PhaseFunction& h, const PhaseState& s0, double t_final,
                     double dt, const IntegrateOptions& opts = {});
Trajectory integrate(const TorusHamiltonian& h, const PhaseState& s0, double t_final,
                     double dt, const IntegrateOptions& opts = {});

}  // namespace restor
