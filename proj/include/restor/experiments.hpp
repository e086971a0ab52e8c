#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "restor/assumptions.hpp"
#include "restor/freq_arith.hpp"
#include "restor/hamiltonian.hpp"
#include "restor/integrator.hpp"

namespace restor {

struct ExperimentConfig {
  std::vector<double> eps_list{3e-2, 1e-2, 3e-3, 1e-3};
  std::optional<double> delta;          // nullopt: choose_delta
  Eigen::VectorXd i0_direction;         // sup-norm 1; empty means e_i
  int fast_angle_samples = 8;           // lift 0 is the canonical lift
  std::uint64_t seed = 42;
  std::optional<double> kappa;          // overrides the model's kappa
  double mu0 = 0.1;                     // runs need mu(eps) <= mu0
  double dt = 1e-2;                     // scaled time step
  double ball_radius = 2.0;
  int random_directions = 16;           // thm3 sweep
  int trajectory_stride = 0;            // > 0 keeps samples of every run
  CheckOptions check;
};

struct LiftRun {
  Eigen::VectorXd theta0;
  Eigen::VectorXd action0;    // scaled
  Eigen::VectorXd action_end; // scaled, at tau or at the ball exit
  double slow_signed = 0.0;   // Itilde_i(tau) - Itilde_i(0)
  double fast_sup = 0.0;      // sup_t max_j |Itilde_j(t) - Itilde_j(0)|, j fast
  double growth = 0.0;        // |Itilde(tau)| / |Itilde(0)|, sup norms
  double energy_error = 0.0;  // max |dH| / (|omega| |I0| + |H0|)
  std::size_t steps = 0;
  bool exited = false;
  double exit_time = 0.0;
  std::vector<PhaseState> samples;
};

struct EpsilonRecord {
  double eps = 0.0;
  double mu = 0.0;
  double tau = 0.0;
  bool refused = false;
  std::string message;
  std::vector<LiftRun> runs;
  // Slow drift |I_i(tau) - I_i(0)| / eps in original variables.
  double slow_worst = 0.0;    // minimum over lifts
  double slow_median = 0.0;
  double slow_signed_min = 0.0;
  // Fast drift max_j |I_j - I_j(0)| / (eps mu), sup over [0, tau].
  double fast_worst = 0.0;    // maximum over lifts
  double fast_median = 0.0;
  double growth_worst = 0.0;  // minimum over lifts
  double growth_median = 0.0;
  double energy_error = 0.0;
  bool exited = false;
};

struct DeltaChoice {
  double delta = 0.0;
  int rung = -1;      // delta = 2^-rung
  double rho = 0.0;   // radius around theta* keeping the drift rate >= 2 gamma*
  double gamma = 0.0;
};

struct DriftReport {
  std::string mode;
  int i = -1;
  std::vector<double> theta_star;
  Eigen::MatrixXd a_star;
  Eigen::VectorXd direction;
  bool reversed = false;
  double kappa = 1.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  DeltaChoice delta;
  std::vector<EpsilonRecord> records;
  double slope = 0.0;        // d log(eps * slow_worst) / d log eps
  double c = 0.0;            // min over accepted eps of slow_worst
  double C = 0.0;            // max over accepted eps of fast_worst
  double fast_spread = 0.0;  // max / min of fast_worst
  double growth_c_min = 0.0; // min over eps of growth_worst - 1
  double growth_c_max = 0.0;
};

struct Theorem3Report {
  DeltaChoice delta;
  std::vector<DriftReport> directions;
  double uniform_c = 0.0;  // min over directions and eps of slow_signed_min
  bool reversed = false;
  double lambda_star = 0.0;
};

struct ExampleRecord {
  double eps = 0.0;
  double t_final = 0.0;
  int j = 0;
  double theta1_star = 0.0;
  Eigen::VectorXd action0;
  double rate = 0.0;           // sum_k a_k'(theta1*) I_k(0)^2
  double i1_numeric = 0.0;
  double i1_exact = 0.0;
  double max_rel_deviation = 0.0;
  double max_abs_deviation = 0.0;
  double theta1_deviation = 0.0;
  double other_deviation = 0.0;  // max_t max_{k>=2} |I_k(t) - I_k(0)|
  std::vector<PhaseState> samples;
};

/// Largest delta = 2^-m, m = 0..12, with delta (8 n C1 + 1) <= rho and
/// delta (4 n C1 + 1) <= 1.
DeltaChoice choose_delta(const TorusHamiltonian& h, const WitnessA1& a1,
                         const Eigen::VectorXd& i0);

/// Slow-drift runs of the scaled system from Itilde(0) = I0 at the lifts of theta*.
DriftReport theorem1_run(const TorusHamiltonian& h, const ExperimentConfig& config);
/// Runs from e_i after normalizing the time direction so that a_i* < 0.
DriftReport theorem2_run(const TorusHamiltonian& h, const ExperimentConfig& config);
/// Axis and seeded random directions with one common delta.
Theorem3Report theorem3_run(const TorusHamiltonian& h, const ExperimentConfig& config);

/// Integrates the diagonal example in original variables and compares with
/// the exact solution. Empty action0 means eps e_j.
ExampleRecord unbounded_example_run(const ExampleModel& ex, double eps, double t_final,
                                    double dt = 1e-2, Eigen::VectorXd action0 = {},
                                    int stride = 0);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace restor
