#pragma once

#include <cstdint>
#include <vector>

#include "restor/action_poly.hpp"
#include "restor/freq_arith.hpp"
#include "restor/hamiltonian.hpp"
#include "restor/integrator.hpp"

namespace restor {

struct AveragedSplit {
  ActionPolynomial mean;         // fast average, depends on slow angles only
  ActionPolynomial oscillating;  // zero fast average
};

/// Partitions the Fourier modes of f into fast-averaged and oscillating parts.
AveragedSplit split_average(const ActionPolynomial& f, int d);

struct DivisorUse {
  Wavevector k;
  double inverse_divisor;  // 1 / |k_fast . fast|
};

struct HomologicalSolution {
  ActionPolynomial generator;  // g with omega . d_theta g = osc_{<= Q}
  ActionPolynomial tail;       // modes with |k|_1 > Q or k_fast = 0, left unsolved
  int truncation_q = 0;
  double divisor_worst = 0.0;
  std::vector<DivisorUse> divisors;
};

/// g_k = f_k / (2 pi i k_fast . fast) for retained modes |k|_1 <= q.
HomologicalSolution solve_homological(const ActionPolynomial& osc,
                                      const FrequencyVector& freq,
                                      const ArithmeticProfile& profile, int q);

struct TransformOptions {
  int theta_grid = 32;      // points per angle axis
  int action_samples = 8;   // sample points in B_2
  double action_radius = 2.0;
  double target_radius = 3.0;
  double flow_step = 1e-3;
  double flow_tol = 1e-12;
  std::uint64_t seed = 7;
};

struct NormalFormResult {
  double eps = 0.0;
  double mu = 0.0;
  int truncation_q = 0;
  double divisor_worst = 0.0;
  ActionPolynomial fbar;
  ActionPolynomial generator;  // g; the transform is the time-1 flow of eps g
  ActionPolynomial tail;
  double remainder_bound = 0.0;   // sup |Htilde o Phi - omega.I - eps fbar|
  double displacement = 0.0;      // sup |Phi - Id|
  double c_star = 0.0;            // max(displacement / mu, remainder / (eps mu))
  double f_prime_bound = 0.0;     // sup |f'|, Htilde o Phi = omega.I + eps Abar I.I + eps mu f'
  double c_prime = 0.0;           // c_star + C2
  double predicted_scale = 0.0;   // eps mu c_star
  std::size_t samples = 0;
  std::vector<DivisorUse> divisors;
};

/// Time-1 flow of the Hamiltonian vector field of chi = eps g.
PhaseState transform_point(const PhaseFunction& chi, const PhaseState& z,
                           const TransformOptions& opts = {});

/// Builds Phi from g and measures remainder and displacement on the sample grid.
NormalFormResult apply_transform(const TorusHamiltonian& h_scaled,
                                 const AveragedSplit& split,
                                 const HomologicalSolution& hom, double eps, double mu,
                                 double c2, const TransformOptions& opts = {});

/// Whole averaging step at truncation Q = floor(Delta(kappa / eps)).
NormalFormResult normalize(const TorusHamiltonian& h, double eps,
                           const ArithmeticProfile& profile,
                           const TransformOptions& opts = {});

/// omega . I + eps fbar, the normalized Hamiltonian without remainder.
PhaseFunction normalized_hamiltonian(const TorusHamiltonian& h,
                                     const NormalFormResult& result);

}  // namespace restor
