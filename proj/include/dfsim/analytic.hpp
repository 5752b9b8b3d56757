#pragma once

// Closed-form results for collective decay of single-excitation states and for
// the squeezed collective bath.

#include <span>
#include <vector>

#include "dfsim/hilbert.hpp"

namespace dfsim {

/// rho = A |1;n><eta| + A* |eta><1;n| + B |1;n><1;n| + S |0><0| + D |eta><eta|,
/// |1;n> = sum_k |1_k> (unnormalized), Q = sum_k q_k.
struct AbsdState {
  cplx a;
  double b = 0.0;
  double s = 0.0;
  double d = 1.0;
  cplx q;
  int n = 2;
  double kappa = 1.0;

  /// A Q* + A* Q + B n + S + D
  [[nodiscard]] double normalization() const;
};

struct AbsdDerivative {
  cplx a;
  double b = 0.0;
  double s = 0.0;
  double d = 0.0;
};

[[nodiscard]] AbsdDerivative absd_rhs(const AbsdState& state);

/// Exact solution of absd_rhs from A = B = 0, S = 1 - D at t = 0.
[[nodiscard]] AbsdState absd_closed_form(cplx q_sum, int n, double kappa, double d, double t);

/// Builds the density matrix on n atoms for the given coefficients and amplitudes.
[[nodiscard]] DensityMatrix absd_density(const AbsdState& state, std::span<const cplx> q);

/// Vacuum collective decay of |eta><eta| at time t.
[[nodiscard]] DensityMatrix eta_decay_solution(double t, std::span<const cplx> q, double kappa);

/// Long-time limit of the decay from D |eta><eta| + (1 - D) |0><0|.
[[nodiscard]] DensityMatrix f_ss(double d, std::span<const cplx> q);

/// Pure dark state of the two-atom collective bath with |M| = sqrt(N(N+1)), arg M = phase:
///   (sqrt(N+1)|00> - e^{i phase} sqrt(N)|11>) / sqrt(2N+1)
[[nodiscard]] StateVector two_atom_squeezed_steady(double occupation, double phase = 0.0);

/// Final state of a zero-sum eta_4 in the saturated squeezed collective bath:
/// each singlet Psi-_{1k} carries the two-atom dark state on the complementary
/// pair, sqrt(2) sum_{k>=2} q_k Psi-_{1k} (x) s_rest, renormalized.
[[nodiscard]] StateVector eta4_squeezed_final(std::span<const cplx> q, double occupation, double phase = 0.0);

struct OccupationReport {
  double numeric = 0.0;          // lower-level population from the 2x2 steady state
  double detailed_balance = 0.0; // (N+1)/(2N+1)
  double printed = 0.0;          // N/(2N+1)
};

/// Steady lower-level population of one atom in a bath with occupation N.
[[nodiscard]] OccupationReport single_atom_squeezed_occupation(double occupation);

}  // namespace dfsim
