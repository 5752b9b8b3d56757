#pragma once

// Dark states of a generator and permutation-symmetry diagnostics.

#include <optional>
#include <span>
#include <vector>

#include "dfsim/dynamics.hpp"

namespace dfsim {

/// ||gen.apply(|psi><psi|)||_F <= tol
[[nodiscard]] bool is_dark(const Generator& gen, const StateVector& psi, double tol = 1e-10);

inline constexpr Index kMaxDarkSearchDim = 256;

struct DarkSubspace {
  std::optional<int> sector;
  std::vector<StateVector> basis;
  /// Largest generator residual over the basis vectors and a few random
  /// superpositions of them. Superpositions can fail when a Hamiltonian splits
  /// the kernel into several eigenvalues.
  double max_residual = 0.0;
  bool superpositions_dark = true;
};

/// Orthonormal basis of the joint kernel of the canonical jump operators,
/// optionally restricted to states with a fixed excitation number. When the
/// generator has a Hamiltonian the kernel is further split into its eigenvectors.
[[nodiscard]] DarkSubspace dark_subspace(const Generator& gen, std::optional<int> sector = std::nullopt,
                                         double tol = 1e-10);

/// |sum_k q_k| <= tol
[[nodiscard]] bool zsa_check(std::span<const cplx> q, double tol = 1e-10);

struct DickeNumbers {
  double j = 0.0;
  double m = 0.0;
  double j_squared_variance = 0.0;
  double j3_variance = 0.0;
  bool eigenstate = true;
};

/// Estimates (j, m) from <J^2> = j(j+1) and m = <J3> on an atoms-only state.
/// Throws EigenstateError if either variance exceeds tol unless allow_mixed is set.
[[nodiscard]] DickeNumbers dicke_numbers(const StateVector& psi, bool allow_mixed = false, double tol = 1e-8);

/// C(n, n/2 + j) - C(n, n/2 + j + 1). Throws DomainError for invalid j.
[[nodiscard]] long long dicke_degeneracy(int n, double j);

struct TranspositionDrift {
  int i = 0;
  int k = 0;
  double initial = 0.0;
  double max_drift = 0.0;
};

struct SymmetryReport {
  std::vector<double> times;
  std::vector<TranspositionDrift> table;
  std::vector<double> drift_series;  // max over transpositions, per sample
  double max_drift = 0.0;
  IntegrityStats integrity;
};

/// Evolves rho0 and tracks <P_ik> for every transposition of atoms.
[[nodiscard]] SymmetryReport symmetry_conserved(const Generator& gen, const DensityMatrix& rho0,
                                                std::span<const double> t_grid, const IntegratorConfig& config = {});

}  // namespace dfsim
