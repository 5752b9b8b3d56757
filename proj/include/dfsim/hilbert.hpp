#pragma once

// Tensor-product spaces of two-level atoms and truncated field modes, the
// special atomic states (eta_n, W_n, singlets), collective operators and
// basic state metrics.
//
// Basis ordering: subsystem 0 is the most significant digit of the basis
// index. For atoms, digit 0 is the lower level |0> and digit 1 the upper
// level |1>. For modes, the digit is the photon number.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dfsim/types.hpp"

namespace dfsim {

enum class SubsystemKind { atom, mode };

struct Subsystem {
  SubsystemKind kind;
  int dim;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered list of subsystems making up a tensor-product space.
class SpaceLabel {
 public:
  explicit SpaceLabel(std::vector<Subsystem> subsystems);

  static SpaceLabel atoms(int n);
  /// n atoms followed by one mode holding 0..cutoff photons.
  static SpaceLabel atoms_and_mode(int n, int cutoff);
  /// n atoms followed by n single-photon (qubit) modes.
  static SpaceLabel atoms_and_modes(int n);
  static SpaceLabel mode(int cutoff);

  [[nodiscard]] std::size_t size() const { return subsystems_.size(); }
  [[nodiscard]] const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }
  [[nodiscard]] const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  [[nodiscard]] Index dimension() const { return dimension_; }
  [[nodiscard]] int atom_count() const;
  [[nodiscard]] std::vector<int> atom_positions() const;

  /// Local digits of a basis index, subsystem 0 first.
  [[nodiscard]] std::vector<int> digits(Index index) const;
  [[nodiscard]] Index index_of(std::span<const int> digits) const;
  /// Sum of digits: atomic excitations plus photons.
  [[nodiscard]] int excitation_number(Index index) const;

  [[nodiscard]] SpaceLabel subspace(std::span<const int> keep) const;

  bool operator==(const SpaceLabel& other) const { return subsystems_ == other.subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  Index dimension_ = 1;
};

class StateVector {
 public:
  /// When `normalized` is set the norm is checked to 1e-12.
  StateVector(SpaceLabel space, CVector amplitudes, bool normalized = true);

  [[nodiscard]] const SpaceLabel& space() const { return space_; }
  [[nodiscard]] const CVector& amplitudes() const { return amplitudes_; }
  [[nodiscard]] bool is_normalized() const { return normalized_; }
  [[nodiscard]] double norm() const { return amplitudes_.norm(); }
  [[nodiscard]] CMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

  /// Kronecker product; the result lives on the concatenated space.
  [[nodiscard]] StateVector tensor(const StateVector& other) const;

 private:
  SpaceLabel space_;
  CVector amplitudes_;
  bool normalized_;
};

struct IntegrityStats {
  double trace_error = 0.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;

  void merge(const IntegrityStats& other);
};

class DensityMatrix {
 public:
  /// Only the shape is checked here; call validate() for the physical invariants.
  DensityMatrix(SpaceLabel space, CMatrix entries);
  static DensityMatrix pure(const StateVector& psi);

  [[nodiscard]] const SpaceLabel& space() const { return space_; }
  [[nodiscard]] const CMatrix& matrix() const { return entries_; }

  [[nodiscard]] IntegrityStats integrity() const;
  /// Throws IntegrityError when Hermiticity, trace or positivity are off by more
  /// than the given tolerances.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10, double eig_tol = 1e-8) const;

  [[nodiscard]] DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  SpaceLabel space_;
  CMatrix entries_;
};

/// Collective atomic operators on n atoms (atoms-only space).
///   R+ = sum_j |1>_j<0|,  R- = R+^dag,  R3 = sum_j (|1>_j<1| - |0>_j<0|)
///   J1 = (R+ + R-)/2,  J2 = i(R- - R+)/2,  J3 = R3/2,  J^2 = J1^2 + J2^2 + J3^2
/// With J3 = R3/2 this sign of J2 is the one that closes [J_b, J_c] = i eps_bcd J_d.
struct CollectiveOperators {
  int n = 0;
  SparseOp r_plus;
  SparseOp r_minus;
  SparseOp r3;
  SparseOp j1;
  SparseOp j2;
  SparseOp j3;
  SparseOp j_squared;
};

inline constexpr int kMaxCollectiveAtoms = 12;

[[nodiscard]] StateVector basis_state(const SpaceLabel& space, std::span<const int> occupation);
[[nodiscard]] StateVector ground_state(int n);
/// sum_k q_k |1_k>. Requires n >= 2 and sum |q_k|^2 = 1 within 1e-10.
[[nodiscard]] StateVector make_eta(std::span<const cplx> q);
[[nodiscard]] StateVector make_w(int n);
/// (|01> - |10>)/sqrt(2) on sites (i, k), ground state elsewhere.
[[nodiscard]] StateVector make_singlet_embedding(int n, int i, int k);
/// Single-excitation amplitudes q_k = <1_k|psi>.
[[nodiscard]] std::vector<cplx> single_excitation_amplitudes(const StateVector& psi);

[[nodiscard]] CollectiveOperators collective_ops(int n);

/// I (x) local (x) I with `local` acting on subsystem `position`.
[[nodiscard]] SparseOp local_operator(const SpaceLabel& space, int position, const CMatrix& local);
/// Identity-extends an operator on the leading subsystems (e.g. the atoms) to
/// the full space.
[[nodiscard]] SparseOp embed_leading(const SparseOp& op, const SpaceLabel& space);

/// Site raising/lowering |1><0|, |0><1| and sigma_z = |1><1| - |0><0| on one atom.
[[nodiscard]] SparseOp site_raising(const SpaceLabel& space, int position);
[[nodiscard]] SparseOp site_lowering(const SpaceLabel& space, int position);

/// Permutation of tensor factors on n qubits: site i of the input ends up at
/// site perm[i] of the output.
[[nodiscard]] SparseOp permutation_operator(int n, std::span<const int> perm);
[[nodiscard]] SparseOp transposition_operator(int n, int i, int k);

[[nodiscard]] DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// <a|b|a> for pure a; Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 for mixed a.
[[nodiscard]] double fidelity(const StateVector& a, const DensityMatrix& b);
[[nodiscard]] double fidelity(const DensityMatrix& a, const DensityMatrix& b);
[[nodiscard]] double purity(const DensityMatrix& rho);
/// (1/2) ||a - b||_1
[[nodiscard]] double trace_distance(const CMatrix& a, const CMatrix& b);
[[nodiscard]] double min_eigenvalue(const CMatrix& hermitian);

/// Seeded random eta amplitudes. With `zero_sum` the random complex vector is
/// projected onto sum_k q_k = 0 before normalization; otherwise the draw is
/// repeated until |sum_k q_k| > 1e-3.
[[nodiscard]] std::vector<cplx> random_eta_amplitudes(int n, std::mt19937_64& rng, bool zero_sum);

}  // namespace dfsim
