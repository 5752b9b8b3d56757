#pragma once

// Write/store/read cycle of a multimode single photon into the atoms.
//
// Memory space: n atoms followed by n single-photon modes, mode j paired
// with atom j.

#include <optional>
#include <span>

#include "dfsim/dynamics.hpp"

namespace dfsim {

inline constexpr int kMaxMemoryAtoms = 8;

struct MemoryConfig {
  int n = 3;
  double coupling_f = 1.0;
  /// Defaults to pi / (2 f).
  std::optional<double> write_time;
  double store_time = 0.0;
  ThermostatParams store_bath{};
  double store_kappa = 1.0;
  IntegratorConfig integrator{};

  [[nodiscard]] double effective_write_time() const;
  void validate() const;
};

/// V = i f sum_j (R+^j a_j - a_j^dag R-^j)
[[nodiscard]] SparseOp swap_hamiltonian(int n, double f);

/// exp(-i V t) psi0, applied as commuting rotations on each atom-mode pair.
[[nodiscard]] StateVector swap_evolve(const StateVector& psi0, double t, int n, double f);

/// |0>_atoms (x) |eta>_modes
[[nodiscard]] StateVector light_state(std::span<const cplx> q);
/// |eta>_atoms (x) |0>_modes
[[nodiscard]] StateVector stored_state(std::span<const cplx> q);

struct MemoryReport {
  double write_time = 0.0;
  double write_fidelity = 0.0;       // atoms vs |eta> after the swap
  double post_store_fidelity = 0.0;  // atoms vs |eta> after storage
  double read_fidelity = 0.0;        // full state vs the initial light state after the inverse swap
  double purity_after_store = 0.0;   // atomic reduced state
  IntegrityStats integrity;
};

[[nodiscard]] MemoryReport memory_cycle(const MemoryConfig& config, std::span<const cplx> q);

}  // namespace dfsim
