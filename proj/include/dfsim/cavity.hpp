#pragma once

// Atoms plus a dispersively coupled cavity mode, and the comparison of its
// reduced dynamics against the atoms-only master equation.

#include <span>
#include <string>
#include <vector>

#include "dfsim/dynamics.hpp"

namespace dfsim {

/// assemble_full plus a warning when the dispersive condition fails for the
/// given mean photon number.
[[nodiscard]] Generator full_model(const ModelParams& model, const ThermostatParams& bath, double mean_photons = 0.0,
                                   std::vector<std::string>* warnings = nullptr);

/// Single-atom, collective and (no) cavity terms on the atoms alone.
[[nodiscard]] Generator atomic_model(const ModelParams& model, const ThermostatParams& bath);

struct RegimeRatio {
  std::string name;
  double value = 0.0;
  bool ok = false;
};

/// Each "much larger than" relation of the dispersive reduction as a separate ratio
/// large/small, compared against `threshold`.
[[nodiscard]] std::vector<RegimeRatio> regime_ratios(const ModelParams& model, const ThermostatParams& bath,
                                                     double mean_photons, double threshold = 10.0);

/// exp(-i H t) for Hermitian H via a single eigendecomposition.
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(const CMatrix& hamiltonian);
  [[nodiscard]] CMatrix at(double t) const;

 private:
  CMatrix vectors_;
  Eigen::VectorXd energies_;
};

struct ReductionReport {
  std::vector<double> times;
  std::vector<double> distances;    // trace distance per sample
  double max_trace_distance = 0.0;
  double cutoff_residual = 0.0;     // max trace distance between cutoff and cutoff + 2 runs
  double mean_photons = 0.0;
  std::vector<RegimeRatio> ratios;
  bool regime_ok = true;
  std::vector<std::string> warnings;
  IntegrityStats integrity;
};

/// Evolves rho_atoms0 (x) mode_state0 under the full model, moves to the
/// interaction picture of H_e, traces out the mode and compares against the
/// atoms-only evolution of rho_atoms0.
[[nodiscard]] ReductionReport reduction_check(const ModelParams& model, const ThermostatParams& bath,
                                              const DensityMatrix& rho_atoms0, const DensityMatrix& mode_state0,
                                              std::span<const double> t_grid, const IntegratorConfig& config = {},
                                              bool check_cutoff = true);

/// Fock-state density matrix |k><k| on 0..cutoff photons.
[[nodiscard]] DensityMatrix fock_state(int cutoff, int k);

}  // namespace dfsim
