#include "dfsim/cavity.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "dfsim/errors.hpp"

namespace dfsim {

namespace {

double mean_photon_number(const DensityMatrix& mode) {
  double mean = 0.0;
  for (Index k = 0; k < mode.matrix().rows(); ++k) mean += static_cast<double>(k) * mode.matrix()(k, k).real();
  return mean;
}

DensityMatrix pad_mode(const DensityMatrix& mode, int cutoff) {
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  const Index d = mode.matrix().rows();
  m.topLeftCorner(d, d) = mode.matrix();
  return {SpaceLabel::mode(cutoff), m};
}

std::string format_ratio(const RegimeRatio& r) {
  return r.name + " = " + std::to_string(r.value);
}

struct ReducedRun {
  std::vector<CMatrix> atoms;
  IntegrityStats integrity;
};

ReducedRun reduced_interaction_picture(const ModelParams& model, const ThermostatParams& bath,
                                       const DensityMatrix& rho_atoms0, const DensityMatrix& mode_state0,
                                       std::span<const double> t_grid, const IntegratorConfig& config) {
  const auto gen = assemble_full(model, bath);
  const auto rho0 = rho_atoms0.tensor(mode_state0);
  const auto traj = evolve(gen, rho0, t_grid, config);
  const UnitaryPropagator prop{CMatrix(*gen.hamiltonian())};
  std::vector<int> atoms(static_cast<std::size_t>(model.n));
  for (int j = 0; j < model.n; ++j) atoms[static_cast<std::size_t>(j)] = j;
  ReducedRun out;
  out.integrity = traj.integrity;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const CMatrix u = prop.at(traj.times[i]);
    const DensityMatrix rho_i(traj.space, u.adjoint() * traj.states[i].matrix() * u);
    out.atoms.push_back(partial_trace(rho_i, atoms).matrix());
  }
  return out;
}

}  // namespace

Generator full_model(const ModelParams& model, const ThermostatParams& bath, double mean_photons,
                     std::vector<std::string>* warnings) {
  auto gen = assemble_full(model, bath);
  if (warnings && !dispersive_ok(model, mean_photons)) {
    warnings->push_back("dispersive condition |delta| >= 10 n g sqrt(<n>+1) not met");
  }
  return gen;
}

Generator atomic_model(const ModelParams& model, const ThermostatParams& bath) {
  model.validate();
  const auto space = SpaceLabel::atoms(model.n);
  Generator gen = dissipator_collective(space, bath, model.kappa);
  for (int j = 0; j < model.n; ++j) gen = gen + dissipator_single_atom(space, j, bath, model.k_sq);
  return gen;
}

std::vector<RegimeRatio> regime_ratios(const ModelParams& model, const ThermostatParams& bath, double mean_photons,
                                       double threshold) {
  const double shift = model.g * model.g / std::abs(model.delta);
  const double gamma_down = model.k_sq * (bath.occupation + 1.0);
  const double gamma_up = model.k_sq * bath.occupation;
  const std::pair<const char*, double> small[] = {
      {"g2/delta", shift}, {"gamma_down", gamma_down}, {"gamma_up", gamma_up}};
  const std::pair<const char*, double> large[] = {{"<cc+>g2/delta", (mean_photons + 1.0) * shift},
                                                  {"kappa*n", model.kappa * model.n},
                                                  {"gamma2*<c+c>/n", model.gamma_sq * mean_photons / model.n}};
  std::vector<RegimeRatio> out;
  const double dispersive =
      std::abs(model.delta) / (model.n * std::abs(model.g) * std::sqrt(mean_photons + 1.0));
  out.push_back({"delta/(n g sqrt(<c+c>+1))", dispersive, dispersive >= threshold});
  for (const auto& [ln, lv] : large) {
    for (const auto& [sn, sv] : small) {
      const double value = sv > 0.0 ? lv / sv : std::numeric_limits<double>::infinity();
      out.push_back({std::string(ln) + " / " + sn, value, value >= threshold});
    }
  }
  return out;
}

UnitaryPropagator::UnitaryPropagator(const CMatrix& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (hamiltonian + hamiltonian.adjoint()));
  vectors_ = es.eigenvectors();
  energies_ = es.eigenvalues();
}

CMatrix UnitaryPropagator::at(double t) const {
  CVector phases(energies_.size());
  for (Index k = 0; k < energies_.size(); ++k) phases(k) = std::exp(-kI * energies_(k) * t);
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

DensityMatrix fock_state(int cutoff, int k) {
  if (cutoff < 1) throw DimensionError("Fock cutoff must be >= 1");
  if (k < 0 || k > cutoff) throw DimensionError("photon number outside the truncated space");
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  m(k, k) = 1.0;
  return {SpaceLabel::mode(cutoff), m};
}

ReductionReport reduction_check(const ModelParams& model, const ThermostatParams& bath,
                                const DensityMatrix& rho_atoms0, const DensityMatrix& mode_state0,
                                std::span<const double> t_grid, const IntegratorConfig& config, bool check_cutoff) {
  model.validate();
  bath.validate();
  if (!(rho_atoms0.space() == SpaceLabel::atoms(model.n))) throw DimensionError("atomic state does not match n");
  if (!(mode_state0.space() == SpaceLabel::mode(model.cavity_cutoff))) {
    throw DimensionError("mode state does not match the cavity cutoff");
  }

  ReductionReport rep;
  rep.mean_photons = mean_photon_number(mode_state0);
  rep.ratios = regime_ratios(model, bath, rep.mean_photons);
  for (const auto& r : rep.ratios) {
    if (!r.ok) {
      rep.regime_ok = false;
      rep.warnings.push_back("regime ratio below threshold: " + format_ratio(r));
    }
  }

  const auto full = reduced_interaction_picture(model, bath, rho_atoms0, mode_state0, t_grid, config);
  const auto atomic = evolve(atomic_model(model, bath), rho_atoms0, t_grid, config);
  rep.integrity = full.integrity;
  rep.integrity.merge(atomic.integrity);
  rep.times = atomic.times;
  for (std::size_t i = 0; i < atomic.times.size(); ++i) {
    const double d = trace_distance(full.atoms[i], atomic.states[i].matrix());
    rep.distances.push_back(d);
    rep.max_trace_distance = std::max(rep.max_trace_distance, d);
  }

  if (check_cutoff) {
    ModelParams bigger = model;
    bigger.cavity_cutoff = model.cavity_cutoff + 2;
    const auto wide =
        reduced_interaction_picture(bigger, bath, rho_atoms0, pad_mode(mode_state0, bigger.cavity_cutoff), t_grid, config);
    rep.integrity.merge(wide.integrity);
    for (std::size_t i = 0; i < wide.atoms.size(); ++i) {
      rep.cutoff_residual = std::max(rep.cutoff_residual, trace_distance(wide.atoms[i], full.atoms[i]));
    }
  }
  return rep;
}

}  // namespace dfsim
