#include "dfsim/cli/presets.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>

#include <Eigen/Core>

#include "dfsim/analytic.hpp"
#include "dfsim/cavity.hpp"
#include "dfsim/dfs.hpp"
#include "dfsim/errors.hpp"
#include "dfsim/memory.hpp"
#include "dfsim/state_spec.hpp"

namespace dfsim::cli {

using nlohmann::json;

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json complex_list_json(std::span<const cplx> v) {
  json out = json::array();
  for (auto z : v) out.push_back(complex_json(z));
  return out;
}

json integrity_json(const IntegrityStats& s) {
  return {{"max_trace_error", s.trace_error},
          {"max_hermiticity_residual", s.hermiticity_residual},
          {"min_eigenvalue", s.min_eigenvalue}};
}

IntegratorConfig integrator_from(const Config& cfg) {
  IntegratorConfig ic;
  const auto method = cfg.get_string("method", "dopri5");
  if (method == "dopri5") {
    ic.method = IntegratorMethod::dopri5_adaptive;
  } else if (method == "rk4") {
    ic.method = IntegratorMethod::rk4_fixed;
  } else {
    throw ValidationError("method must be dopri5 or rk4");
  }
  ic.rel_tol = cfg.get_real("rel_tol", ic.rel_tol);
  ic.abs_tol = cfg.get_real("abs_tol", ic.abs_tol);
  ic.max_step = cfg.get_real("max_step", ic.max_step);
  ic.fixed_step = cfg.get_real("fixed_step", ic.fixed_step);
  ic.output_points = cfg.get_int("points", ic.output_points);
  ic.validate();
  return ic;
}

json integrator_json(const IntegratorConfig& ic) {
  return {{"method", ic.method == IntegratorMethod::rk4_fixed ? "rk4" : "dopri5"},
          {"rel_tol", ic.rel_tol},
          {"abs_tol", ic.abs_tol},
          {"max_step", ic.max_step},
          {"fixed_step", ic.fixed_step},
          {"trace_tolerance", ic.trace_tolerance},
          {"positivity_tolerance", ic.positivity_tolerance}};
}

/// N and M from the config. Without an explicit M the bath is either thermal
/// or, for squeezed presets, saturated with arg M = phase.
ThermostatParams bath_from(const Config& cfg, bool saturated_default) {
  const double occupation = cfg.get_real("N", saturated_default ? 0.2 : 0.0);
  ThermostatParams bath;
  if (cfg.has("M")) {
    bath = {occupation, cfg.get_complex("M", 0.0)};
  } else if (saturated_default) {
    bath = ThermostatParams::saturated(occupation, cfg.get_real("phase", 0.0));
  } else {
    bath = ThermostatParams::thermal(occupation);
  }
  bath.validate();
  return bath;
}

json bath_json(const ThermostatParams& b) { return {{"N", b.occupation}, {"M", complex_json(b.anomalous)}}; }

std::vector<cplx> amplitudes_from(const Config& cfg, int n, const std::string& fallback) {
  const auto mode = cfg.get_string("q", fallback);
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 7));
  std::vector<cplx> q;
  if (mode == "zsa-random" || mode == "random") {
    std::mt19937_64 rng(seed);
    q = random_eta_amplitudes(n, rng, mode == "zsa-random");
  } else if (mode == "uniform") {
    q.assign(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  } else {
    q = cfg.get_complex_list("q");
    if (static_cast<int>(q.size()) != n) throw SizeError("q has " + std::to_string(q.size()) + " entries, n = " + std::to_string(n));
    double norm2 = 0.0;
    for (auto z : q) norm2 += std::norm(z);
    if (cfg.get_bool("normalize", false)) {
      for (auto& z : q) z /= std::sqrt(norm2);
    }
  }
  (void)make_eta(q);
  return q;
}

cplx amplitude_sum(std::span<const cplx> q) {
  cplx s{};
  for (auto z : q) s += z;
  return s;
}

int atoms_from(const Config& cfg, int fallback) {
  const int n = cfg.get_int("n", fallback);
  if (n < 2 || n > kMaxCollectiveAtoms) throw SizeError("n must lie in [2, " + std::to_string(kMaxCollectiveAtoms) + "]");
  return n;
}

SteadyStateCriteria steady_from(const Config& cfg, const IntegratorConfig& ic) {
  SteadyStateCriteria c;
  c.threshold = cfg.get_real("steady_threshold", 0.0);
  c.max_time = cfg.get_real("steady_max_time", c.max_time);
  c.integrator = ic;
  return c;
}

json steady_json(const SteadyStateResult& r) {
  json j = {{"residual", r.residual}, {"time", r.time}, {"integrity", integrity_json(r.integrity)}};
  if (r.nullspace_distance) j["nullspace_distance"] = *r.nullspace_distance;
  if (r.nullspace_dimension) j["nullspace_dimension"] = *r.nullspace_dimension;
  return j;
}

// ---------------------------------------------------------------------------

ScenarioOutput eta_vacuum(const Config& cfg) {
  const int n = atoms_from(cfg, 4);
  const auto q = amplitudes_from(cfg, n, "zsa-random");
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 10.0);
  const auto ic = integrator_from(cfg);
  const auto eta = make_eta(q);
  const auto traj = evolve(vacuum_collective(n, kappa), DensityMatrix::pure(eta), t_final, ic);

  ScenarioOutput out;
  out.times = traj.times;
  std::vector<double> closed;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    closed.push_back((traj.states[i].matrix() - eta_decay_solution(traj.times[i], q, kappa).matrix()).norm());
  }
  const auto fid = fidelity_series(traj, eta);
  out.columns = {{"fidelity_initial", fid},
                 {"purity", purity_series(traj)},
                 {"ground_population", population_series(traj, 0)},
                 {"trace", trace_series(traj)},
                 {"distance_closed_form", closed}};
  double max_dev = 0.0;
  for (double f : fid) max_dev = std::max(max_dev, std::abs(f - 1.0));
  out.report = {{"n", n},
                {"kappa", kappa},
                {"q", complex_list_json(q)},
                {"amplitude_sum", complex_json(amplitude_sum(q))},
                {"zero_sum", zsa_check(q)},
                {"final_fidelity_initial", fid.back()},
                {"max_fidelity_deviation", max_dev},
                {"max_distance_closed_form", *std::max_element(closed.begin(), closed.end())},
                {"steps", traj.steps},
                {"integrity", integrity_json(traj.integrity)}};
  return out;
}

ScenarioOutput w_vacuum(const Config& cfg) {
  const int n = atoms_from(cfg, 3);
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 10.0);
  const auto ic = integrator_from(cfg);
  const auto w = make_w(n);
  const auto traj = evolve(vacuum_collective(n, kappa), DensityMatrix::pure(w), t_final, ic);
  ScenarioOutput out;
  out.times = traj.times;
  std::vector<double> analytic;
  for (double t : traj.times) analytic.push_back(1.0 - std::exp(-2.0 * n * kappa * t));
  const auto ground = population_series(traj, 0);
  out.columns = {{"ground_population", ground},
                 {"ground_population_closed_form", analytic},
                 {"fidelity_w", fidelity_series(traj, w)},
                 {"purity", purity_series(traj)},
                 {"trace", trace_series(traj)}};
  out.report = {{"n", n},
                {"kappa", kappa},
                {"final_ground_population", ground.back()},
                {"final_ground_population_closed_form", analytic.back()},
                {"steps", traj.steps},
                {"integrity", integrity_json(traj.integrity)}};
  return out;
}

ScenarioOutput eta_absd_compare(const Config& cfg) {
  const int n = atoms_from(cfg, 3);
  const auto q = amplitudes_from(cfg, n, "random");
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 4.0);
  const auto ic = integrator_from(cfg);
  const auto traj = evolve(vacuum_collective(n, kappa), DensityMatrix::pure(make_eta(q)), t_final, ic);
  const auto fitted = absd_series(traj, q);
  const cplx qs = amplitude_sum(q);

  std::vector<double> a_re, a_im, b, s, d, a_re_cf, a_im_cf, b_cf, s_cf, residual;
  double max_dev = 0.0;
  double d_drift = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& f = fitted[i];
    const auto cf = absd_closed_form(qs, n, kappa, 1.0, traj.times[i]);
    a_re.push_back(f.a.real());
    a_im.push_back(f.a.imag());
    b.push_back(f.b);
    s.push_back(f.s);
    d.push_back(f.d);
    a_re_cf.push_back(cf.a.real());
    a_im_cf.push_back(cf.a.imag());
    b_cf.push_back(cf.b);
    s_cf.push_back(cf.s);
    residual.push_back(f.fit_residual);
    max_dev = std::max({max_dev, std::abs(f.a - cf.a), std::abs(f.b - cf.b), std::abs(f.s - cf.s)});
    d_drift = std::max(d_drift, std::abs(f.d - fitted.front().d));
  }
  ScenarioOutput out;
  out.times = traj.times;
  out.columns = {{"A_re", a_re},       {"A_im", a_im},       {"B", b},       {"S", s},       {"D", d},
                 {"A_re_closed", a_re_cf}, {"A_im_closed", a_im_cf}, {"B_closed", b_cf}, {"S_closed", s_cf},
                 {"fit_residual", residual}};
  out.report = {{"n", n},
                {"kappa", kappa},
                {"q", complex_list_json(q)},
                {"amplitude_sum", complex_json(qs)},
                {"max_coefficient_deviation", max_dev},
                {"max_D_drift", d_drift},
                {"max_fit_residual", *std::max_element(residual.begin(), residual.end())},
                {"integrity", integrity_json(traj.integrity)}};
  return out;
}

DensityMatrix triplet_mixture() {
  const auto space = SpaceLabel::atoms(2);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1.0 / 3.0;
  m(3, 3) = 1.0 / 3.0;
  m.block(1, 1, 2, 2).setConstant(1.0 / 6.0);
  return {space, m};
}

ScenarioOutput two_atom_squeezed(const Config& cfg) {
  const auto bath = bath_from(cfg, true);
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 20.0);
  const auto initial = cfg.get_string("initial", "triplet-mixture");
  const auto ic = integrator_from(cfg);
  const DensityMatrix rho0 =
      initial == "triplet-mixture" ? triplet_mixture() : DensityMatrix::pure(parse_state_spec(initial));
  const auto gen = dissipator_collective(2, bath, kappa);
  const double phase = std::arg(bath.anomalous);
  const auto target = two_atom_squeezed_steady(bath.occupation, phase);

  const auto traj = evolve(gen, rho0, t_final, ic);
  const auto ss = steady_state(gen, rho0, steady_from(cfg, ic));
  ScenarioOutput out;
  out.times = traj.times;
  out.columns = {{"fidelity_sst", fidelity_series(traj, target)}, {"purity", purity_series(traj)},
                 {"trace", trace_series(traj)}};
  out.report = {{"bath", bath_json(bath)},
                {"kappa", kappa},
                {"initial", initial},
                {"fidelity_to_SST", fidelity(target, ss.state)},
                {"purity", purity(ss.state)},
                {"target", complex_list_json(std::vector<cplx>(target.amplitudes().begin(), target.amplitudes().end()))},
                {"steady_state", steady_json(ss)},
                {"integrity", integrity_json(traj.integrity)}};
  return out;
}

ScenarioOutput eta3_squeezed(const Config& cfg) {
  const auto bath = bath_from(cfg, true);
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 20.0);
  const auto q = amplitudes_from(cfg, 3, "zsa-random");
  const auto ic = integrator_from(cfg);
  const auto rho0 = DensityMatrix::pure(make_eta(q));
  const auto gen = dissipator_collective(3, bath, kappa);
  const auto traj = evolve(gen, rho0, t_final, ic);
  const auto ss = steady_state(gen, rho0, steady_from(cfg, ic));
  const auto occ = single_atom_squeezed_occupation(bath.occupation);
  const double nn = bath.occupation;
  // Doublet populations (N+1)/(2N+1), N/(2N+1).
  const double doublet_purity = ((nn + 1.0) * (nn + 1.0) + nn * nn) / ((2.0 * nn + 1.0) * (2.0 * nn + 1.0));

  ScenarioOutput out;
  out.times = traj.times;
  out.columns = {{"purity", purity_series(traj)},
                 {"ground_population", population_series(traj, 0)},
                 {"trace", trace_series(traj)}};
  out.report = {{"bath", bath_json(bath)},
                {"kappa", kappa},
                {"q", complex_list_json(q)},
                {"purity", purity(ss.state)},
                {"mixed", purity(ss.state) < 0.99},
                {"doublet_mixture_purity", doublet_purity},
                {"lower_level_occupation",
                 {{"numeric", occ.numeric}, {"detailed_balance", occ.detailed_balance}, {"printed", occ.printed}}},
                {"steady_state", steady_json(ss)},
                {"integrity", integrity_json(traj.integrity)}};
  return out;
}

ScenarioOutput eta4_squeezed(const Config& cfg) {
  const auto bath = bath_from(cfg, true);
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 20.0);
  const auto q = amplitudes_from(cfg, 4, "zsa-random");
  if (!zsa_check(q)) throw ValidationError("eta4-squeezed needs zero-sum amplitudes");
  const auto ic = integrator_from(cfg);
  const auto rho0 = DensityMatrix::pure(make_eta(q));
  const auto gen = dissipator_collective(4, bath, kappa);
  const auto target = eta4_squeezed_final(q, bath.occupation, std::arg(bath.anomalous));
  const auto traj = evolve(gen, rho0, t_final, ic);
  const auto ss = steady_state(gen, rho0, steady_from(cfg, ic));
  ScenarioOutput out;
  out.times = traj.times;
  out.columns = {{"fidelity_final", fidelity_series(traj, target)}, {"purity", purity_series(traj)},
                 {"trace", trace_series(traj)}};
  out.report = {{"bath", bath_json(bath)},
                {"kappa", kappa},
                {"q", complex_list_json(q)},
                {"fidelity_to_final", fidelity(target, ss.state)},
                {"purity", purity(ss.state)},
                {"steady_state", steady_json(ss)},
                {"integrity", integrity_json(traj.integrity)}};
  return out;
}

ScenarioOutput memory_cycle_preset(const Config& cfg) {
  MemoryConfig mc;
  mc.n = atoms_from(cfg, 3);
  const auto q = amplitudes_from(cfg, mc.n, "zsa-random");
  mc.coupling_f = cfg.get_real("f", 1.0);
  if (cfg.has("write_time")) mc.write_time = cfg.get_real("write_time", 0.0);
  mc.store_kappa = cfg.get_real("kappa", 1.0);
  mc.store_bath = bath_from(cfg, false);
  mc.integrator = integrator_from(cfg);
  const auto store_times = cfg.get_real_list("store_times", {0.0, 0.5, 1.0, 2.0, 5.0, 10.0});

  std::vector<double> wf, pf, rf, pu;
  json cycles = json::array();
  IntegrityStats integrity;
  integrity.min_eigenvalue = 1.0;
  for (double ts : store_times) {
    mc.store_time = ts;
    const auto rep = memory_cycle(mc, q);
    wf.push_back(rep.write_fidelity);
    pf.push_back(rep.post_store_fidelity);
    rf.push_back(rep.read_fidelity);
    pu.push_back(rep.purity_after_store);
    integrity.merge(rep.integrity);
    cycles.push_back({{"store_time", ts},
                      {"write_fidelity", rep.write_fidelity},
                      {"post_store_fidelity", rep.post_store_fidelity},
                      {"read_fidelity", rep.read_fidelity},
                      {"purity_after_store", rep.purity_after_store}});
  }
  ScenarioOutput out;
  out.times = store_times;
  out.columns = {{"write_fidelity", wf}, {"post_store_fidelity", pf}, {"read_fidelity", rf}, {"purity_after_store", pu}};
  out.report = {{"parameters",
                 {{"n", mc.n},
                  {"coupling_f", mc.coupling_f},
                  {"write_time", mc.effective_write_time()},
                  {"store_kappa", mc.store_kappa},
                  {"store_bath", bath_json(mc.store_bath)},
                  {"q", complex_list_json(q)}}},
                {"zero_sum", zsa_check(q)},
                {"cycles", cycles},
                {"integrity", integrity_json(integrity)}};
  return out;
}

ScenarioOutput full_cavity_reduction(const Config& cfg) {
  ModelParams model;
  model.n = atoms_from(cfg, 3);
  model.cavity_cutoff = cfg.get_int("cutoff", 4);
  model.g = cfg.get_real("g", 1.0);
  model.delta = cfg.get_real("delta", 100.0);
  model.kappa = cfg.get_real("kappa", 1.0);
  model.gamma_sq = cfg.get_real("gamma_sq", 5.0);
  model.k_sq = cfg.get_real("k_sq", 1e-5);
  model.validate();
  const auto bath = bath_from(cfg, false);
  const auto q = amplitudes_from(cfg, model.n, "random");
  const int photons = cfg.get_int("photons", 0);
  const double t_final = cfg.get_real("t_final", 5.0);
  const auto ic = integrator_from(cfg);

  std::vector<double> grid(static_cast<std::size_t>(ic.output_points));
  for (int i = 0; i < ic.output_points; ++i) grid[static_cast<std::size_t>(i)] = t_final * i / (ic.output_points - 1);
  const auto rep = reduction_check(model, bath, DensityMatrix::pure(make_eta(q)), fock_state(model.cavity_cutoff, photons),
                                   grid, ic, cfg.get_bool("check_cutoff", true));
  ScenarioOutput out;
  out.times = rep.times;
  out.columns = {{"trace_distance", rep.distances}};
  json ratios = json::array();
  for (const auto& r : rep.ratios) {
    ratios.push_back({{"name", r.name}, {"value", std::isfinite(r.value) ? json(r.value) : json("inf")}, {"ok", r.ok}});
  }
  out.report = {{"parameters",
                 {{"n", model.n},
                  {"cutoff", model.cavity_cutoff},
                  {"g", model.g},
                  {"delta", model.delta},
                  {"kappa", model.kappa},
                  {"gamma_sq", model.gamma_sq},
                  {"k_sq", model.k_sq},
                  {"photons", photons},
                  {"bath", bath_json(bath)},
                  {"q", complex_list_json(q)}}},
                {"max_trace_distance", rep.max_trace_distance},
                {"cutoff_residual", rep.cutoff_residual},
                {"regime_ratios", ratios},
                {"regime_ok", rep.regime_ok},
                {"warnings", rep.warnings},
                {"integrity", integrity_json(rep.integrity)}};
  return out;
}

ScenarioOutput dfs_scan(const Config& cfg) {
  const int n_min = cfg.get_int("n_min", 2);
  const int n_max = cfg.get_int("n_max", 6);
  if (n_min < 2 || n_max < n_min || n_max > 8) throw SizeError("need 2 <= n_min <= n_max <= 8");
  const double kappa = cfg.get_real("kappa", 1.0);
  const double t_final = cfg.get_real("t_final", 10.0);
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 7));
  auto ic = integrator_from(cfg);

  json scan = json::array();
  for (int n = n_min; n <= n_max; ++n) {
    const auto gen = vacuum_collective(n, kappa);
    const auto dark = dark_subspace(gen, 1);
    json basis = json::array();
    bool all_zsa = true;
    double j_dev = 0.0;
    for (const auto& v : dark.basis) {
      const auto amps = single_excitation_amplitudes(v);
      all_zsa = all_zsa && zsa_check(amps);
      const auto dn = dicke_numbers(v);
      j_dev = std::max(j_dev, std::abs(dn.j - (0.5 * n - 1.0)));
      basis.push_back(complex_list_json(amps));
    }
    scan.push_back({{"n", n},
                    {"dimension", dark.basis.size()},
                    {"expected_dimension", n - 1},
                    {"all_zero_sum", all_zsa},
                    {"max_j_deviation", j_dev},
                    {"degeneracy_j_n/2-1", dicke_degeneracy(n, 0.5 * n - 1.0)},
                    {"max_residual", dark.max_residual},
                    {"basis", basis}});
  }

  // Permutation expectations under collective decay from a generic pure state.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CVector psi(Index{1} << n_max);
  for (Index i = 0; i < psi.size(); ++i) psi(i) = cplx(normal(rng), normal(rng));
  psi.normalize();
  std::vector<double> grid(static_cast<std::size_t>(ic.output_points));
  for (int i = 0; i < ic.output_points; ++i) grid[static_cast<std::size_t>(i)] = t_final * i / (ic.output_points - 1);
  const auto sym = symmetry_conserved(vacuum_collective(n_max, kappa),
                                      DensityMatrix::pure(StateVector(SpaceLabel::atoms(n_max), psi)), grid, ic);
  json table = json::array();
  for (const auto& row : sym.table) {
    table.push_back({{"i", row.i}, {"k", row.k}, {"initial", row.initial}, {"max_drift", row.max_drift}});
  }

  ScenarioOutput out;
  out.times = sym.times;
  out.columns = {{"max_transposition_drift", sym.drift_series}};
  out.report = {{"kappa", kappa},
                {"sector", 1},
                {"scan", scan},
                {"symmetry", {{"n", n_max}, {"max_drift", sym.max_drift}, {"table", table}}},
                {"integrity", integrity_json(sym.integrity)}};
  return out;
}

using PresetFn = std::function<ScenarioOutput(const Config&)>;

const std::vector<std::pair<PresetInfo, PresetFn>>& registry() {
  static const std::vector<std::pair<PresetInfo, PresetFn>> r = {
      {{"eta-vacuum", "eta_n in the vacuum collective bath; zero-sum amplitudes give immunity to collective decay"},
       eta_vacuum},
      {{"w-vacuum", "W_n in the vacuum collective bath decays to the ground state |0>"}, w_vacuum},
      {{"eta-absd-compare", "A, B, S, D coefficients of the decaying eta_n against their closed forms"},
       eta_absd_compare},
      {{"two-atom-squeezed", "two atoms in a squeezed collective bath reach the pure steady state s"},
       two_atom_squeezed},
      {{"eta3-squeezed", "zero-sum eta_3 in a squeezed collective bath decays into a mixed state"}, eta3_squeezed},
      {{"eta4-squeezed", "zero-sum eta_4 in a squeezed collective bath: final state by replacing |00⟩ → s"},
       eta4_squeezed},
      {{"memory-cycle", "write by swap cos(ft)|0>|eta> + sin(ft)|eta>|0>, store in the collective bath, read back"},
       memory_cycle_preset},
      {{"full-cavity-reduction", "atoms plus dispersive cavity mode reduced to the atomic master equation"},
       full_cavity_reduction},
      {{"dfs-scan", "dark subspace of collective decay in the one-excitation sector has dimension n-1"}, dfs_scan},
  };
  return r;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = [] {
    std::vector<PresetInfo> c;
    for (const auto& [info, fn] : registry()) c.push_back(info);
    return c;
  }();
  return catalog;
}

std::string list_presets() {
  std::size_t width = 0;
  for (const auto& p : preset_catalog()) width = std::max(width, p.name.size());
  std::string out;
  for (const auto& p : preset_catalog()) {
    out += p.name;
    out.append(width + 2 - p.name.size(), ' ');
    out += p.summary;
    out += '\n';
  }
  return out;
}

ScenarioOutput run_preset(const std::string& name, const Config& cfg) {
  for (const auto& [info, fn] : registry()) {
    if (info.name == name) return fn(cfg);
  }
  throw UsageError("unknown preset '" + name + "' (see `sim list`)");
}

int run_scenario(const Config& cfg, std::ostream& log, std::ostream& err) {
  try {
    const auto name = cfg.require_string("preset");
    const std::filesystem::path out_dir = cfg.get_string("out", "run-" + name);
    const auto start = std::chrono::steady_clock::now();
    auto result = run_preset(name, cfg);
    const auto unused = cfg.unused_keys();
    if (!unused.empty()) {
      std::string keys;
      for (const auto& k : unused) keys += (keys.empty() ? "" : ", ") + k;
      throw UsageError("unknown key(s) for preset " + name + ": " + keys);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(out_dir);
    write_csv(out_dir / "trajectory.csv", result.times, result.columns);
    {
      std::ofstream f(out_dir / "report.json", std::ios::binary);
      f << result.report.dump(2) << '\n';
    }
    json params = json::object();
    for (const auto& [k, v] : cfg.entries()) params[k] = v;
    json manifest = {{"program", "sim"},
                     {"version", kVersion},
                     {"preset", name},
                     {"parameters", params},
                     {"integrator", integrator_json(integrator_from(cfg))},
                     {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                           "." + std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__},
                     {"elapsed_seconds", elapsed},
                     {"outputs", {"trajectory.csv", "report.json", "manifest.json"}}};
    {
      std::ofstream f(out_dir / "manifest.json", std::ios::binary);
      f << manifest.dump(2) << '\n';
    }
    log << name << ": wrote " << out_dir.string() << '\n';
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace dfsim::cli
