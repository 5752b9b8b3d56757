#pragma once

// Time integration of master-equation generators and steady-state search.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfsim/liouvillian.hpp"

namespace dfsim {

enum class IntegratorMethod { rk4_fixed, dopri5_adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::dopri5_adaptive;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = 0.25;
  double fixed_step = 1e-3;   // rk4_fixed only
  double min_step = 1e-12;    // below this the run is declared stiff
  long max_steps = 5'000'000;
  int positivity_check_interval = 10;
  double trace_tolerance = 1e-8;
  double positivity_tolerance = 1e-6;
  int output_points = 101;    // used when no explicit sample grid is given

  void validate() const;
};

struct Trajectory {
  SpaceLabel space;
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::map<std::string, std::vector<double>> observables;
  IntegrityStats integrity;
  long steps = 0;
};

/// Integrates d rho/dt = gen.apply(rho) from t = 0, recording the state at each
/// time in `sample_times` (non-decreasing, >= 0). The state is re-symmetrized
/// after every step. Throws StiffnessError on step-size underflow and
/// IntegrityError when trace drift or negative eigenvalues exceed the configured
/// tolerances.
[[nodiscard]] Trajectory evolve(const Generator& gen, const DensityMatrix& rho0, std::span<const double> sample_times,
                                const IntegratorConfig& config = {});
/// Uniform grid of config.output_points samples on [0, t_final].
[[nodiscard]] Trajectory evolve(const Generator& gen, const DensityMatrix& rho0, double t_final,
                                const IntegratorConfig& config = {});

/// Final state only.
[[nodiscard]] DensityMatrix evolve_to(const Generator& gen, const DensityMatrix& rho0, double t_final,
                                      const IntegratorConfig& config = {}, IntegrityStats* stats = nullptr);

struct SteadyStateCriteria {
  /// ||gen.apply(rho)||_F threshold; <= 0 selects 1e-10 * dim.
  double threshold = 0.0;
  double max_time = 1e4;
  double initial_chunk = 1.0;
  int stall_chunks = 12;
  bool nullspace_check = true;
  IntegratorConfig integrator{};
};

struct SteadyStateResult {
  DensityMatrix state;
  double residual = 0.0;
  double time = 0.0;
  /// Distance of vec(rho) from the null space of the materialized Liouvillian
  /// (only when the Hilbert dimension allows materialization).
  std::optional<double> nullspace_distance;
  std::optional<int> nullspace_dimension;
  IntegrityStats integrity;
};

/// Long-time propagation from rho0 until the generator residual drops below the
/// threshold. Steady states can depend on rho0 when symmetry sectors do not mix.
[[nodiscard]] SteadyStateResult steady_state(const Generator& gen, const DensityMatrix& rho0,
                                             const SteadyStateCriteria& criteria = {});

// Observables ---------------------------------------------------------------

struct NamedOperator {
  std::string name;
  CMatrix op;
};

/// Tr(rho(t) O) for every operator and sample.
[[nodiscard]] std::map<std::string, std::vector<cplx>> observables(const Trajectory& traj,
                                                                  std::span<const NamedOperator> ops);
[[nodiscard]] std::vector<double> purity_series(const Trajectory& traj);
[[nodiscard]] std::vector<double> fidelity_series(const Trajectory& traj, const StateVector& target);
[[nodiscard]] std::vector<double> population_series(const Trajectory& traj, Index basis_index);
[[nodiscard]] std::vector<double> trace_series(const Trajectory& traj);

/// Coefficients of rho in the operator family
///   A |1;n><eta| + A* |eta><1;n| + B |1;n><1;n| + S |0><0| + D |eta><eta|
/// with |1;n> = sum_k |1_k> unnormalized.
struct AbsdCoefficients {
  cplx a;
  double b = 0.0;
  double s = 0.0;
  double d = 0.0;
  double fit_residual = 0.0;  // Frobenius norm of rho minus the fitted combination
};

/// Least-squares fit on the Hilbert-Schmidt Gram system. Throws ExtractionError
/// when |eta> and |1;n> are (nearly) collinear.
[[nodiscard]] AbsdCoefficients extract_absd(const CMatrix& rho, std::span<const cplx> q);
[[nodiscard]] std::vector<AbsdCoefficients> absd_series(const Trajectory& traj, std::span<const cplx> q);

}  // namespace dfsim
