#include "dfsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dfsim/errors.hpp"

namespace dfsim {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

class Integrator {
 public:
  Integrator(const Generator& gen, const IntegratorConfig& config, double trace0)
      : gen_(gen), cfg_(config), trace0_(trace0) {
    stats_.min_eigenvalue = std::numeric_limits<double>::infinity();
  }

  /// Advances y from t to t_target exactly.
  void advance(CMatrix& y, double& t, double t_target) {
    if (t_target <= t) return;
    if (cfg_.method == IntegratorMethod::rk4_fixed) {
      advance_rk4(y, t, t_target);
    } else {
      advance_dopri(y, t, t_target);
    }
  }

  void check_sample(const CMatrix& y) {
    stats_.min_eigenvalue = std::min(stats_.min_eigenvalue, check_positivity(y));
    stats_.trace_error = std::max(stats_.trace_error, std::abs(y.trace() - cplx(1.0)));
  }

  [[nodiscard]] const IntegrityStats& stats() const { return stats_; }
  [[nodiscard]] long steps() const { return steps_; }

 private:
  void advance_rk4(CMatrix& y, double& t, double t_target) {
    const double span = t_target - t;
    const auto n_sub = static_cast<long>(std::ceil(span / cfg_.fixed_step - 1e-9));
    const double h = span / static_cast<double>(std::max<long>(n_sub, 1));
    for (long s = 0; s < std::max<long>(n_sub, 1); ++s) {
      gen_.apply(y, k1_);
      gen_.apply(y + (0.5 * h) * k1_, k2_);
      gen_.apply(y + (0.5 * h) * k2_, k3_);
      gen_.apply(y + h * k3_, k4_);
      y_new_ = y + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
      accept(y);
      t = (s + 1 == std::max<long>(n_sub, 1)) ? t_target : t + h;
    }
  }

  void advance_dopri(CMatrix& y, double& t, double t_target) {
    if (!have_k1_) {
      gen_.apply(y, k1_);
      have_k1_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(y, t_target - t);
    while (t < t_target) {
      const double remaining = t_target - t;
      bool last = false;
      double h = std::min(h_, cfg_.max_step);
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        last = true;
      }
      if (h < cfg_.min_step && !last) throw StiffnessError("step size underflow at t = " + std::to_string(t));

      tmp_ = y + (h * a21) * k1_;
      gen_.apply(tmp_, k2_);
      tmp_ = y + h * (a31 * k1_ + a32 * k2_);
      gen_.apply(tmp_, k3_);
      tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      gen_.apply(tmp_, k4_);
      tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      gen_.apply(tmp_, k5_);
      tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      gen_.apply(tmp_, k6_);
      y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
      gen_.apply(y_new_, k7_);
      err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

      double sum = 0.0;
      for (Index j = 0; j < y.cols(); ++j) {
        for (Index i = 0; i < y.rows(); ++i) {
          const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y(i, j)), std::abs(y_new_(i, j)));
          sum += std::norm(err_(i, j)) / (sc * sc);
        }
      }
      const double err = std::sqrt(sum / static_cast<double>(y.size()));
      if (!std::isfinite(err)) throw StiffnessError("non-finite error estimate at t = " + std::to_string(t));

      if (++attempts_ > cfg_.max_steps) throw StiffnessError("step budget exhausted at t = " + std::to_string(t));
      if (err <= 1.0) {
        accept(y);
        t = last ? t_target : t + h;
        // FSAL; the symmetrized state differs from y_new_ only at round-off.
        k1_.swap(k7_);
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last || fac < 1.0) h_ = h * fac;
      } else {
        h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (h_ < cfg_.min_step) throw StiffnessError("step size underflow at t = " + std::to_string(t));
      }
    }
  }

  double initial_step(const CMatrix& y, double span) const {
    const double d0 = y.norm();
    const double d1 = k1_.norm();
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-3 : 0.01 * d0 / d1;
    return std::clamp(h, cfg_.min_step * 10.0, std::min(span, cfg_.max_step));
  }

  void accept(CMatrix& y) {
    ++steps_;
    const double herm = (y_new_ - y_new_.adjoint()).cwiseAbs().maxCoeff();
    stats_.hermiticity_residual = std::max(stats_.hermiticity_residual, herm);
    y = 0.5 * (y_new_ + y_new_.adjoint());
    const double drift = std::abs(y.trace() - cplx(trace0_));
    if (drift > cfg_.trace_tolerance) {
      throw IntegrityError("trace drift " + std::to_string(drift) + " exceeds tolerance");
    }
    if (cfg_.positivity_check_interval > 0 && steps_ % cfg_.positivity_check_interval == 0) {
      stats_.min_eigenvalue = std::min(stats_.min_eigenvalue, check_positivity(y));
    }
  }

  double check_positivity(const CMatrix& y) const {
    const double lowest = min_eigenvalue(y);
    if (lowest < -cfg_.positivity_tolerance) {
      throw IntegrityError("negative eigenvalue " + std::to_string(lowest) + " during integration");
    }
    return lowest;
  }

  const Generator& gen_;
  const IntegratorConfig& cfg_;
  double trace0_;
  IntegrityStats stats_;
  long steps_ = 0;
  long attempts_ = 0;
  double h_ = 0.0;
  bool have_k1_ = false;
  CMatrix k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
};

void check_initial(const Generator& gen, const DensityMatrix& rho0) {
  if (!(gen.space() == rho0.space())) throw DimensionError("initial state and generator live on different spaces");
  rho0.validate(1e-10, 1e-10, 1e-8);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ValidationError("integrator tolerances must be > 0");
  if (!(max_step > 0.0) || !(fixed_step > 0.0) || !(min_step > 0.0)) throw ValidationError("step sizes must be > 0");
  if (output_points < 2) throw ValidationError("need at least two output points");
}

Trajectory evolve(const Generator& gen, const DensityMatrix& rho0, std::span<const double> sample_times,
                  const IntegratorConfig& config) {
  config.validate();
  check_initial(gen, rho0);
  if (sample_times.empty()) throw ValidationError("no sample times");
  if (sample_times.front() < 0.0 || !std::is_sorted(sample_times.begin(), sample_times.end())) {
    throw ValidationError("sample times must be non-negative and non-decreasing");
  }

  Trajectory traj{rho0.space(), {}, {}, {}, {}, 0};
  CMatrix y = rho0.matrix();
  double t = 0.0;
  Integrator integ(gen, config, rho0.matrix().trace().real());
  for (double ts : sample_times) {
    integ.advance(y, t, ts);
    integ.check_sample(y);
    traj.times.push_back(ts);
    traj.states.emplace_back(rho0.space(), y);
  }
  traj.integrity = integ.stats();
  traj.steps = integ.steps();
  return traj;
}

Trajectory evolve(const Generator& gen, const DensityMatrix& rho0, double t_final, const IntegratorConfig& config) {
  if (!(t_final > 0.0)) throw ValidationError("t_final must be > 0");
  config.validate();
  std::vector<double> grid(static_cast<std::size_t>(config.output_points));
  for (int i = 0; i < config.output_points; ++i) grid[static_cast<std::size_t>(i)] = t_final * i / (config.output_points - 1);
  grid.back() = t_final;
  return evolve(gen, rho0, grid, config);
}

DensityMatrix evolve_to(const Generator& gen, const DensityMatrix& rho0, double t_final,
                        const IntegratorConfig& config, IntegrityStats* stats) {
  const double grid[] = {t_final};
  auto traj = evolve(gen, rho0, grid, config);
  if (stats) stats->merge(traj.integrity);
  return traj.states.back();
}

SteadyStateResult steady_state(const Generator& gen, const DensityMatrix& rho0, const SteadyStateCriteria& criteria) {
  const double threshold = criteria.threshold > 0.0 ? criteria.threshold : 1e-10 * static_cast<double>(gen.dimension());
  DensityMatrix rho = rho0;
  IntegrityStats stats;
  stats.min_eigenvalue = std::numeric_limits<double>::infinity();
  double t = 0.0;
  double chunk = criteria.initial_chunk;
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  double residual = gen.apply(rho.matrix()).norm();
  while (residual > threshold) {
    if (t >= criteria.max_time) {
      throw ConvergenceError("no steady state within t = " + std::to_string(criteria.max_time) +
                             " (residual " + std::to_string(residual) + ")");
    }
    if (residual < 0.99 * best) {
      best = residual;
      stall = 0;
    } else if (++stall >= criteria.stall_chunks) {
      throw ConvergenceError("steady-state search stalled at residual " + std::to_string(residual));
    }
    rho = evolve_to(gen, rho, chunk, criteria.integrator, &stats);
    t += chunk;
    chunk = std::min(chunk * 1.5, 50.0 * criteria.initial_chunk);
    residual = gen.apply(rho.matrix()).norm();
  }

  SteadyStateResult result{rho, residual, t, std::nullopt, std::nullopt, stats};
  if (!std::isfinite(result.integrity.min_eigenvalue)) result.integrity.min_eigenvalue = min_eigenvalue(rho.matrix());
  if (criteria.nullspace_check && gen.dimension() <= kMaxMaterializeDim) {
    const CMatrix liou = gen.materialize();
    Eigen::BDCSVD<CMatrix> svd(liou, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-9 * std::max(1.0, sv(0));
    const Index d2 = liou.cols();
    Index null_dim = 0;
    CVector v = Eigen::Map<const CVector>(rho.matrix().data(), d2);
    CVector projected = CVector::Zero(d2);
    for (Index k = 0; k < d2; ++k) {
      if (sv(k) <= cut) {
        const CVector col = svd.matrixV().col(k);
        projected += col * col.dot(v);
        ++null_dim;
      }
    }
    result.nullspace_dimension = static_cast<int>(null_dim);
    result.nullspace_distance = (v - projected).norm();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Observables

std::map<std::string, std::vector<cplx>> observables(const Trajectory& traj, std::span<const NamedOperator> ops) {
  std::map<std::string, std::vector<cplx>> out;
  for (const auto& op : ops) {
    if (op.op.rows() != traj.space.dimension()) throw DimensionError("observable '" + op.name + "' has wrong size");
    auto& series = out[op.name];
    for (const auto& s : traj.states) series.push_back((s.matrix() * op.op).trace());
  }
  return out;
}

std::vector<double> purity_series(const Trajectory& traj) {
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(purity(s));
  return out;
}

std::vector<double> fidelity_series(const Trajectory& traj, const StateVector& target) {
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(fidelity(target, s));
  return out;
}

std::vector<double> population_series(const Trajectory& traj, Index basis_index) {
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(s.matrix()(basis_index, basis_index).real());
  return out;
}

std::vector<double> trace_series(const Trajectory& traj) {
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(s.matrix().trace().real());
  return out;
}

AbsdCoefficients extract_absd(const CMatrix& rho, std::span<const cplx> q) {
  const auto eta = make_eta(q).amplitudes();
  const int n = static_cast<int>(q.size());
  if (rho.rows() != eta.size()) throw DimensionError("ABSD extraction: state size mismatch");
  CVector sym = CVector::Zero(eta.size());
  for (int k = 0; k < n; ++k) sym(Index{1} << (n - 1 - k)) = 1.0;
  CVector ground = CVector::Zero(eta.size());
  ground(0) = 1.0;

  const CMatrix family[5] = {sym * eta.adjoint(), eta * sym.adjoint(), sym * sym.adjoint(),
                             ground * ground.adjoint(), eta * eta.adjoint()};
  Eigen::Matrix<cplx, 5, 5> gram;
  Eigen::Matrix<cplx, 5, 1> rhs;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) gram(i, j) = (family[i].adjoint() * family[j]).trace();
    rhs(i) = (family[i].adjoint() * rho).trace();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 5, 5>> es(gram, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < 1e-10 * es.eigenvalues().maxCoeff()) {
    throw ExtractionError("ABSD operator family is degenerate (eta collinear with |1;n>)");
  }
  const Eigen::Matrix<cplx, 5, 1> x = gram.ldlt().solve(rhs);
  CMatrix fitted = CMatrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < 5; ++i) fitted += x(i) * family[i];
  AbsdCoefficients c;
  c.a = 0.5 * (x(0) + std::conj(x(1)));
  c.b = x(2).real();
  c.s = x(3).real();
  c.d = x(4).real();
  c.fit_residual = (rho - fitted).norm();
  return c;
}

std::vector<AbsdCoefficients> absd_series(const Trajectory& traj, std::span<const cplx> q) {
  std::vector<AbsdCoefficients> out;
  for (const auto& s : traj.states) out.push_back(extract_absd(s.matrix(), q));
  return out;
}

}  // namespace dfsim
