#include "dfsim/dfs.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dfsim/errors.hpp"

namespace dfsim {

namespace {

double residual(const Generator& gen, const CVector& v) {
  return gen.apply(v * v.adjoint()).norm();
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

bool is_dark(const Generator& gen, const StateVector& psi, double tol) {
  if (!(gen.space() == psi.space())) throw DimensionError("state and generator live on different spaces");
  return residual(gen, psi.amplitudes()) <= tol;
}

DarkSubspace dark_subspace(const Generator& gen, std::optional<int> sector, double tol) {
  const SpaceLabel& space = gen.space();
  const Index d = space.dimension();
  if (d > kMaxDarkSearchDim) {
    throw SizeError("dark-subspace search limited to dimension " + std::to_string(kMaxDarkSearchDim));
  }
  std::vector<Index> cols;
  for (Index i = 0; i < d; ++i) {
    if (!sector || space.excitation_number(i) == *sector) cols.push_back(i);
  }
  DarkSubspace out;
  out.sector = sector;
  if (cols.empty()) return out;
  const auto m = static_cast<Index>(cols.size());

  CMatrix embed = CMatrix::Zero(d, m);
  for (Index c = 0; c < m; ++c) embed(cols[static_cast<std::size_t>(c)], c) = 1.0;

  const auto channels = gen.canonical_channels();
  CMatrix kernel;
  if (channels.empty()) {
    kernel = embed;
  } else {
    CMatrix stacked(d * static_cast<Index>(channels.size()), m);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      stacked.middleRows(static_cast<Index>(c) * d, d) = std::sqrt(channels[c].rate) * channels[c].jump * embed;
    }
    Eigen::BDCSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-9 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    std::vector<Index> null_cols;
    for (Index k = 0; k < m; ++k) {
      if (k >= sv.size() || sv(k) <= cut) null_cols.push_back(k);
    }
    kernel.resize(d, static_cast<Index>(null_cols.size()));
    for (std::size_t k = 0; k < null_cols.size(); ++k) {
      kernel.col(static_cast<Index>(k)) = embed * svd.matrixV().col(null_cols[k]);
    }
  }

  if (gen.hamiltonian() && kernel.cols() > 0) {
    const CMatrix h_kernel = *gen.hamiltonian() * kernel;
    const CMatrix compressed = kernel.adjoint() * h_kernel;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (compressed + compressed.adjoint()));
    kernel = kernel * es.eigenvectors();
  }

  for (Index k = 0; k < kernel.cols(); ++k) {
    const CVector v = kernel.col(k).normalized();
    const double r = residual(gen, v);
    if (r > tol) continue;
    out.max_residual = std::max(out.max_residual, r);
    out.basis.emplace_back(space, v);
  }

  if (out.basis.size() > 1) {
    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 4; ++trial) {
      CVector v = CVector::Zero(d);
      for (const auto& b : out.basis) v += cplx(normal(rng), normal(rng)) * b.amplitudes();
      v.normalize();
      const double r = residual(gen, v);
      out.max_residual = std::max(out.max_residual, r);
      if (r > tol) out.superpositions_dark = false;
    }
  }
  return out;
}

bool zsa_check(std::span<const cplx> q, double tol) {
  cplx s{};
  for (auto x : q) s += x;
  return std::abs(s) <= tol;
}

DickeNumbers dicke_numbers(const StateVector& psi, bool allow_mixed, double tol) {
  const int n = psi.space().atom_count();
  if (n == 0 || static_cast<std::size_t>(n) != psi.space().size()) {
    throw DimensionError("Dicke numbers need an atoms-only state");
  }
  const auto ops = collective_ops(n);
  const CVector& v = psi.amplitudes();
  const double norm2 = v.squaredNorm();
  const CVector j2v = ops.j_squared * v;
  const CVector j3v = ops.j3 * v;
  const double j2 = v.dot(j2v).real() / norm2;
  const double j3 = v.dot(j3v).real() / norm2;
  DickeNumbers out;
  out.j = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * j2)));
  out.m = j3;
  out.j_squared_variance = std::max(0.0, j2v.squaredNorm() / norm2 - j2 * j2);
  out.j3_variance = std::max(0.0, j3v.squaredNorm() / norm2 - j3 * j3);
  out.eigenstate = out.j_squared_variance <= tol && out.j3_variance <= tol;
  if (!out.eigenstate && !allow_mixed) {
    throw EigenstateError("state is not a simultaneous J^2, J3 eigenstate (variances " +
                          std::to_string(out.j_squared_variance) + ", " + std::to_string(out.j3_variance) + ")");
  }
  return out;
}

long long dicke_degeneracy(int n, double j) {
  if (n < 1) throw DomainError("n must be >= 1");
  const double offset = 0.5 * n - j;
  const double rounded = std::round(offset);
  if (j < 0.0 || offset < -1e-12 || std::abs(offset - rounded) > 1e-12) {
    throw DomainError("j must be one of n/2, n/2 - 1, ..., >= 0");
  }
  const int k = n - static_cast<int>(rounded);  // n/2 + j
  return binomial(n, k) - binomial(n, k + 1);
}

SymmetryReport symmetry_conserved(const Generator& gen, const DensityMatrix& rho0, std::span<const double> t_grid,
                                  const IntegratorConfig& config) {
  const SpaceLabel& space = gen.space();
  const int n = space.atom_count();
  if (static_cast<std::size_t>(n) != space.size()) throw DimensionError("symmetry check needs an atoms-only generator");
  const auto traj = evolve(gen, rho0, t_grid, config);
  SymmetryReport rep;
  rep.times = traj.times;
  rep.integrity = traj.integrity;
  rep.drift_series.assign(traj.times.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const SparseOp p = transposition_operator(n, i, k);
      TranspositionDrift row{i, k, 0.0, 0.0};
      row.initial = (p * rho0.matrix()).trace().real();
      for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const double drift = std::abs((p * traj.states[s].matrix()).trace() - row.initial);
        row.max_drift = std::max(row.max_drift, drift);
        rep.drift_series[s] = std::max(rep.drift_series[s], drift);
      }
      rep.max_drift = std::max(rep.max_drift, row.max_drift);
      rep.table.push_back(row);
    }
  }
  return rep;
}

}  // namespace dfsim
