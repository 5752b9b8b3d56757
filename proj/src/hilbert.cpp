#include "dfsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "dfsim/errors.hpp"

namespace dfsim {

namespace {

SparseOp sparse_identity(Index dim) {
  SparseOp id(dim, dim);
  id.setIdentity();
  return id;
}

void require_atoms(int n, int min_n = 1) {
  if (n < min_n || n > kMaxCollectiveAtoms) {
    throw SizeError("atom count " + std::to_string(n) + " outside [" + std::to_string(min_n) +
                    ", " + std::to_string(kMaxCollectiveAtoms) + "]");
  }
}

SparseOp from_triplets(Index dim, const std::vector<Eigen::Triplet<cplx>>& triplets) {
  SparseOp op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceLabel

SpaceLabel::SpaceLabel(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) throw DimensionError("space needs at least one subsystem");
  for (const auto& s : subsystems_) {
    if (s.dim < 2) throw DimensionError("local dimension must be >= 2");
    if (s.kind == SubsystemKind::atom && s.dim != 2) {
      throw DimensionError("atoms are two-level systems");
    }
    dimension_ *= s.dim;
  }
}

SpaceLabel SpaceLabel::atoms(int n) {
  if (n < 1) throw SizeError("need at least one atom");
  return SpaceLabel(std::vector<Subsystem>(static_cast<std::size_t>(n), {SubsystemKind::atom, 2}));
}

SpaceLabel SpaceLabel::atoms_and_mode(int n, int cutoff) {
  if (cutoff < 1) throw SizeError("Fock cutoff must be >= 1");
  std::vector<Subsystem> subs(static_cast<std::size_t>(n), {SubsystemKind::atom, 2});
  subs.push_back({SubsystemKind::mode, cutoff + 1});
  return SpaceLabel(std::move(subs));
}

SpaceLabel SpaceLabel::atoms_and_modes(int n) {
  std::vector<Subsystem> subs(static_cast<std::size_t>(n), {SubsystemKind::atom, 2});
  subs.insert(subs.end(), static_cast<std::size_t>(n), {SubsystemKind::mode, 2});
  return SpaceLabel(std::move(subs));
}

SpaceLabel SpaceLabel::mode(int cutoff) {
  if (cutoff < 1) throw SizeError("Fock cutoff must be >= 1");
  return SpaceLabel({{SubsystemKind::mode, cutoff + 1}});
}

int SpaceLabel::atom_count() const {
  return static_cast<int>(std::count_if(subsystems_.begin(), subsystems_.end(), [](const auto& s) {
    return s.kind == SubsystemKind::atom;
  }));
}

std::vector<int> SpaceLabel::atom_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].kind == SubsystemKind::atom) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> SpaceLabel::digits(Index index) const {
  std::vector<int> out(subsystems_.size());
  for (std::size_t k = subsystems_.size(); k-- > 0;) {
    out[k] = static_cast<int>(index % subsystems_[k].dim);
    index /= subsystems_[k].dim;
  }
  return out;
}

Index SpaceLabel::index_of(std::span<const int> digits) const {
  if (digits.size() != subsystems_.size()) throw DimensionError("digit count does not match space");
  Index index = 0;
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= subsystems_[k].dim) {
      throw DimensionError("local index " + std::to_string(digits[k]) + " out of range at subsystem " +
                           std::to_string(k));
    }
    index = index * subsystems_[k].dim + digits[k];
  }
  return index;
}

int SpaceLabel::excitation_number(Index index) const {
  int total = 0;
  for (std::size_t k = subsystems_.size(); k-- > 0;) {
    total += static_cast<int>(index % subsystems_[k].dim);
    index /= subsystems_[k].dim;
  }
  return total;
}

SpaceLabel SpaceLabel::subspace(std::span<const int> keep) const {
  if (keep.empty()) throw SubsetError("keep set is empty");
  std::vector<Subsystem> subs;
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(subsystems_.size())) throw SubsetError("subsystem index out of range");
    subs.push_back(subsystems_[static_cast<std::size_t>(k)]);
  }
  return SpaceLabel(std::move(subs));
}

// ---------------------------------------------------------------------------
// StateVector / DensityMatrix

StateVector::StateVector(SpaceLabel space, CVector amplitudes, bool normalized)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
  if (amplitudes_.size() != space_.dimension()) throw DimensionError("amplitude count does not match space");
  if (normalized_ && std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12) {
    throw NormalizationError("state flagged normalized has norm^2 " + std::to_string(amplitudes_.squaredNorm()));
  }
}

StateVector StateVector::tensor(const StateVector& other) const {
  std::vector<Subsystem> subs = space_.subsystems();
  subs.insert(subs.end(), other.space_.subsystems().begin(), other.space_.subsystems().end());
  CVector amps = Eigen::kroneckerProduct(amplitudes_, other.amplitudes_).eval();
  return StateVector(SpaceLabel(std::move(subs)), std::move(amps), normalized_ && other.normalized_);
}

void IntegrityStats::merge(const IntegrityStats& other) {
  trace_error = std::max(trace_error, other.trace_error);
  hermiticity_residual = std::max(hermiticity_residual, other.hermiticity_residual);
  min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
}

DensityMatrix::DensityMatrix(SpaceLabel space, CMatrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dimension() || entries_.cols() != space_.dimension()) {
    throw DimensionError("density matrix shape does not match space");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.space(), psi.projector());
}

IntegrityStats DensityMatrix::integrity() const {
  IntegrityStats stats;
  stats.trace_error = std::abs(entries_.trace() - cplx(1.0));
  stats.hermiticity_residual = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  stats.min_eigenvalue = min_eigenvalue(entries_);
  return stats;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
  const auto s = integrity();
  if (s.hermiticity_residual > herm_tol) {
    throw IntegrityError("density matrix not Hermitian: residual " + std::to_string(s.hermiticity_residual));
  }
  if (s.trace_error > trace_tol) {
    throw IntegrityError("density matrix trace off by " + std::to_string(s.trace_error));
  }
  if (s.min_eigenvalue < -eig_tol) {
    throw IntegrityError("density matrix has eigenvalue " + std::to_string(s.min_eigenvalue));
  }
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  std::vector<Subsystem> subs = space_.subsystems();
  subs.insert(subs.end(), other.space_.subsystems().begin(), other.space_.subsystems().end());
  CMatrix m = Eigen::kroneckerProduct(entries_, other.entries_).eval();
  return DensityMatrix(SpaceLabel(std::move(subs)), std::move(m));
}

// ---------------------------------------------------------------------------
// States

StateVector basis_state(const SpaceLabel& space, std::span<const int> occupation) {
  CVector amps = CVector::Zero(space.dimension());
  amps(space.index_of(occupation)) = 1.0;
  return StateVector(space, std::move(amps));
}

StateVector ground_state(int n) {
  std::vector<int> occ(static_cast<std::size_t>(n), 0);
  return basis_state(SpaceLabel::atoms(n), occ);
}

StateVector make_eta(std::span<const cplx> q) {
  const int n = static_cast<int>(q.size());
  if (n < 2) throw SizeError("eta state needs n >= 2 amplitudes");
  require_atoms(n, 2);
  double norm2 = 0.0;
  for (const auto& a : q) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw NormalizationError("eta amplitudes have sum |q|^2 = " + std::to_string(norm2));
  }
  const auto space = SpaceLabel::atoms(n);
  CVector amps = CVector::Zero(space.dimension());
  for (int k = 0; k < n; ++k) amps(Index{1} << (n - 1 - k)) = q[static_cast<std::size_t>(k)];
  // Renormalize away the 1e-10 slack so the state satisfies the 1e-12 invariant.
  amps /= amps.norm();
  return StateVector(space, std::move(amps));
}

StateVector make_w(int n) {
  require_atoms(n, 1);
  const auto space = SpaceLabel::atoms(n);
  CVector amps = CVector::Zero(space.dimension());
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) amps(Index{1} << (n - 1 - k)) = a;
  return StateVector(space, std::move(amps));
}

StateVector make_singlet_embedding(int n, int i, int k) {
  require_atoms(n, 2);
  if (i == k) throw SiteError("singlet sites must differ");
  if (i < 0 || k < 0 || i >= n || k >= n) throw SiteError("singlet site out of range");
  const auto space = SpaceLabel::atoms(n);
  CVector amps = CVector::Zero(space.dimension());
  const double a = 1.0 / std::sqrt(2.0);
  // |0_i 1_k> - |1_i 0_k>
  amps(Index{1} << (n - 1 - k)) = a;
  amps(Index{1} << (n - 1 - i)) = -a;
  return StateVector(space, std::move(amps));
}

std::vector<cplx> single_excitation_amplitudes(const StateVector& psi) {
  const auto& space = psi.space();
  const int n = static_cast<int>(space.size());
  if (space.atom_count() != n) throw DimensionError("expected an atoms-only state");
  std::vector<cplx> q(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) q[static_cast<std::size_t>(k)] = psi.amplitudes()(Index{1} << (n - 1 - k));
  return q;
}

std::vector<cplx> random_eta_amplitudes(int n, std::mt19937_64& rng, bool zero_sum) {
  if (n < 2) throw SizeError("eta amplitudes need n >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    std::vector<cplx> q(static_cast<std::size_t>(n));
    for (auto& a : q) {
      const double re = normal(rng);
      const double im = normal(rng);
      a = {re, im};
    }
    if (zero_sum) {
      const cplx mean = std::accumulate(q.begin(), q.end(), cplx{}) / static_cast<double>(n);
      for (auto& a : q) a -= mean;
    }
    double norm2 = 0.0;
    for (const auto& a : q) norm2 += std::norm(a);
    if (norm2 < 1e-12) continue;
    const double s = 1.0 / std::sqrt(norm2);
    for (auto& a : q) a *= s;
    if (!zero_sum && std::abs(std::accumulate(q.begin(), q.end(), cplx{})) <= 1e-3) continue;
    return q;
  }
}

// ---------------------------------------------------------------------------
// Operators

SparseOp local_operator(const SpaceLabel& space, int position, const CMatrix& local) {
  if (position < 0 || position >= static_cast<int>(space.size())) throw SiteError("subsystem index out of range");
  const auto& sub = space[static_cast<std::size_t>(position)];
  if (local.rows() != sub.dim || local.cols() != sub.dim) throw DimensionError("local operator has wrong shape");
  Index before = 1;
  Index after = 1;
  for (int k = 0; k < position; ++k) before *= space[static_cast<std::size_t>(k)].dim;
  for (std::size_t k = static_cast<std::size_t>(position) + 1; k < space.size(); ++k) after *= space[k].dim;
  SparseOp loc = local.sparseView();
  SparseOp left = Eigen::kroneckerProduct(sparse_identity(before), loc).eval();
  SparseOp full = Eigen::kroneckerProduct(left, sparse_identity(after)).eval();
  full.makeCompressed();
  return full;
}

SparseOp embed_leading(const SparseOp& op, const SpaceLabel& space) {
  if (space.dimension() % op.rows() != 0) throw DimensionError("operator does not fit the leading subsystems");
  const Index trailing = space.dimension() / op.rows();
  SparseOp full = Eigen::kroneckerProduct(op, sparse_identity(trailing)).eval();
  full.makeCompressed();
  return full;
}

SparseOp site_raising(const SpaceLabel& space, int position) {
  CMatrix up = CMatrix::Zero(2, 2);
  up(1, 0) = 1.0;
  return local_operator(space, position, up);
}

SparseOp site_lowering(const SpaceLabel& space, int position) {
  CMatrix down = CMatrix::Zero(2, 2);
  down(0, 1) = 1.0;
  return local_operator(space, position, down);
}

CollectiveOperators collective_ops(int n) {
  require_atoms(n, 1);
  const Index dim = Index{1} << n;
  // One nonzero per basis column per site.
  std::vector<Eigen::Triplet<cplx>> plus;
  std::vector<Eigen::Triplet<cplx>> diag;
  plus.reserve(static_cast<std::size_t>(dim * n));
  for (Index col = 0; col < dim; ++col) {
    int up = 0;
    for (int site = 0; site < n; ++site) {
      const Index bit = Index{1} << (n - 1 - site);
      if (col & bit) {
        ++up;
      } else {
        plus.emplace_back(col | bit, col, 1.0);
      }
    }
    diag.emplace_back(col, col, static_cast<double>(2 * up - n));
  }
  CollectiveOperators ops;
  ops.n = n;
  ops.r_plus = from_triplets(dim, plus);
  ops.r_minus = SparseOp(ops.r_plus.adjoint());
  ops.r3 = from_triplets(dim, diag);
  ops.j1 = 0.5 * (ops.r_plus + ops.r_minus);
  ops.j2 = (0.5 * kI) * (ops.r_minus - ops.r_plus);
  ops.j3 = 0.5 * ops.r3;
  ops.j_squared = SparseOp(ops.j1 * ops.j1) + SparseOp(ops.j2 * ops.j2) + SparseOp(ops.j3 * ops.j3);
  ops.j_squared.prune(cplx(0.0), 1e-14);
  return ops;
}

SparseOp permutation_operator(int n, std::span<const int> perm) {
  require_atoms(n, 1);
  if (static_cast<int>(perm.size()) != n) throw PermutationError("permutation length differs from n");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) throw PermutationError("not a bijection on sites");
    seen[static_cast<std::size_t>(p)] = 1;
  }
  const Index dim = Index{1} << n;
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(dim));
  for (Index col = 0; col < dim; ++col) {
    Index row = 0;
    for (int site = 0; site < n; ++site) {
      if (col & (Index{1} << (n - 1 - site))) row |= Index{1} << (n - 1 - perm[static_cast<std::size_t>(site)]);
    }
    t.emplace_back(row, col, 1.0);
  }
  return from_triplets(dim, t);
}

SparseOp transposition_operator(int n, int i, int k) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (i < 0 || k < 0 || i >= n || k >= n) throw SiteError("transposition site out of range");
  std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(k)]);
  return permutation_operator(n, perm);
}

// ---------------------------------------------------------------------------
// Partial trace and metrics

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep_in) {
  const auto& space = rho.space();
  if (keep_in.empty()) throw SubsetError("keep set is empty");
  std::vector<int> keep(keep_in.begin(), keep_in.end());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw SubsetError("duplicate subsystem in keep set");
  const SpaceLabel kept = space.subspace(keep);

  std::vector<char> is_kept(space.size(), 0);
  for (int k : keep) is_kept[static_cast<std::size_t>(k)] = 1;
  std::vector<int> traced_pos;
  for (std::size_t k = 0; k < space.size(); ++k) {
    if (!is_kept[k]) traced_pos.push_back(static_cast<int>(k));
  }
  Index traced_dim = 1;
  for (int k : traced_pos) traced_dim *= space[static_cast<std::size_t>(k)].dim;

  // Full indices grouped by traced index, ordered by kept index.
  const Index kept_dim = kept.dimension();
  std::vector<Index> layout(static_cast<std::size_t>(traced_dim * kept_dim));
  for (Index full = 0; full < space.dimension(); ++full) {
    const auto d = space.digits(full);
    Index ki = 0;
    Index ti = 0;
    for (std::size_t k = 0; k < space.size(); ++k) {
      if (is_kept[k]) {
        ki = ki * space[k].dim + d[k];
      } else {
        ti = ti * space[k].dim + d[k];
      }
    }
    layout[static_cast<std::size_t>(ti * kept_dim + ki)] = full;
  }

  CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
  const CMatrix& m = rho.matrix();
  for (Index t = 0; t < traced_dim; ++t) {
    const Index* idx = layout.data() + t * kept_dim;
    for (Index c = 0; c < kept_dim; ++c) {
      for (Index r = 0; r < kept_dim; ++r) out(r, c) += m(idx[r], idx[c]);
    }
  }
  return DensityMatrix(kept, std::move(out));
}

double fidelity(const StateVector& a, const DensityMatrix& b) {
  if (!(a.space() == b.space())) throw DimensionError("fidelity: space mismatch");
  const cplx f = a.amplitudes().dot(b.matrix() * a.amplitudes());
  return std::clamp(f.real(), 0.0, 1.0);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.space() == b.space())) throw DimensionError("fidelity: space mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> ea(0.5 * (a.matrix() + a.matrix().adjoint()));
  const Eigen::VectorXd wa = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_a = ea.eigenvectors() * wa.cast<cplx>().asDiagonal() * ea.eigenvectors().adjoint();
  const CMatrix inner = sqrt_a * b.matrix() * sqrt_a;
  Eigen::SelfAdjointEigenSolver<CMatrix> ei(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace distance: shape mismatch");
  const CMatrix d = a - b;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (hermitian + hermitian.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace dfsim
