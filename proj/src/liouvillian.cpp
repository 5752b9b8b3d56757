#include "dfsim/liouvillian.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "dfsim/errors.hpp"

namespace dfsim {

namespace {

int mode_position(const SpaceLabel& space) {
  for (std::size_t k = 0; k < space.size(); ++k) {
    if (space[k].kind == SubsystemKind::mode) return static_cast<int>(k);
  }
  throw DimensionError("space has no field mode");
}

int atom_position(const SpaceLabel& space, int site) {
  const auto atoms = space.atom_positions();
  if (site < 0 || site >= static_cast<int>(atoms.size())) {
    throw SiteError("atom site " + std::to_string(site) + " out of range");
  }
  return atoms[static_cast<std::size_t>(site)];
}

void require_rate(double rate, const char* name) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw ValidationError(std::string(name) + " must be a finite rate >= 0");
}

void push_if_nonzero(std::vector<DissipatorTerm>& terms, const SparseOp& left, const SparseOp& right, cplx c) {
  if (c != cplx(0.0)) terms.push_back(make_term(left, right, c));
}

// The four-term squeezed-bath structure shared by the collective and
// single-atom dissipators, with `lower` the annihilation-type operator.
std::vector<DissipatorTerm> squeezed_terms(const SparseOp& lower, const ThermostatParams& bath, double rate) {
  const SparseOp raise = lower.adjoint();
  std::vector<DissipatorTerm> terms;
  push_if_nonzero(terms, raise, lower, rate * (bath.occupation + 1.0));
  push_if_nonzero(terms, lower, raise, rate * bath.occupation);
  push_if_nonzero(terms, raise, raise, rate * bath.anomalous);
  push_if_nonzero(terms, lower, lower, rate * std::conj(bath.anomalous));
  return terms;
}

SparseOp collective_lowering(const SpaceLabel& space) {
  SparseOp lower(space.dimension(), space.dimension());
  for (int pos : space.atom_positions()) lower += site_lowering(space, pos);
  return lower;
}

}  // namespace

ThermostatParams ThermostatParams::saturated(double n, double phase) {
  return {n, std::polar(std::sqrt(n * (n + 1.0)), phase)};
}

void ThermostatParams::validate() const {
  if (!(occupation >= 0.0) || !std::isfinite(occupation)) throw PhysicalityError("bath occupation N must be >= 0");
  const double bound = std::sqrt(occupation * (occupation + 1.0));
  if (std::abs(anomalous) > bound + 1e-12) {
    throw PhysicalityError("|M| = " + std::to_string(std::abs(anomalous)) + " exceeds sqrt(N(N+1)) = " +
                           std::to_string(bound));
  }
}

ThermostatParams squeezing_from_r(double r, double phase) {
  if (!(r >= 0.0)) throw DomainError("squeezing parameter r must be >= 0");
  const double s = std::sinh(r);
  return {s * s, std::polar(std::cosh(r) * s, phase)};
}

void ModelParams::validate() const {
  if (n < 1 || n > kMaxCollectiveAtoms) throw SizeError("atom count out of range");
  require_rate(k_sq, "k_sq");
  require_rate(gamma_sq, "gamma_sq");
  require_rate(kappa, "kappa");
  if (!std::isfinite(g)) throw ValidationError("g must be finite");
  if (delta == 0.0 || !std::isfinite(delta)) throw SingularityError("detuning must be nonzero");
  if (cavity_cutoff < 1) throw SizeError("cavity cutoff must be >= 1");
}

DissipatorTerm make_term(SparseOp left, SparseOp right, cplx coefficient) {
  if (left.rows() != right.rows() || left.cols() != right.cols() || left.rows() != left.cols()) {
    throw DimensionError("dissipator operators must be square and of equal size");
  }
  SparseOp lr = (left * right).pruned();
  left.makeCompressed();
  right.makeCompressed();
  return {std::move(left), std::move(right), coefficient, std::move(lr)};
}

// ---------------------------------------------------------------------------
// Generator

Generator::Generator(SpaceLabel space, std::optional<SparseOp> hamiltonian, std::vector<DissipatorTerm> terms)
    : space_(std::move(space)), hamiltonian_(std::move(hamiltonian)), terms_(std::move(terms)) {
  const Index d = space_.dimension();
  if (hamiltonian_ && (hamiltonian_->rows() != d || hamiltonian_->cols() != d)) {
    throw DimensionError("Hamiltonian does not match generator space");
  }
  for (const auto& t : terms_) {
    if (t.left.rows() != d) throw DimensionError("dissipator term does not match generator space");
  }
}

void Generator::apply(const CMatrix& rho, CMatrix& out) const {
  const Index d = space_.dimension();
  if (rho.rows() != d || rho.cols() != d) throw DimensionError("generator applied to matrix of wrong size");
  out.setZero(d, d);
  if (hamiltonian_) {
    const CMatrix h_rho = *hamiltonian_ * rho;
    // rho H = (H rho)^dag only for Hermitian rho; compute it directly.
    const CMatrix rho_h = rho * *hamiltonian_;
    out.noalias() += -kI * (h_rho - rho_h);
  }
  CMatrix right_rho(d, d);
  for (const auto& t : terms_) {
    right_rho.noalias() = t.right * rho;
    CMatrix acc = t.left_right * rho;
    acc.noalias() += rho * t.left_right;
    acc.noalias() -= 2.0 * (right_rho * t.left);
    out.noalias() -= t.coefficient * acc;
  }
}

CMatrix Generator::apply(const CMatrix& rho) const {
  CMatrix out;
  apply(rho, out);
  return out;
}

CMatrix Generator::materialize() const {
  const Index d = space_.dimension();
  if (d > kMaxMaterializeDim) {
    throw SizeError("Liouvillian materialization limited to Hilbert dimension " + std::to_string(kMaxMaterializeDim));
  }
  CMatrix liou(d * d, d * d);
  CMatrix basis = CMatrix::Zero(d, d);
  CMatrix image;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      basis(i, j) = 1.0;
      apply(basis, image);
      liou.col(i + j * d) = Eigen::Map<const CVector>(image.data(), d * d);
      basis(i, j) = 0.0;
    }
  }
  return liou;
}

std::vector<Channel> Generator::canonical_channels(double tol) const {
  // d rho/dt = sum_ij h_ij (2 F_i rho F_j^dag - F_j^dag F_i rho - rho F_j^dag F_i)
  // with F_i = right and F_j^dag = left for every term.
  std::vector<CMatrix> ops;
  auto index_of = [&](const CMatrix& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if ((ops[k] - m).cwiseAbs().maxCoeff() <= 1e-13 * scale) return k;
    }
    ops.push_back(m);
    return ops.size() - 1;
  };
  std::vector<std::tuple<std::size_t, std::size_t, cplx>> entries;
  for (const auto& t : terms_) {
    const std::size_t i = index_of(CMatrix(t.right));
    const std::size_t j = index_of(CMatrix(t.left.adjoint()));
    entries.emplace_back(i, j, t.coefficient);
  }
  const auto k = static_cast<Index>(ops.size());
  CMatrix h = CMatrix::Zero(k, k);
  for (const auto& [i, j, c] : entries) h(static_cast<Index>(i), static_cast<Index>(j)) += c;
  std::vector<Channel> channels;
  if (k == 0) return channels;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw PhysicalityError("dissipator coefficient matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Index c = 0; c < k; ++c) {
    const double rate = es.eigenvalues()(c);
    if (rate < -tol * scale) throw PhysicalityError("dissipator is not completely positive");
    if (rate <= tol * scale) continue;
    CMatrix jump = CMatrix::Zero(space_.dimension(), space_.dimension());
    for (Index i = 0; i < k; ++i) jump += es.eigenvectors()(i, c) * ops[static_cast<std::size_t>(i)];
    channels.push_back({rate, std::move(jump)});
  }
  return channels;
}

Generator operator+(const Generator& a, const Generator& b) {
  if (!(a.space_ == b.space_)) throw DimensionError("cannot add generators on different spaces");
  std::optional<SparseOp> h = a.hamiltonian_;
  if (b.hamiltonian_) h = h ? SparseOp(*h + *b.hamiltonian_) : *b.hamiltonian_;
  std::vector<DissipatorTerm> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Generator(a.space_, std::move(h), std::move(terms));
}

// ---------------------------------------------------------------------------
// Model pieces

Generator dissipator_single_atom(const SpaceLabel& space, int site, const ThermostatParams& bath, double k_sq) {
  bath.validate();
  require_rate(k_sq, "k_sq");
  const SparseOp lower = site_lowering(space, atom_position(space, site));
  // Single-site restriction of the collective form at rate k/2.
  return Generator(space, std::nullopt, squeezed_terms(lower, bath, 0.5 * k_sq));
}

Generator dissipator_single_atom(int n, int site, const ThermostatParams& bath, double k_sq) {
  return dissipator_single_atom(SpaceLabel::atoms(n), site, bath, k_sq);
}

Generator dissipator_cavity(const SpaceLabel& space, const ThermostatParams& bath, double gamma_sq) {
  bath.validate();
  require_rate(gamma_sq, "gamma_sq");
  const int pos = mode_position(space);
  const int dim = space[static_cast<std::size_t>(pos)].dim;
  CMatrix c = CMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) c(k - 1, k) = std::sqrt(static_cast<double>(k));
  const SparseOp a = local_operator(space, pos, c);
  const SparseOp a_dag = a.adjoint();
  std::vector<DissipatorTerm> terms;
  push_if_nonzero(terms, a_dag, a, gamma_sq * (bath.occupation + 1.0));
  push_if_nonzero(terms, a, a_dag, gamma_sq * bath.occupation);
  push_if_nonzero(terms, a, a, gamma_sq * bath.anomalous);
  push_if_nonzero(terms, a_dag, a_dag, gamma_sq * std::conj(bath.anomalous));
  return Generator(space, std::nullopt, std::move(terms));
}

Generator dissipator_cavity(const ThermostatParams& bath, double gamma_sq, int cutoff) {
  return dissipator_cavity(SpaceLabel::mode(cutoff), bath, gamma_sq);
}

Generator dissipator_collective(const SpaceLabel& space, const ThermostatParams& bath, double kappa) {
  bath.validate();
  require_rate(kappa, "kappa");
  if (space.atom_count() < 1) throw SizeError("collective dissipator needs at least one atom");
  return Generator(space, std::nullopt, squeezed_terms(collective_lowering(space), bath, kappa));
}

Generator dissipator_collective(int n, const ThermostatParams& bath, double kappa) {
  return dissipator_collective(SpaceLabel::atoms(n), bath, kappa);
}

Generator vacuum_collective(int n, double kappa) {
  return dissipator_collective(n, ThermostatParams::vacuum(), kappa);
}

SparseOp effective_hamiltonian(int n, double g, double delta, int cutoff) {
  if (delta == 0.0) throw SingularityError("effective Hamiltonian is singular at zero detuning");
  const auto space = SpaceLabel::atoms_and_mode(n, cutoff);
  const auto ops = collective_ops(n);
  const SparseOp lower_raise = embed_leading(SparseOp(ops.r_minus * ops.r_plus), space);
  // c c^dag = c^dag c + 1, exact on every retained Fock level
  CMatrix cc_dag = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) cc_dag(k, k) = k + 1.0;
  SparseOp cc = cc_dag.sparseView();
  const SparseOp phase = Eigen::kroneckerProduct(ops.r3, cc).eval();
  SparseOp h = (g * g / delta) * (lower_raise + 2.0 * phase);
  h.prune(cplx(0.0), 0.0);
  return h;
}

Generator assemble_full(const ModelParams& model, const ThermostatParams& bath) {
  model.validate();
  bath.validate();
  const auto space = SpaceLabel::atoms_and_mode(model.n, model.cavity_cutoff);
  Generator gen(space, effective_hamiltonian(model.n, model.g, model.delta, model.cavity_cutoff));
  for (int j = 0; j < model.n; ++j) gen = gen + dissipator_single_atom(space, j, bath, model.k_sq);
  gen = gen + dissipator_cavity(space, bath, model.gamma_sq);
  gen = gen + dissipator_collective(space, bath, model.kappa);
  return gen;
}

bool dispersive_ok(const ModelParams& model, double mean_photons, double ratio_threshold) {
  return std::abs(model.delta) >= ratio_threshold * model.n * std::abs(model.g) * std::sqrt(mean_photons + 1.0);
}

}  // namespace dfsim
