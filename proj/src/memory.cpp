#include "dfsim/memory.hpp"

#include <cmath>
#include <numbers>

#include "dfsim/errors.hpp"

namespace dfsim {

namespace {

void require_memory_size(int n, int min_n = 2) {
  if (n < min_n || n > kMaxMemoryAtoms) {
    throw SizeError("memory needs " + std::to_string(min_n) + " <= n <= " + std::to_string(kMaxMemoryAtoms) +
                    " atoms");
  }
}

}  // namespace

double MemoryConfig::effective_write_time() const {
  return write_time ? *write_time : std::numbers::pi / (2.0 * coupling_f);
}

void MemoryConfig::validate() const {
  require_memory_size(n);
  if (!(coupling_f > 0.0)) throw ValidationError("coupling_f must be > 0");
  if (write_time && !(*write_time >= 0.0)) throw ValidationError("write_time must be >= 0");
  if (!(store_time >= 0.0)) throw ValidationError("store_time must be >= 0");
  if (!(store_kappa >= 0.0)) throw ValidationError("store_kappa must be >= 0");
  store_bath.validate();
  integrator.validate();
}

SparseOp swap_hamiltonian(int n, double f) {
  require_memory_size(n, 1);
  const auto space = SpaceLabel::atoms_and_modes(n);
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  SparseOp v(space.dimension(), space.dimension());
  for (int j = 0; j < n; ++j) {
    const SparseOp mode_a = local_operator(space, n + j, a);
    const SparseOp mode_a_dag = local_operator(space, n + j, a.adjoint());
    const SparseOp forward = site_raising(space, j) * mode_a;
    const SparseOp backward = mode_a_dag * site_lowering(space, j);
    v += (kI * f) * (forward - backward);
  }
  v.makeCompressed();
  return v;
}

StateVector swap_evolve(const StateVector& psi0, double t, int n, double f) {
  require_memory_size(n, 1);
  if (!(psi0.space() == SpaceLabel::atoms_and_modes(n))) throw DimensionError("state is not on the memory space");
  // On (|0_a 1_b>, |1_a 0_b>) the pair term is f sigma_y; |00> and |11> are untouched.
  const double c = std::cos(f * t);
  const double s = std::sin(f * t);
  CVector out = psi0.amplitudes();
  const Index dim = out.size();
  for (int j = 0; j < n; ++j) {
    const Index atom_bit = Index{1} << (2 * n - 1 - j);
    const Index mode_bit = Index{1} << (n - 1 - j);
    for (Index idx = 0; idx < dim; ++idx) {
      if ((idx & atom_bit) || !(idx & mode_bit)) continue;
      const Index partner = (idx | atom_bit) & ~mode_bit;
      const cplx light = out(idx);
      const cplx atom = out(partner);
      out(idx) = c * light - s * atom;
      out(partner) = s * light + c * atom;
    }
  }
  return {psi0.space(), out, psi0.is_normalized()};
}

StateVector light_state(std::span<const cplx> q) {
  const auto eta = make_eta(q);
  const int n = static_cast<int>(q.size());
  CVector v = CVector::Zero(Index{1} << (2 * n));
  for (int j = 0; j < n; ++j) v(Index{1} << (n - 1 - j)) = eta.amplitudes()(Index{1} << (n - 1 - j));
  return {SpaceLabel::atoms_and_modes(n), v};
}

StateVector stored_state(std::span<const cplx> q) {
  const auto eta = make_eta(q);
  const int n = static_cast<int>(q.size());
  CVector v = CVector::Zero(Index{1} << (2 * n));
  for (int j = 0; j < n; ++j) v(Index{1} << (2 * n - 1 - j)) = eta.amplitudes()(Index{1} << (n - 1 - j));
  return {SpaceLabel::atoms_and_modes(n), v};
}

MemoryReport memory_cycle(const MemoryConfig& config, std::span<const cplx> q) {
  config.validate();
  const int n = config.n;
  if (static_cast<int>(q.size()) != n) throw SizeError("amplitude count differs from n");
  const auto eta = make_eta(q);
  const CVector& eta_v = eta.amplitudes();

  MemoryReport rep;
  rep.write_time = config.effective_write_time();
  const auto written = swap_evolve(light_state(q), rep.write_time, n, config.coupling_f);

  // Atoms are the leading digits: phi(a * 2^n + b) = Phi(a, b).
  const Index half = Index{1} << n;
  const CMatrix phi = Eigen::Map<const CMatrix>(written.amplitudes().data(), half, half).transpose();
  const CMatrix rho_atoms = phi * phi.adjoint();
  rep.write_fidelity = eta_v.dot(rho_atoms * eta_v).real();

  const bool store = config.store_time > 0.0 && config.store_kappa > 0.0;
  const double modes_excited = phi.rightCols(half - 1).norm();
  if (modes_excited < 1e-14) {
    // Modes left in vacuum: storage acts on the atomic state alone.
    const CVector a0 = phi.col(0);
    DensityMatrix stored(SpaceLabel::atoms(n), rho_atoms);
    rep.integrity = stored.integrity();
    if (store) {
      const auto gen = dissipator_collective(n, config.store_bath, config.store_kappa);
      stored = evolve_to(gen, stored, config.store_time, config.integrator, &rep.integrity);
    }
    rep.post_store_fidelity = fidelity(eta, stored);
    rep.purity_after_store = purity(stored);
    rep.read_fidelity = a0.dot(stored.matrix() * a0).real();
  } else {
    const auto space = SpaceLabel::atoms_and_modes(n);
    DensityMatrix full = DensityMatrix::pure(written);
    rep.integrity = full.integrity();
    if (store) {
      const auto gen = dissipator_collective(space, config.store_bath, config.store_kappa);
      full = evolve_to(gen, full, config.store_time, config.integrator, &rep.integrity);
    }
    std::vector<int> atoms(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) atoms[static_cast<std::size_t>(j)] = j;
    const auto reduced = partial_trace(full, atoms);
    rep.post_store_fidelity = fidelity(eta, reduced);
    rep.purity_after_store = purity(reduced);
    // <psi0| U^dag rho U |psi0> = <phi| rho |phi>
    rep.read_fidelity = written.amplitudes().dot(full.matrix() * written.amplitudes()).real();
  }
  return rep;
}

}  // namespace dfsim
