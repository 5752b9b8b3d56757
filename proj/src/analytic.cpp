#include "dfsim/analytic.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "dfsim/errors.hpp"
#include "dfsim/liouvillian.hpp"

namespace dfsim {

namespace {

CVector symmetric_excitation(int n) {
  CVector v = CVector::Zero(Index{1} << n);
  for (int k = 0; k < n; ++k) v(Index{1} << (n - 1 - k)) = 1.0;
  return v;
}

cplx amplitude_sum(std::span<const cplx> q) {
  cplx s{};
  for (auto x : q) s += x;
  return s;
}

void require_occupation(double occupation) {
  if (!(occupation >= 0.0) || !std::isfinite(occupation)) throw DomainError("occupation N must be >= 0");
}

}  // namespace

double AbsdState::normalization() const {
  return 2.0 * (a * std::conj(q)).real() + b * n + s + d;
}

AbsdDerivative absd_rhs(const AbsdState& st) {
  const double nn = st.n;
  const double cross = 2.0 * (st.a * std::conj(st.q)).real();
  AbsdDerivative out;
  out.a = -st.kappa * (nn * st.a + st.d * st.q);
  out.b = -st.kappa * cross - 2.0 * st.kappa * nn * st.b;
  out.s = 2.0 * st.kappa * (nn * cross + nn * nn * st.b + std::norm(st.q) * st.d);
  out.d = 0.0;
  return out;
}

AbsdState absd_closed_form(cplx q_sum, int n, double kappa, double d, double t) {
  if (n < 2) throw SizeError("ABSD family needs n >= 2");
  const double e = std::exp(-n * kappa * t);
  const double q2 = std::norm(q_sum);
  AbsdState st;
  st.q = q_sum;
  st.n = n;
  st.kappa = kappa;
  st.d = d;
  st.a = -(q_sum * d / static_cast<double>(n)) * (1.0 - e);
  st.b = q2 * d / (n * static_cast<double>(n)) * (1.0 - e) * (1.0 - e);
  st.s = (1.0 - d) + q2 * d / n * (1.0 - e * e);
  return st;
}

DensityMatrix absd_density(const AbsdState& st, std::span<const cplx> q) {
  const auto eta = make_eta(q);
  const int n = static_cast<int>(q.size());
  if (n != st.n) throw DimensionError("amplitude count differs from ABSD n");
  const CVector sym = symmetric_excitation(n);
  const CVector& e = eta.amplitudes();
  CMatrix rho = st.a * sym * e.adjoint();
  rho += std::conj(st.a) * e * sym.adjoint();
  rho += st.b * sym * sym.adjoint();
  rho += st.d * e * e.adjoint();
  rho(0, 0) += st.s;
  return {SpaceLabel::atoms(n), rho};
}

DensityMatrix eta_decay_solution(double t, std::span<const cplx> q, double kappa) {
  const auto st = absd_closed_form(amplitude_sum(q), static_cast<int>(q.size()), kappa, 1.0, t);
  return absd_density(st, q);
}

DensityMatrix f_ss(double d, std::span<const cplx> q) {
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError("D must lie in [0, 1]");
  const auto st = absd_closed_form(amplitude_sum(q), static_cast<int>(q.size()), 1.0, d,
                                   std::numeric_limits<double>::infinity());
  return absd_density(st, q);
}

StateVector two_atom_squeezed_steady(double occupation, double phase) {
  require_occupation(occupation);
  CVector v = CVector::Zero(4);
  const double norm = std::sqrt(2.0 * occupation + 1.0);
  v(0) = std::sqrt(occupation + 1.0) / norm;
  v(3) = -std::polar(std::sqrt(occupation), phase) / norm;
  return {SpaceLabel::atoms(2), v};
}

StateVector eta4_squeezed_final(std::span<const cplx> q, double occupation, double phase) {
  if (q.size() != 4) throw SizeError("eta4_squeezed_final needs four amplitudes");
  require_occupation(occupation);
  (void)make_eta(q);  // normalization check
  const CVector s = two_atom_squeezed_steady(occupation, phase).amplitudes();
  constexpr int n = 4;
  CVector out = CVector::Zero(Index{1} << n);
  auto bit = [](int site) { return Index{1} << (n - 1 - site); };
  for (int k = 1; k < n; ++k) {
    int rest[2];
    int r = 0;
    for (int j = 1; j < n; ++j) {
      if (j != k) rest[r++] = j;
    }
    // s over the spectator pair: |00>, |11> components only.
    const std::pair<Index, cplx> pair_terms[2] = {{0, s(0)}, {bit(rest[0]) | bit(rest[1]), s(3)}};
    for (const auto& [pair_bits, amp] : pair_terms) {
      // sqrt(2) q_k (|0_1 1_k> - |1_1 0_k>)/sqrt(2)
      out(bit(k) | pair_bits) += q[k] * amp;
      out(bit(0) | pair_bits) -= q[k] * amp;
    }
  }
  const double norm = out.norm();
  if (norm < 1e-12) throw NormalizationError("eta4 final state vanishes for these amplitudes");
  return {SpaceLabel::atoms(n), out / norm};
}

OccupationReport single_atom_squeezed_occupation(double occupation) {
  require_occupation(occupation);
  OccupationReport rep;
  rep.detailed_balance = (occupation + 1.0) / (2.0 * occupation + 1.0);
  rep.printed = occupation / (2.0 * occupation + 1.0);

  const auto gen = dissipator_collective(1, ThermostatParams::saturated(occupation), 1.0);
  const CMatrix liou = gen.materialize();
  Eigen::JacobiSVD<CMatrix> svd(liou, Eigen::ComputeFullV);
  const CVector null = svd.matrixV().col(liou.cols() - 1);
  const cplx tr = null(0) + null(3);
  if (std::abs(tr) < 1e-12) throw ConvergenceError("single-atom steady state has zero trace");
  rep.numeric = (null(0) / tr).real();
  return rep;
}

}  // namespace dfsim
