#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfsim/errors.hpp"
#include "dfsim/hilbert.hpp"
#include "support.hpp"

using namespace dfsim;
using testing::dense;
using testing::max_abs;

TEST_CASE("space dimensions and digit round trip") {
  const auto s = SpaceLabel::atoms_and_mode(3, 4);
  CHECK(s.dimension() == 40);
  CHECK(s.atom_count() == 3);
  for (Index i = 0; i < s.dimension(); ++i) {
    const auto d = s.digits(i);
    CHECK(s.index_of(d) == i);
  }
  const int occ[] = {1, 0, 1, 3};
  CHECK(s.excitation_number(s.index_of(occ)) == 5);
  CHECK_THROWS_AS(SpaceLabel(std::vector<Subsystem>{}), DimensionError);
}

TEST_CASE("basis_state ordering puts site 0 in the most significant digit") {
  const int one[] = {0};
  const auto a = basis_state(SpaceLabel::atoms(1), one);
  CHECK(a.amplitudes()(0) == cplx(1.0));
  CHECK(a.amplitudes()(1) == cplx(0.0));
  const int occ[] = {1, 0};
  const auto b = basis_state(SpaceLabel::atoms(2), occ);
  CHECK(b.amplitudes()(2) == cplx(1.0));
  CHECK(ground_state(3).amplitudes()(0) == cplx(1.0));
  const int bad[] = {2, 0};
  CHECK_THROWS_AS((void)basis_state(SpaceLabel::atoms(2), bad), DimensionError);
}

TEST_CASE("eta and W constructors") {
  const double r = 1.0 / std::sqrt(3.0);
  const cplx uniform[] = {r, r, r};
  CHECK((make_eta(uniform).amplitudes() - make_w(3).amplitudes()).norm() < 1e-15);

  const double h = 1.0 / std::sqrt(2.0);
  const cplx plus[] = {h, h};
  const auto psi_plus = make_eta(plus);
  CHECK(std::abs(psi_plus.amplitudes()(1) - h) < 1e-15);
  CHECK(std::abs(psi_plus.amplitudes()(2) - h) < 1e-15);

  const cplx unnormalized[] = {1.0, 1.0};
  CHECK_THROWS_AS((void)make_eta(unnormalized), NormalizationError);
  const cplx single[] = {1.0};
  CHECK_THROWS_AS((void)make_eta(single), SizeError);
  CHECK_THROWS_AS((void)make_w(0), SizeError);
  CHECK(make_w(1).amplitudes()(1) == cplx(1.0));

  const auto ops = collective_ops(4);
  const CVector w4 = make_w(4).amplitudes();
  CHECK(std::abs(w4.dot(ops.j_squared * w4) - cplx(6.0)) < 1e-12);
}

TEST_CASE("singlet embedding") {
  const auto s = make_singlet_embedding(2, 0, 1);
  CHECK(std::abs(s.amplitudes()(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.amplitudes()(2) + 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS((void)make_singlet_embedding(3, 1, 1), SiteError);

  // Lowering restricted to sites 0 and 1 annihilates the embedded singlet.
  const auto space = SpaceLabel::atoms(3);
  const SparseOp lower = site_lowering(space, 0) + site_lowering(space, 1);
  CHECK((lower * make_singlet_embedding(3, 0, 1).amplitudes()).norm() < 1e-15);
}

TEST_CASE("zero-sum eta expands into singlets with site 0") {
  std::mt19937_64 rng(11);
  for (int n = 3; n <= 6; ++n) {
    const auto q = random_eta_amplitudes(n, rng, true);
    CVector sum = CVector::Zero(Index{1} << n);
    for (int k = 1; k < n; ++k) sum += std::sqrt(2.0) * q[static_cast<std::size_t>(k)] * make_singlet_embedding(n, 0, k).amplitudes();
    CHECK((sum - make_eta(q).amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("collective operators") {
  SUBCASE("single atom") {
    const auto ops = collective_ops(1);
    CMatrix up = CMatrix::Zero(2, 2);
    up(1, 0) = 1.0;
    CHECK(max_abs(dense(ops.r_plus) - up) == 0.0);
  }
  SUBCASE("singlet is annihilated") {
    const auto ops = collective_ops(2);
    const CVector s = make_singlet_embedding(2, 0, 1).amplitudes();
    CHECK((ops.r_minus * s).norm() < 1e-15);
    CHECK((ops.r_plus * s).norm() < 1e-15);
    CHECK((ops.r3 * s).norm() < 1e-15);
  }
  SUBCASE("spectrum of R3 and adjointness") {
    for (int n = 1; n <= 5; ++n) {
      const auto ops = collective_ops(n);
      CHECK(max_abs(dense(ops.r_minus) - dense(ops.r_plus).adjoint()) == 0.0);
      for (Index i = 0; i < ops.r3.rows(); ++i) {
        const double v = ops.r3.coeff(i, i).real();
        CHECK(std::abs(std::fmod(v + n, 2.0)) < 1e-15);
        CHECK(std::abs(v) <= n);
      }
    }
  }
  SUBCASE("angular momentum algebra") {
    for (int n = 1; n <= 6; ++n) {
      const auto ops = collective_ops(n);
      const CMatrix j1 = dense(ops.j1), j2 = dense(ops.j2), j3 = dense(ops.j3);
      CHECK(max_abs(j1 * j2 - j2 * j1 - kI * j3) < 1e-12);
      CHECK(max_abs(j2 * j3 - j3 * j2 - kI * j1) < 1e-12);
      CHECK(max_abs(j3 * j1 - j1 * j3 - kI * j2) < 1e-12);
    }
  }
  SUBCASE("zero-sum eta sits in j = n/2 - 1") {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 6; ++n) {
      const auto ops = collective_ops(n);
      for (int trial = 0; trial < 5; ++trial) {
        const CVector zsa = make_eta(random_eta_amplitudes(n, rng, true)).amplitudes();
        const double j = 0.5 * n - 1.0;
        CHECK((ops.j_squared * zsa - j * (j + 1.0) * zsa).norm() < 1e-12);
        CHECK((ops.j3 * zsa + j * zsa).norm() < 1e-12);
        const CVector generic = make_eta(random_eta_amplitudes(n, rng, false)).amplitudes();
        CHECK(std::abs(generic.dot(ops.j_squared * generic).real() - j * (j + 1.0)) > 1e-6);
      }
      const CVector w = make_w(n).amplitudes();
      CHECK(std::abs(w.dot(ops.j_squared * w).real() - 0.25 * n * (n + 2)) < 1e-12);
    }
  }
  CHECK_THROWS_AS((void)collective_ops(0), SizeError);
  CHECK_THROWS_AS((void)collective_ops(kMaxCollectiveAtoms + 1), SizeError);
  CHECK_NOTHROW((void)collective_ops(10));
}

TEST_CASE("permutation operators") {
  const int id[] = {0, 1, 2};
  CHECK(max_abs(dense(permutation_operator(3, id)) - CMatrix::Identity(8, 8)) == 0.0);

  const CVector s = make_singlet_embedding(2, 0, 1).amplitudes();
  CHECK((transposition_operator(2, 0, 1) * s + s).norm() < 1e-15);

  // Site 0 of the input lands on site 2.
  const int cycle[] = {2, 0, 1};
  const int occ[] = {1, 0, 0};
  const int moved[] = {0, 0, 1};
  const auto in = basis_state(SpaceLabel::atoms(3), occ);
  const auto out = basis_state(SpaceLabel::atoms(3), moved);
  CHECK((permutation_operator(3, cycle) * in.amplitudes() - out.amplitudes()).norm() == 0.0);

  const int bad[] = {0, 0, 1};
  CHECK_THROWS_AS((void)permutation_operator(3, bad), PermutationError);

  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    const auto ops = collective_ops(n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 3; ++trial) {
      std::shuffle(perm.begin(), perm.end(), rng);
      const CMatrix p = dense(permutation_operator(n, perm));
      CHECK(max_abs(p * p.adjoint() - CMatrix::Identity(p.rows(), p.cols())) < 1e-15);
      CHECK(max_abs(p * dense(ops.r_plus) * p.adjoint() - dense(ops.r_plus)) < 1e-12);
      CHECK(max_abs(p * dense(ops.r_minus) * p.adjoint() - dense(ops.r_minus)) < 1e-12);
      CHECK(max_abs(p * dense(ops.r3) * p.adjoint() - dense(ops.r3)) < 1e-12);
    }
  }
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(9);
  const auto a = testing::random_density(SpaceLabel::atoms(2), rng);
  const auto b = testing::random_density(SpaceLabel::mode(2), rng);
  const auto ab = a.tensor(b);
  const int keep_a[] = {0, 1};
  const int keep_b[] = {2};
  CHECK(max_abs(partial_trace(ab, keep_a).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(ab, keep_b).matrix() - b.matrix()) < 1e-14);

  const auto singlet = DensityMatrix::pure(make_singlet_embedding(2, 0, 1));
  const int first[] = {0};
  CHECK(max_abs(partial_trace(singlet, first).matrix() - 0.5 * CMatrix::Identity(2, 2)) < 1e-15);

  const auto big = testing::random_density(SpaceLabel::atoms_and_mode(2, 3), rng);
  const int mixed_keep[] = {2, 0};
  const auto red = partial_trace(big, mixed_keep);
  CHECK(red.space().dimension() == 8);
  CHECK(std::abs(red.matrix().trace() - cplx(1.0)) < 1e-12);
  CHECK(max_abs(red.matrix() - red.matrix().adjoint()) < 1e-12);

  CHECK_THROWS_AS((void)partial_trace(ab, std::span<const int>{}), SubsetError);
}

TEST_CASE("fidelity, purity, trace distance") {
  std::mt19937_64 rng(1);
  const StateVector psi(SpaceLabel::atoms(3), testing::random_vector(8, rng));
  CHECK(std::abs(fidelity(psi, DensityMatrix::pure(psi)) - 1.0) < 1e-12);
  CHECK(std::abs(fidelity(DensityMatrix::pure(psi), DensityMatrix::pure(psi)) - 1.0) < 1e-8);

  const DensityMatrix mixed(SpaceLabel::atoms(1), 0.5 * CMatrix::Identity(2, 2));
  CHECK(std::abs(purity(mixed) - 0.5) < 1e-15);

  // Uhlmann fidelity agrees with the pure formula when one state is pure.
  const auto rho = testing::random_density(SpaceLabel::atoms(3), rng);
  CHECK(std::abs(fidelity(DensityMatrix::pure(psi), rho) - fidelity(psi, rho)) < 1e-8);

  const int zero[] = {0};
  const int one[] = {1};
  const auto p0 = DensityMatrix::pure(basis_state(SpaceLabel::atoms(1), zero));
  const auto p1 = DensityMatrix::pure(basis_state(SpaceLabel::atoms(1), one));
  CHECK(std::abs(trace_distance(p0.matrix(), p1.matrix()) - 1.0) < 1e-14);
  CHECK_THROWS_AS((void)fidelity(psi, mixed), DimensionError);
}

TEST_CASE("density matrix validation") {
  CMatrix m = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(SpaceLabel::atoms(1), m).validate(), IntegrityError);
  m *= 0.5;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(SpaceLabel::atoms(1), m).validate(), IntegrityError);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(DensityMatrix(SpaceLabel::atoms(1), neg).validate(), IntegrityError);
  CHECK_THROWS_AS(DensityMatrix(SpaceLabel::atoms(2), CMatrix::Identity(2, 2)), DimensionError);
}

TEST_CASE("random eta amplitudes are seeded and respect the zero-sum switch") {
  std::mt19937_64 a(42), b(42);
  const auto qa = random_eta_amplitudes(5, a, true);
  const auto qb = random_eta_amplitudes(5, b, true);
  CHECK(qa == qb);
  CHECK(std::abs(std::accumulate(qa.begin(), qa.end(), cplx{})) < 1e-14);
  const auto qn = random_eta_amplitudes(5, a, false);
  CHECK(std::abs(std::accumulate(qn.begin(), qn.end(), cplx{})) > 1e-3);
  double norm2 = 0.0;
  for (auto z : qn) norm2 += std::norm(z);
  CHECK(std::abs(norm2 - 1.0) < 1e-14);
}

TEST_CASE("local operators and embedding") {
  const auto space = SpaceLabel::atoms_and_mode(2, 2);
  CMatrix n_op = CMatrix::Zero(3, 3);
  n_op(1, 1) = 1.0;
  n_op(2, 2) = 2.0;
  const SparseOp number = local_operator(space, 2, n_op);
  const int occ[] = {1, 0, 2};
  const auto psi = basis_state(space, occ);
  CHECK(((number * psi.amplitudes()) - 2.0 * psi.amplitudes()).norm() == 0.0);
  CHECK_THROWS_AS((void)local_operator(space, 0, n_op), DimensionError);
  CHECK_THROWS_AS((void)local_operator(space, 3, n_op), SiteError);

  const auto ops = collective_ops(2);
  const SparseOp embedded = embed_leading(ops.r_plus, space);
  CHECK(embedded.rows() == space.dimension());
  CHECK(max_abs(dense(embedded) - dense(site_raising(space, 0) + site_raising(space, 1))) == 0.0);
}
