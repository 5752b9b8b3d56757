#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dfsim/dfs.hpp"
#include "dfsim/errors.hpp"
#include "support.hpp"

using namespace dfsim;

TEST_CASE("dark states of the collective bath") {
  CHECK(is_dark(vacuum_collective(2, 1.0), make_singlet_embedding(2, 0, 1)));
  CHECK_FALSE(is_dark(vacuum_collective(3, 1.0), make_w(3)));
  CHECK(is_dark(vacuum_collective(3, 1.0), ground_state(3)));
  std::mt19937_64 rng(31);
  const auto q = random_eta_amplitudes(5, rng, true);
  CHECK(is_dark(vacuum_collective(5, 1.0), make_eta(q)));
  CHECK_FALSE(is_dark(vacuum_collective(5, 1.0), make_eta(random_eta_amplitudes(5, rng, false))));
}

TEST_CASE("dark subspace examples") {
  const auto two = dark_subspace(vacuum_collective(2, 1.0), 1);
  REQUIRE(two.basis.size() == 1);
  CHECK(fidelity(two.basis[0], DensityMatrix::pure(make_singlet_embedding(2, 0, 1))) == doctest::Approx(1.0));

  const auto zero = dark_subspace(vacuum_collective(3, 1.0), 0);
  REQUIRE(zero.basis.size() == 1);
  CHECK(std::abs(zero.basis[0].amplitudes()(0)) == doctest::Approx(1.0));

  // Without a sector the kernel of R- on two atoms is {|00>, Psi-}.
  CHECK(dark_subspace(vacuum_collective(2, 1.0)).basis.size() == 2);
  CHECK_THROWS_AS((void)dark_subspace(vacuum_collective(9, 1.0)), SizeError);
}

TEST_CASE("single-excitation dark subspace is the zero-sum hyperplane") {
  for (int n = 2; n <= 6; ++n) {
    const auto gen = vacuum_collective(n, 1.0);
    const auto dark = dark_subspace(gen, 1);
    CHECK(dark.basis.size() == static_cast<std::size_t>(n - 1));
    CHECK(dark.max_residual < 1e-10);
    CHECK(dark.superpositions_dark);
    for (std::size_t a = 0; a < dark.basis.size(); ++a) {
      const auto amps = single_excitation_amplitudes(dark.basis[a]);
      CHECK(zsa_check(amps));
      for (std::size_t b = 0; b < dark.basis.size(); ++b) {
        const cplx overlap = dark.basis[a].amplitudes().dot(dark.basis[b].amplitudes());
        CHECK(std::abs(overlap - (a == b ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("dark basis vectors stay fixed under evolution") {
  const auto gen = vacuum_collective(4, 1.0);
  for (const auto& v : dark_subspace(gen, 1).basis) {
    const auto rho0 = DensityMatrix::pure(v);
    const auto end = evolve_to(gen, rho0, 10.0);
    CHECK(testing::max_abs(end.matrix() - rho0.matrix()) < 1e-8);
  }
}

TEST_CASE("dark subspace in the squeezed bath") {
  const double occ = 0.5;
  const auto gen = dissipator_collective(2, ThermostatParams::saturated(occ), 1.0);
  const auto dark = dark_subspace(gen);
  // Psi- and the two-atom squeezed vacuum.
  CHECK(dark.basis.size() == 2);
  CHECK(dark.max_residual < 1e-10);
}

TEST_CASE("zero-sum check") {
  const std::vector<cplx> zsa{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  CHECK(zsa_check(zsa));
  const std::vector<cplx> w(3, 1.0 / std::sqrt(3.0));
  CHECK_FALSE(zsa_check(w));
  const std::vector<cplx> near{0.5, -0.5 + 1e-12};
  CHECK(zsa_check(near));
}

TEST_CASE("Dicke numbers") {
  const std::vector<cplx> zsa{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  const auto a = dicke_numbers(make_eta(zsa));
  CHECK(a.j == doctest::Approx(0.5));
  CHECK(a.m == doctest::Approx(-0.5));

  const auto w = dicke_numbers(make_w(4));
  CHECK(w.j == doctest::Approx(2.0));
  CHECK(w.m == doctest::Approx(-1.0));

  const auto g = dicke_numbers(ground_state(3));
  CHECK(g.j == doctest::Approx(1.5));
  CHECK(g.m == doctest::Approx(-1.5));

  std::mt19937_64 rng(32);
  const auto generic = make_eta(random_eta_amplitudes(3, rng, false));
  CHECK_THROWS_AS((void)dicke_numbers(generic), EigenstateError);
  const auto flagged = dicke_numbers(generic, true);
  CHECK_FALSE(flagged.eigenstate);
  CHECK(flagged.j_squared_variance > 1e-8);
}

TEST_CASE("Dicke numbers single out zero-sum amplitudes") {
  std::mt19937_64 rng(33);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const bool zero_sum = trial % 2 == 0;
      const auto q = random_eta_amplitudes(n, rng, zero_sum);
      const auto d = dicke_numbers(make_eta(q), true);
      const bool lower_j = d.eigenstate && std::abs(d.j - (0.5 * n - 1.0)) < 1e-6;
      CHECK(lower_j == zsa_check(q));
    }
  }
}

TEST_CASE("Dicke degeneracy") {
  CHECK(dicke_degeneracy(2, 1.0) == 1);
  CHECK(dicke_degeneracy(2, 0.0) == 1);
  CHECK(dicke_degeneracy(4, 1.0) == 3);
  CHECK(dicke_degeneracy(5, 0.5) == 5);
  for (int n = 1; n <= 10; ++n) {
    long long total = 0;
    for (double j = 0.5 * n; j >= 0.0; j -= 1.0) total += dicke_degeneracy(n, j) * static_cast<long long>(2.0 * j + 1.0);
    CHECK(total == (1LL << n));
  }
  CHECK_THROWS_AS((void)dicke_degeneracy(4, 0.5), DomainError);
  CHECK_THROWS_AS((void)dicke_degeneracy(4, 3.0), DomainError);
  CHECK_THROWS_AS((void)dicke_degeneracy(3, -0.5), DomainError);
}

TEST_CASE("permutation symmetry is an integral of motion") {
  std::mt19937_64 rng(34);
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  const auto rho0 = testing::random_density(SpaceLabel::atoms(3), rng);

  const auto collective = symmetry_conserved(dissipator_collective(3, ThermostatParams::saturated(0.3), 1.0), rho0, grid);
  CHECK(collective.max_drift <= 1e-8);
  CHECK(collective.table.size() == 3);
  CHECK(collective.drift_series.size() == grid.size());

  const auto zero = symmetry_conserved(Generator(SpaceLabel::atoms(3)), rho0, grid);
  CHECK(zero.max_drift == 0.0);

  const auto single = symmetry_conserved(
      vacuum_collective(3, 1.0) + dissipator_single_atom(3, 0, ThermostatParams::vacuum(), 0.5), rho0, grid);
  CHECK(single.max_drift > 1e-3);
  for (const auto& row : single.table) CHECK(row.i < row.k);
}
