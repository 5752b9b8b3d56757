#pragma once

#include <random>

#include "dfsim/hilbert.hpp"

namespace testing {

using dfsim::CMatrix;
using dfsim::CVector;
using dfsim::cplx;
using dfsim::Index;

inline CVector random_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v.normalized();
}

/// Random full-rank density matrix G G^dag / Tr.
inline dfsim::DensityMatrix random_density(const dfsim::SpaceLabel& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const Index d = space.dimension();
  CMatrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return {space, 0.5 * (rho + rho.adjoint())};
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CMatrix dense(const dfsim::SparseOp& op) { return CMatrix(op); }

}  // namespace testing
