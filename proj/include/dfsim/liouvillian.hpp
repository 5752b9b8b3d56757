#pragma once

// Hamiltonian and dissipator superoperators of the dispersive-cavity model,
// applied matrix-free to density matrices.
//
// Units: hbar = 1, every Hamiltonian in angular frequency.

#include <optional>
#include <vector>

#include "dfsim/hilbert.hpp"

namespace dfsim {

/// Broadband squeezed bath: <b^dag b> = N, <b b> = M.
struct ThermostatParams {
  double occupation = 0.0;  // N
  cplx anomalous{};         // M

  static ThermostatParams vacuum() { return {}; }
  static ThermostatParams thermal(double n) { return {n, 0.0}; }
  /// Squeezed bath saturating |M| = sqrt(N(N+1)) with arg M = phase.
  static ThermostatParams saturated(double n, double phase = 0.0);

  /// Throws PhysicalityError unless N >= 0 and |M| <= sqrt(N(N+1)) (1e-12 slack).
  void validate() const;
};

/// N = sinh^2 r, M = e^{i phase} cosh r sinh r.
[[nodiscard]] ThermostatParams squeezing_from_r(double r, double phase = 0.0);

struct ModelParams {
  int n = 1;                // atoms
  double g = 0.0;           // atom-mode coupling
  double delta = 1.0;       // detuning
  double k_sq = 0.0;        // |K|^2, single-atom rate
  double gamma_sq = 0.0;    // |Gamma|^2, cavity rate
  double kappa = 0.0;       // |chi|^2, collective rate
  int cavity_cutoff = 4;    // max Fock occupancy

  void validate() const;
};

/// One bilinear dissipator term contributing
///   d rho/dt += -c (L R rho - 2 R rho L + rho L R)
/// Lindblad channels have L = R^dag; anomalous squeezing terms have L = R.
struct DissipatorTerm {
  SparseOp left;
  SparseOp right;
  cplx coefficient;
  SparseOp left_right;  // L*R, cached
};

[[nodiscard]] DissipatorTerm make_term(SparseOp left, SparseOp right, cplx coefficient);

/// A canonical (diagonalized) Lindblad channel rate * D[jump].
struct Channel {
  double rate;
  CMatrix jump;
};

/// Linear map rho -> -i[H, rho] + sum of dissipator terms.
class Generator {
 public:
  explicit Generator(SpaceLabel space, std::optional<SparseOp> hamiltonian = std::nullopt,
                     std::vector<DissipatorTerm> terms = {});

  [[nodiscard]] const SpaceLabel& space() const { return space_; }
  [[nodiscard]] const std::optional<SparseOp>& hamiltonian() const { return hamiltonian_; }
  [[nodiscard]] const std::vector<DissipatorTerm>& terms() const { return terms_; }
  [[nodiscard]] Index dimension() const { return space_.dimension(); }

  [[nodiscard]] CMatrix apply(const CMatrix& rho) const;
  void apply(const CMatrix& rho, CMatrix& out) const;

  /// Dense Liouvillian acting on column-stacked vec(rho). Hilbert dimension
  /// must not exceed kMaxMaterializeDim.
  [[nodiscard]] CMatrix materialize() const;

  /// Diagonalizes the coefficient matrix of the dissipator in the basis of
  /// distinct operators, returning rate/jump pairs with rate > tol. Negative
  /// rates (non-CP generators) raise PhysicalityError.
  [[nodiscard]] std::vector<Channel> canonical_channels(double tol = 1e-12) const;

  friend Generator operator+(const Generator& a, const Generator& b);

 private:
  SpaceLabel space_;
  std::optional<SparseOp> hamiltonian_;
  std::vector<DissipatorTerm> terms_;
};

inline constexpr Index kMaxMaterializeDim = 16;

/// Independent decay of atom `site` in the squeezed bath, acting on `space`:
///   (gd/2)(R+R- rho - 2R- rho R+ + rho R+R-) + (gu/2)(R-R+ rho - 2R+ rho R- + rho R-R+)
///   - M k R+ rho R+ - M* k R- rho R-,   gd = k(N+1), gu = kN,
/// entering d rho/dt with a minus sign. Transverse rate (gd+gu)/2 - Re(M k).
[[nodiscard]] Generator dissipator_single_atom(const SpaceLabel& space, int site, const ThermostatParams& bath,
                                               double k_sq);
[[nodiscard]] Generator dissipator_single_atom(int n, int site, const ThermostatParams& bath, double k_sq);

/// Cavity loss through the output mirror on the mode subsystem of `space`.
[[nodiscard]] Generator dissipator_cavity(const SpaceLabel& space, const ThermostatParams& bath, double gamma_sq);
[[nodiscard]] Generator dissipator_cavity(const ThermostatParams& bath, double gamma_sq, int cutoff);

/// Collective decay through the symmetric operators R+-, acting on every atom of `space`:
///   kappa[(N+1)(R+R- rho - 2R- rho R+ + rho R+R-) + N(R-R+ rho - 2R+ rho R- + rho R-R+)
///         + M(R+R+ rho - 2R+ rho R+ + rho R+R+) + M*(R-R- rho - 2R- rho R- + rho R-R-)]
[[nodiscard]] Generator dissipator_collective(const SpaceLabel& space, const ThermostatParams& bath, double kappa);
[[nodiscard]] Generator dissipator_collective(int n, const ThermostatParams& bath, double kappa);

/// d f/dt = -kappa (R+R- f - 2 R- f R+ + f R+R-).
[[nodiscard]] Generator vacuum_collective(int n, double kappa);

/// H_e = (g^2/delta)(R- R+ + 2 c c^dag R3) on atoms (x) Fock(cutoff).
[[nodiscard]] SparseOp effective_hamiltonian(int n, double g, double delta, int cutoff);

/// Commutator part plus single-atom, cavity and collective dissipators on atoms (x) mode.
[[nodiscard]] Generator assemble_full(const ModelParams& model, const ThermostatParams& bath);

/// |delta| >= ratio_threshold * n g sqrt(mean_photons + 1)
[[nodiscard]] bool dispersive_ok(const ModelParams& model, double mean_photons, double ratio_threshold = 10.0);

}  // namespace dfsim
