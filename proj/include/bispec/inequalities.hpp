#pragma once

// Discrete Rayleigh estimates of the sharp inequality constants, the
// potential-admissibility coefficients (smallness, Rellich-smallness,
// repulsivity), and the closed-form thresholds and resolvent constants.

#include <vector>

#include "bispec/banded.hpp"
#include "bispec/core.hpp"

namespace bispec {

enum class ConstantKind { hardy, rellich, hardy_rellich, weighted_hardy };

struct ConstantEstimate {
  ConstantKind kind;
  double gamma = 0.0;  // weighted_hardy only
  double analytic = 0.0;
  double discrete = 0.0;
  int n = 0;
  double R = 0.0;
  int ell = 0;
};

struct PencilOptions {
  double value_tol = 1e-11;   // relative stagnation tolerance on the value
  double residual_tol = 1e-8; // eigenpair residual target
  int max_iters = 50000;
  unsigned seed = 12345;
};

// Extreme generalized eigenvalue of the pencil A x = lambda B x with A, B
// real symmetric banded, B (want_max: A) positive semidefinite and the other
// factor positive definite. Shifted inverse iteration with Rayleigh updates.
double pencil_extreme(const BandedMatrix& A, const BandedMatrix& B,
                      bool want_max, const PencilOptions& opts = {});

// Dense oracle (LAPACK dsygvd), n <= 400.
double pencil_extreme_dense(const BandedMatrix& A, const BandedMatrix& B,
                            bool want_max);

// Minimum Rayleigh quotient of the quadratic-form pair for the requested
// inequality over the discrete sector space.
ConstantEstimate estimate_constant(ConstantKind kind, Dimension d,
                                   GridPtr grid, const AngularSector& sector,
                                   double gamma = 0.0,
                                   const PencilOptions& opts = {});

// Smallest a valid in  int r^4 |V|^2 |psi|^2 <= a^2 int |grad psi|^2 / r^2
// over the discrete sector space (increases toward the optimum under
// refinement).
double smallness_coefficient(const Potential& V, Dimension d, GridPtr grid,
                             const AngularSector& sector,
                             const PencilOptions& opts = {});

// Smallest a_delta valid in  int r^4 |V|^2 |psi|^2 <= a_delta^2 int
// |Delta psi|^2.
double rellich_smallness_coefficient(const Potential& V, Dimension d,
                                     GridPtr grid,
                                     const AngularSector& sector,
                                     const PencilOptions& opts = {});

// Smallest a valid in  (1/4) int [x . grad V]_+ |psi|^2 <= a int
// |Delta psi|^2  (linear in a, not squared). Requires real V.
double repulsivity_coefficient(const Potential& V, Dimension d, GridPtr grid,
                               const AngularSector& sector,
                               const PencilOptions& opts = {});

// Max of a sector-wise coefficient over ell in `ells`.
double smallness_over_sectors(const Potential& V, Dimension d, GridPtr grid,
                              std::span<const int> ells,
                              const PencilOptions& opts = {});
double rellich_smallness_over_sectors(const Potential& V, Dimension d,
                                      GridPtr grid, std::span<const int> ells,
                                      const PencilOptions& opts = {});

// Left side of the admissibility condition
//   c1(d) a + c2(d) a^{3/2} < 1,
//   c1 = 4d^2(d-3) / ((d-2)(d-4) sqrt(C_H)),
//   c2 = 4 d sqrt(d) / ((d-4) sqrt((d-2)(d-4)) C_H^{3/4}).
double admissibility_lhs(double a, Dimension d);

// Unique positive root a* of admissibility_lhs(a, d) = 1 (bisection to
// 1e-12 absolute).
double admissible_threshold(Dimension d);

// sqrt(C_R) delta / (1 + delta), the supremum of admissible a_delta for the
// cone {|Im z| <= delta Re z}.
double cone_threshold(double delta, Dimension d);

struct SaConstants {
  double c;        // weighted resolvent bound  1/sqrt(C_R) * c_tilde
  double c_tilde;  // a priori bound  2(d-2) / ((1-a) d (d-4))
};

SaConstants sa_constants(Dimension d, double a);

// c_{a,d} = sqrt(C_HR) / (sqrt(C_R) sqrt(C_HR) - a), for a below the pole.
double nsa_constant(Dimension d, double a);

struct AdmissibilityReport {
  double a_measured = 0.0;
  double a_star = 0.0;
  bool admissible = false;
  int n = 0;
  double R = 0.0;
  std::string potential;
};

AdmissibilityReport admissibility_report(const Potential& V, Dimension d,
                                         GridPtr grid,
                                         const PencilOptions& opts = {});

}  // namespace bispec
