#pragma once

// Banded matrix representations of the radially reduced Laplacian,
// bilaplacian and Hamiltonian per angular sector, the operator factorization
// check, and the weighted norms / quadratic forms used everywhere else.
//
// Discretization: conservative flux form of the sector Laplacian
//   (L u)_i = [e_{i+1/2} (u_{i+1}-u_i)/h - e_{i-1/2} (u_i-u_{i-1})/h] / w_i
//             - c_ell u_i / r_i^2,      e_{i+1/2} = ((i+1) h)^{d-1},
// on the offset grid. The inner edge weight vanishes at r = 0, so no origin
// boundary condition is needed; the outer Dirichlet ghost is u_n = -u_{n-1}.
// The matrix is stored conjugated by sqrt(w) ("tilde" coordinates), where it
// is exactly symmetric; the bilaplacian with the Navier closure is exactly
// the square of the Dirichlet Laplacian matrix.

#include <functional>
#include <memory>

#include "bispec/banded.hpp"
#include "bispec/core.hpp"

namespace bispec {

enum class OuterBC { dirichlet, navier };

struct BoundaryConditions {
  OuterBC outer = OuterBC::dirichlet;
  // Origin closure is always the offset-grid regularity closure (no node at
  // r = 0; the zero-measure inner edge removes the ghost).
};

// A radially reduced operator in one angular sector. The matrix acts on
// tilde coordinates u~ = sqrt(w) u; apply() maps physical nodal values.
struct BandedOperator {
  BandedMatrix m;  // tilde coordinates
  Dimension d;
  AngularSector sector;
  BoundaryConditions bc;
  GridPtr grid;

  std::vector<cplx> apply(std::span<const cplx> u) const;
  std::vector<cplx> to_tilde(std::span<const cplx> u) const;
  std::vector<cplx> from_tilde(std::span<const cplx> ut) const;
};

// Sector Laplacian with Dirichlet outer condition. Throws GridTooCoarse for
// n < 8.
BandedOperator build_radial_laplacian(Dimension d, AngularSector sector,
                                      GridPtr grid);

// Sector bilaplacian with the Navier outer closure: exactly L*L with L the
// Dirichlet Laplacian above.
BandedOperator build_bilaplacian(Dimension d, AngularSector sector,
                                 GridPtr grid);

// Bilaplacian plus diagonal V(r_i).
BandedOperator build_hamiltonian(Dimension d, AngularSector sector,
                                 GridPtr grid, const Potential& V);

// || (L - sqrt(z))(L + sqrt(z)) - (L^2 - z) ||_F / || L^2 - z ||_F
double verify_factorization(Dimension d, AngularSector sector, GridPtr grid,
                            cplx z);

// (sum_i w_i r_i^{2p} |u_i|^2)^{1/2}
double weighted_norm(std::span<const cplx> u, const RadialGrid& grid,
                     double p);

// (sum_i w_i r_i^{2p} (|D u|_i^2 + c_ell |u_i|^2 / r_i^2))^{1/2} with D the
// centered first difference (second-order one-sided at the ends).
double gradient_seminorm(std::span<const cplx> u, const RadialGrid& grid,
                         double p, const AngularSector& sector);

// weighted_norm(L u, 0) with L the sector Laplacian.
double delta_norm(std::span<const cplx> u, const RadialGrid& grid, Dimension d,
                  const AngularSector& sector);

// Centered first difference of nodal values (one-sided at the ends).
std::vector<cplx> central_difference(std::span<const cplx> u,
                                     const RadialGrid& grid);

// Quadratic forms in tilde coordinates for the pencil solvers (all real
// symmetric):
//   gradient_form: edge-difference form of int r^{2p} |grad psi|^2 with the
//                  outer Dirichlet edge term and the centrifugal diagonal;
//   diag_form:     diagonal form of int r^{2p} |psi|^2.
BandedMatrix gradient_form(const RadialGrid& grid, Dimension d,
                           const AngularSector& sector, double p);
BandedMatrix diag_form(const RadialGrid& grid, double p);

// Interior flux stencil applied to analytic samples (ghost nodes evaluated
// from the callable, no boundary closure). Used by the manufactured-solution
// protocols where u does not satisfy the grid's boundary conditions. The
// callable must accept any r (including r <= 0, where it should vanish).
std::vector<cplx> free_laplacian_of(const std::function<cplx(double)>& u,
                                    const RadialGrid& grid, Dimension d,
                                    const AngularSector& sector);
std::vector<cplx> free_bilaplacian_of(const std::function<cplx(double)>& u,
                                      const RadialGrid& grid, Dimension d,
                                      const AngularSector& sector);

}  // namespace bispec
