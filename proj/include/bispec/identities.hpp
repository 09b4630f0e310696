#pragma once

// Quadrature verification of the multiplier identities satisfied by
// solutions of (Delta^2 + V - z) u = f + g:
//   S1:  int |Delta u|^2 - Re z int |u|^2 = Re int f conj(u)
//   S2:  -Im z int |u|^2 = Im int f conj(u)
//   A:   4 int |Delta u|^2 - int (x . grad V) |u|^2
//          = Re int f (2 x . grad + d) conj(u)
//          + Re int g (2 x . grad + d) conj(u)      (V real, z real,
//                                                    u compactly supported)
// The dilation multiplier 2 x . grad + d is discretized as 2 r D + d with
// the centered difference D.

#include <span>

#include "bispec/core.hpp"

namespace bispec {

enum class IdentityKind { S1, S2, A };

struct IdentityResidual {
  IdentityKind identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|, floor)
  int n = 0;
  double R = 0.0;
};

inline constexpr double kIdentityFloor = 1e-30;

IdentityResidual verify_S1(std::span<const cplx> u, std::span<const cplx> f,
                           cplx z, const RadialGrid& grid, Dimension d,
                           const AngularSector& sector);

IdentityResidual verify_S2(std::span<const cplx> u, std::span<const cplx> f,
                           cplx z, const RadialGrid& grid, Dimension d,
                           const AngularSector& sector);

// Throws InvalidArgument when u's support touches either end of the grid
// (the identity requires compact support inside (0, R)) or V is not real.
IdentityResidual verify_A(std::span<const cplx> u, const Potential& V,
                          std::span<const cplx> f, std::span<const cplx> g,
                          double z, const RadialGrid& grid, Dimension d,
                          const AngularSector& sector);

}  // namespace bispec
