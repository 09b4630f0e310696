#pragma once

// Manufactured radial profiles with exact derivatives: even polynomials
// times a Gaussian (closed under the radial Laplacian, so Delta u and
// Delta^2 u are available in closed form), and compactly supported mollifier
// bumps for the protocols that manufacture f through the discrete operator.

#include <functional>
#include <vector>

#include "bispec/core.hpp"

namespace bispec {

// u(r) = P(r^2) exp(-q r^2) with complex polynomial P.
struct GaussianPoly {
  std::vector<cplx> p;  // P(s) = sum p[k] s^k
  double q = 1.0;

  cplx value(double r) const;
  std::function<cplx(double)> fn() const;

  // Exact radial Laplacian in d dimensions (ell = 0 sector):
  // Delta u = [2 d (P' - q P) + 4 s (P'' - 2 q P' + q^2 P)] exp(-q s),
  // s = r^2.
  GaussianPoly laplacian(Dimension d) const;
};

// Smooth compactly supported bump exp(1 - 1/(1 - s^2)) on |s| < 1,
// s = (r - center)/width, with an optional complex phase factor
// exp(i phase r).
std::function<cplx(double)> mollifier_bump(double center, double width,
                                           double phase = 0.0);

// Gaussian bump exp(-((r - center)/width)^2) exp(i phase r), clipped to zero
// beyond 7.5 widths (below 1e-24 of the peak), so it passes compact-support
// checks while keeping the mild derivatives of an entire function.
std::function<cplx(double)> gaussian_bump(double center, double width,
                                          double phase = 0.0);

std::vector<cplx> sample_profile(const std::function<cplx(double)>& f,
                                 const RadialGrid& grid);

}  // namespace bispec
