#pragma once

// Domain types shared by the whole toolkit: space dimension, radial grids,
// angular sectors, potentials, spectral points, and the closed-form
// inequality constants. Everything here is immutable after construction and
// safe to share across threads; the free functions are pure.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bispec/errors.hpp"

namespace bispec {

using cplx = std::complex<double>;

// Space dimension d >= 5 (all estimates in this toolkit assume it).
class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d < 5) throw InvalidArgument("Dimension: requires d >= 5, got " +
                                     std::to_string(d));
  }
  int value() const { return d_; }
  double dbl() const { return static_cast<double>(d_); }
  friend bool operator==(Dimension a, Dimension b) { return a.d_ == b.d_; }

 private:
  int d_;
};

// Spherical-harmonic sector: ell >= 0 with spherical Laplacian eigenvalue
// c_ell = ell (ell + d - 2).
struct AngularSector {
  int ell;
  double c_ell;
  AngularSector(int ell_, Dimension d) : ell(ell_) {
    if (ell_ < 0) throw InvalidArgument("AngularSector: ell must be >= 0");
    c_ell = static_cast<double>(ell_) * (ell_ + d.value() - 2);
  }
};

// Offset uniform radial mesh on (0, R]: r_i = (i + 1/2) h, h = R/n, with
// midpoint quadrature weights w_i = h r_i^(d-1) carrying the radial measure.
// The angular surface factor |S^{d-1}| is omitted from all integrals; it
// cancels in every ratio the toolkit checks.
class RadialGrid {
 public:
  RadialGrid(int n, double R, Dimension d);

  int n() const { return n_; }
  double R() const { return R_; }
  double h() const { return h_; }
  Dimension dim() const { return d_; }
  std::span<const double> r() const { return r_; }
  std::span<const double> w() const { return w_; }
  std::span<const double> sqrt_w() const { return sqrt_w_; }
  std::span<const double> inv_sqrt_w() const { return inv_sqrt_w_; }

 private:
  int n_;
  double R_, h_;
  Dimension d_;
  std::vector<double> r_, w_, sqrt_w_, inv_sqrt_w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(int n, double R, Dimension d) {
  return std::make_shared<const RadialGrid>(n, R, d);
}

// Closed-form sharp constants as functions of d:
// Hardy (d-2)^2/4, Rellich d^2(d-4)^2/16, Hardy-Rellich d^2/4.
struct PaperConstants {
  double hardy;
  double rellich;
  double hardy_rellich;
};

PaperConstants paper_constants(Dimension d);

// (d - 2 + 2 gamma)^2 / 4
double weighted_hardy_constant(Dimension d, double gamma);

// Principal square root: Re w >= 0, branch cut on the negative real axis
// approached from above (z < 0 maps to +i sqrt(|z|)).
cplx principal_sqrt(cplx z);

enum class Region { SPos, SNeg };

struct RegionInfo {
  Region region;
  bool in_cone;  // |Im z| <= delta Re z
};

RegionInfo classify_region(cplx z, double delta);

// Sign used for sgn(Im sqrt(z)) when Im sqrt(z) = 0. The outgoing gauge on
// the positive real axis corresponds to +1, which is the default everywhere.
enum class SignZeroConvention : int { plus = +1, minus = -1 };

// k = (Re sqrt(z))^{1/2} sgn(Im sqrt(z))
double gauge_wavenumber(cplx z,
                        SignZeroConvention s = SignZeroConvention::plus);

struct SpectralPoint {
  cplx z;
  cplx sqrt_z;
  Region region;
  double gauge_k;
  explicit SpectralPoint(cplx z_,
                         SignZeroConvention s = SignZeroConvention::plus);
};

// result_i = exp(-i k r_i) u_i with k the gauge wavenumber of z.
std::vector<cplx> apply_gauge(std::span<const cplx> u, const RadialGrid& grid,
                              cplx z,
                              SignZeroConvention s = SignZeroConvention::plus);

// Radial potential V(r), as an analytic family or sampled values.
//   Rellich:  alpha / r^4
//   Bump:     height * exp(1 - 1/(1-s^2)), s = (r-center)/width, |s| < 1
//   Step:     height * [r <= radius]
//   Sampled:  nodal values on a grid, linear interpolation in between,
//             zero beyond the last node
class Potential {
 public:
  struct Zero {};
  struct Rellich {
    cplx alpha;
  };
  struct Bump {
    cplx height;
    double center, width;
  };
  struct Step {
    cplx height;
    double radius;
  };
  struct Sampled {
    std::vector<cplx> values;
    GridPtr grid;
  };

  static Potential zero() { return Potential(Zero{}); }
  static Potential rellich(cplx alpha) { return Potential(Rellich{alpha}); }
  static Potential bump(cplx height, double center, double width);
  static Potential step(cplx height, double radius);
  static Potential sampled(std::vector<cplx> values, GridPtr grid);

  cplx operator()(double r) const;

  // Nodal samples; throws SingularPotential if any value is non-finite and
  // InvalidArgument if a Sampled potential is paired with a different grid
  // size than its own.
  std::vector<cplx> sample(const RadialGrid& grid) const;

  bool is_zero() const { return std::holds_alternative<Zero>(v_); }
  bool is_real() const;

  // Radial derivative V'(r); analytic for Rellich/Bump/Step away from the
  // step jump. Sampled potentials and the step jump are handled by
  // sample_r_dV_pos below via centered differencing on the grid.
  bool has_analytic_derivative() const;
  cplx radial_derivative(double r) const;

  // r V'(r) at the nodes; requires a real potential. Analytic families use
  // the exact derivative, Step and Sampled use centered differences of nodal
  // values with one-sided stencils at the ends.
  std::vector<double> sample_r_dV(const RadialGrid& grid) const;
  // positive part [r V'(r)]_+
  std::vector<double> sample_r_dV_pos(const RadialGrid& grid) const;

  Potential scaled(cplx c) const;
  Potential conjugated() const;

  std::string describe() const;

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

 private:
  using Var = std::variant<Zero, Rellich, Bump, Step, Sampled>;
  explicit Potential(Var v) : v_(std::move(v)) {}
  Var v_;
};

}  // namespace bispec
