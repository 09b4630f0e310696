#include "bispec/discretize.hpp"

#include <cmath>

#include "bispec/kernels.hpp"

namespace bispec {

namespace {

void check_grid(const RadialGrid& g) {
  if (g.n() < 8) throw GridTooCoarse("discretize: need n >= 8 nodes");
}

// Tilde-coordinate sector Laplacian (exactly symmetric tridiagonal).
BandedMatrix laplacian_tilde(const RadialGrid& g, Dimension d,
                             const AngularSector& sec) {
  const int n = g.n();
  const double h = g.h();
  const int dm1 = d.value() - 1;
  auto r = g.r();
  auto w = g.w();
  auto sw = g.sqrt_w();
  BandedMatrix m = BandedMatrix::zeros(n, 1, 1);
  for (int i = 0; i < n; ++i) {
    const double am = i >= 1 ? std::pow(i * h, dm1) / (h * w[i]) : 0.0;
    const double ap = std::pow((i + 1) * h, dm1) / (h * w[i]);
    double diag = -(ap + am) - sec.c_ell / (r[i] * r[i]);
    if (i == n - 1) diag -= ap;  // Dirichlet ghost u_n = -u_{n-1}
    m.ref(i, i) = diag;
    if (i + 1 < n) {
      const double off = std::pow((i + 1) * h, dm1) / (h * sw[i] * sw[i + 1]);
      m.ref(i, i + 1) = off;
      m.ref(i + 1, i) = off;
    }
  }
  return m;
}

}  // namespace

std::vector<cplx> BandedOperator::to_tilde(std::span<const cplx> u) const {
  std::vector<cplx> ut(u.size());
  kernels::diag_scale(grid->sqrt_w(), u, ut);
  return ut;
}

std::vector<cplx> BandedOperator::from_tilde(std::span<const cplx> ut) const {
  std::vector<cplx> u(ut.size());
  kernels::diag_scale(grid->inv_sqrt_w(), ut, u);
  return u;
}

std::vector<cplx> BandedOperator::apply(std::span<const cplx> u) const {
  std::vector<cplx> ut = to_tilde(u);
  std::vector<cplx> yt(ut.size());
  m.matvec(ut, yt);
  return from_tilde(yt);
}

BandedOperator build_radial_laplacian(Dimension d, AngularSector sector,
                                      GridPtr grid) {
  check_grid(*grid);
  return {laplacian_tilde(*grid, d, sector), d, sector,
          {OuterBC::dirichlet}, grid};
}

BandedOperator build_bilaplacian(Dimension d, AngularSector sector,
                                 GridPtr grid) {
  check_grid(*grid);
  BandedMatrix l = laplacian_tilde(*grid, d, sector);
  return {l.multiply(l), d, sector, {OuterBC::navier}, grid};
}

BandedOperator build_hamiltonian(Dimension d, AngularSector sector,
                                 GridPtr grid, const Potential& V) {
  BandedOperator h = build_bilaplacian(d, sector, grid);
  const std::vector<cplx> v = V.sample(*grid);
  for (int i = 0; i < grid->n(); ++i) h.m.ref(i, i) += v[i];
  return h;
}

double verify_factorization(Dimension d, AngularSector sector, GridPtr grid,
                            cplx z) {
  check_grid(*grid);
  const cplx sz = principal_sqrt(z);
  BandedMatrix l = laplacian_tilde(*grid, d, sector);
  BandedMatrix lminus = l, lplus = l;
  lminus.add_scaled_identity(-sz);
  lplus.add_scaled_identity(sz);
  BandedMatrix lhs = lminus.multiply(lplus);
  BandedMatrix rhs = l.multiply(l);
  rhs.add_scaled_identity(-z);
  const double scale = rhs.frobenius();
  lhs.add_scaled(rhs, cplx(-1.0));
  return scale > 0.0 ? lhs.frobenius() / scale : lhs.frobenius();
}

double weighted_norm(std::span<const cplx> u, const RadialGrid& grid,
                     double p) {
  if (static_cast<int>(u.size()) != grid.n())
    throw InvalidArgument("weighted_norm: size mismatch");
  if (p == 0.0) return std::sqrt(kernels::weighted_abs2(grid.w(), u));
  std::vector<double> wp(grid.n());
  auto r = grid.r();
  auto w = grid.w();
  for (int i = 0; i < grid.n(); ++i) wp[i] = w[i] * std::pow(r[i], 2.0 * p);
  return std::sqrt(kernels::weighted_abs2(wp, u));
}

std::vector<cplx> central_difference(std::span<const cplx> u,
                                     const RadialGrid& grid) {
  if (static_cast<int>(u.size()) != grid.n())
    throw InvalidArgument("central_difference: size mismatch");
  std::vector<cplx> out(u.size());
  kernels::central_diff(u, grid.h(), out);
  return out;
}

double gradient_seminorm(std::span<const cplx> u, const RadialGrid& grid,
                         double p, const AngularSector& sector) {
  const std::vector<cplx> du = central_difference(u, grid);
  auto r = grid.r();
  auto w = grid.w();
  double acc = 0.0;
  for (int i = 0; i < grid.n(); ++i) {
    const double rp = std::pow(r[i], 2.0 * p);
    const double a2 = std::norm(du[i]);
    const double u2 = std::norm(u[i]);
    acc += w[i] * rp * (a2 + sector.c_ell * u2 / (r[i] * r[i]));
  }
  return std::sqrt(acc);
}

double delta_norm(std::span<const cplx> u, const RadialGrid& grid, Dimension d,
                  const AngularSector& sector) {
  BandedMatrix l = laplacian_tilde(grid, d, sector);
  std::vector<cplx> ut(u.size());
  kernels::diag_scale(grid.sqrt_w(), u, ut);
  std::vector<cplx> lt(u.size());
  l.matvec(ut, lt);
  return std::sqrt(kernels::abs2_sum(lt));
}

BandedMatrix gradient_form(const RadialGrid& grid, Dimension d,
                           const AngularSector& sector, double p) {
  const int n = grid.n();
  const double h = grid.h();
  const double ew = 2.0 * p + d.value() - 1;
  auto r = grid.r();
  auto w = grid.w();
  auto sw = grid.sqrt_w();
  BandedMatrix t = BandedMatrix::zeros(n, 1, 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double c = std::pow((i + 1) * h, ew) / h;
    t.ref(i, i) += c / w[i];
    t.ref(i + 1, i + 1) += c / w[i + 1];
    const double off = -c / (sw[i] * sw[i + 1]);
    t.ref(i, i + 1) += off;
    t.ref(i + 1, i) += off;
  }
  t.ref(n - 1, n - 1) += 2.0 * std::pow(grid.R(), ew) / (h * w[n - 1]);
  for (int i = 0; i < n; ++i)
    t.ref(i, i) += sector.c_ell * std::pow(r[i], 2.0 * p - 2.0);
  return t;
}

BandedMatrix diag_form(const RadialGrid& grid, double p) {
  const int n = grid.n();
  auto r = grid.r();
  BandedMatrix t = BandedMatrix::zeros(n, 0, 0);
  for (int i = 0; i < n; ++i) t.ref(i, i) = std::pow(r[i], 2.0 * p);
  return t;
}

namespace {

// (L u)(r_i) for node indices [ibegin, iend) from analytic samples.
std::vector<cplx> free_lap_range(const std::function<cplx(double)>& u,
                                 double h, Dimension d, double c_ell,
                                 int ibegin, int iend) {
  const int dm1 = d.value() - 1;
  std::vector<cplx> out(iend - ibegin);
  for (int i = ibegin; i < iend; ++i) {
    const double r = (i + 0.5) * h;
    const double wi = h * std::pow(r, dm1);
    const double am = i >= 1 ? std::pow(i * h, dm1) / (h * wi) : 0.0;
    const double ap = std::pow((i + 1) * h, dm1) / (h * wi);
    const cplx um = i >= 1 ? u((i - 0.5) * h) : cplx(0.0);
    const cplx uc = u(r);
    const cplx up = u((i + 1.5) * h);
    out[i - ibegin] = ap * (up - uc) - am * (uc - um) - c_ell / (r * r) * uc;
  }
  return out;
}

}  // namespace

std::vector<cplx> free_laplacian_of(const std::function<cplx(double)>& u,
                                    const RadialGrid& grid, Dimension d,
                                    const AngularSector& sector) {
  return free_lap_range(u, grid.h(), d, sector.c_ell, 0, grid.n());
}

std::vector<cplx> free_bilaplacian_of(const std::function<cplx(double)>& u,
                                      const RadialGrid& grid, Dimension d,
                                      const AngularSector& sector) {
  const int n = grid.n();
  const double h = grid.h();
  const int dm1 = d.value() - 1;
  // first pass on [0, n+1), second pass restricted to [0, n)
  const std::vector<cplx> lu = free_lap_range(u, h, d, sector.c_ell, 0, n + 1);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * h;
    const double wi = h * std::pow(r, dm1);
    const double am = i >= 1 ? std::pow(i * h, dm1) / (h * wi) : 0.0;
    const double ap = std::pow((i + 1) * h, dm1) / (h * wi);
    const cplx um = i >= 1 ? lu[i - 1] : cplx(0.0);
    out[i] = ap * (lu[i + 1] - lu[i]) - am * (lu[i] - um) -
             sector.c_ell / (r * r) * lu[i];
  }
  return out;
}

}  // namespace bispec
