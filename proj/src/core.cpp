#include "bispec/core.hpp"

#include <cmath>

#include "bispec/kernels.hpp"

namespace bispec {

RadialGrid::RadialGrid(int n, double R, Dimension d) : n_(n), R_(R), d_(d) {
  if (n < 1) throw InvalidArgument("RadialGrid: n must be positive");
  if (!(R > 0.0) || !std::isfinite(R))
    throw InvalidArgument("RadialGrid: R must be positive and finite");
  h_ = R / n;
  r_.resize(n);
  w_.resize(n);
  sqrt_w_.resize(n);
  inv_sqrt_w_.resize(n);
  for (int i = 0; i < n; ++i) {
    r_[i] = (i + 0.5) * h_;
    w_[i] = h_ * std::pow(r_[i], d.value() - 1);
    sqrt_w_[i] = std::sqrt(w_[i]);
    inv_sqrt_w_[i] = 1.0 / sqrt_w_[i];
  }
}

PaperConstants paper_constants(Dimension d) {
  const double dd = d.dbl();
  return {(dd - 2) * (dd - 2) / 4.0,
          dd * dd * (dd - 4) * (dd - 4) / 16.0,
          dd * dd / 4.0};
}

double weighted_hardy_constant(Dimension d, double gamma) {
  const double t = d.dbl() - 2.0 + 2.0 * gamma;
  return t * t / 4.0;
}

cplx principal_sqrt(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument("principal_sqrt: non-finite input");
  // Treat -0.0 imaginary parts as +0 so the negative real axis lands on the
  // Im > 0 side of the cut.
  if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
  return std::sqrt(z);
}

RegionInfo classify_region(cplx z, double delta) {
  if (!(delta > 0.0))
    throw InvalidArgument("classify_region: delta must be > 0");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument("classify_region: non-finite input");
  Region reg = z.real() >= 0.0 ? Region::SPos : Region::SNeg;
  bool cone = std::abs(z.imag()) <= delta * z.real();
  return {reg, cone};
}

double gauge_wavenumber(cplx z, SignZeroConvention s) {
  const cplx w = principal_sqrt(z);
  const double re = std::max(w.real(), 0.0);
  double sgn;
  if (w.imag() > 0.0)
    sgn = 1.0;
  else if (w.imag() < 0.0)
    sgn = -1.0;
  else
    sgn = static_cast<double>(static_cast<int>(s));
  return std::sqrt(re) * sgn;
}

SpectralPoint::SpectralPoint(cplx z_, SignZeroConvention s)
    : z(z_),
      sqrt_z(principal_sqrt(z_)),
      region(z_.real() >= 0.0 ? Region::SPos : Region::SNeg),
      gauge_k(gauge_wavenumber(z_, s)) {}

std::vector<cplx> apply_gauge(std::span<const cplx> u, const RadialGrid& grid,
                              cplx z, SignZeroConvention s) {
  if (static_cast<int>(u.size()) != grid.n())
    throw InvalidArgument("apply_gauge: length mismatch with grid");
  const double k = gauge_wavenumber(z, s);
  std::vector<cplx> out(u.size());
  auto r = grid.r();
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = std::polar(1.0, -k * r[i]) * u[i];
  return out;
}

Potential Potential::bump(cplx height, double center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("Potential::bump: width must be > 0");
  return Potential(Bump{height, center, width});
}

Potential Potential::step(cplx height, double radius) {
  if (!(radius > 0.0))
    throw InvalidArgument("Potential::step: radius must be > 0");
  return Potential(Step{height, radius});
}

Potential Potential::sampled(std::vector<cplx> values, GridPtr grid) {
  if (!grid) throw InvalidArgument("Potential::sampled: null grid");
  if (static_cast<int>(values.size()) != grid->n())
    throw InvalidArgument(
        "Potential::sampled: value count must match its grid");
  for (const cplx& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw SingularPotential("Potential::sampled: non-finite value");
  return Potential(Sampled{std::move(values), std::move(grid)});
}

cplx Potential::operator()(double r) const {
  if (const auto* z = std::get_if<Zero>(&v_)) {
    (void)z;
    return 0.0;
  }
  if (const auto* p = std::get_if<Rellich>(&v_)) {
    const double r2 = r * r;
    return p->alpha / (r2 * r2);
  }
  if (const auto* p = std::get_if<Bump>(&v_)) {
    const double s = (r - p->center) / p->width;
    if (std::abs(s) >= 1.0) return 0.0;
    return p->height * std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  if (const auto* p = std::get_if<Step>(&v_))
    return r <= p->radius ? p->height : 0.0;
  const auto& s = std::get<Sampled>(v_);
  const RadialGrid& g = *s.grid;
  if (r <= g.r().front()) return s.values.front();
  if (r >= g.r().back()) return r > g.R() ? cplx(0.0) : s.values.back();
  const double t = r / g.h() - 0.5;
  const int i = static_cast<int>(t);
  const double frac = t - i;
  return s.values[i] * (1.0 - frac) + s.values[i + 1] * frac;
}

std::vector<cplx> Potential::sample(const RadialGrid& grid) const {
  if (const auto* s = std::get_if<Sampled>(&v_)) {
    if (s->grid->n() == grid.n() && s->grid->R() == grid.R()) return s->values;
  }
  std::vector<cplx> out(grid.n());
  auto r = grid.r();
  for (int i = 0; i < grid.n(); ++i) {
    out[i] = (*this)(r[i]);
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
      throw SingularPotential("Potential: non-finite value at r = " +
                              std::to_string(r[i]));
  }
  return out;
}

bool Potential::is_real() const {
  if (std::holds_alternative<Zero>(v_)) return true;
  if (const auto* p = std::get_if<Rellich>(&v_)) return p->alpha.imag() == 0.0;
  if (const auto* p = std::get_if<Bump>(&v_)) return p->height.imag() == 0.0;
  if (const auto* p = std::get_if<Step>(&v_)) return p->height.imag() == 0.0;
  for (const cplx& v : std::get<Sampled>(v_).values)
    if (v.imag() != 0.0) return false;
  return true;
}

bool Potential::has_analytic_derivative() const {
  return std::holds_alternative<Zero>(v_) ||
         std::holds_alternative<Rellich>(v_) ||
         std::holds_alternative<Bump>(v_);
}

cplx Potential::radial_derivative(double r) const {
  if (std::holds_alternative<Zero>(v_)) return 0.0;
  if (const auto* p = std::get_if<Rellich>(&v_))
    return -4.0 * p->alpha / std::pow(r, 5);
  if (const auto* p = std::get_if<Bump>(&v_)) {
    const double s = (r - p->center) / p->width;
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return p->height * std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q)) /
           p->width;
  }
  throw InvalidArgument(
      "Potential::radial_derivative: no analytic derivative for this kind");
}

std::vector<double> Potential::sample_r_dV(const RadialGrid& grid) const {
  if (!is_real())
    throw InvalidArgument("sample_r_dV: potential must be real-valued");
  const int n = grid.n();
  auto r = grid.r();
  std::vector<double> out(n);
  if (has_analytic_derivative()) {
    for (int i = 0; i < n; ++i)
      out[i] = r[i] * radial_derivative(r[i]).real();
    return out;
  }
  // centered differences of nodal values, one-sided at the ends
  std::vector<cplx> v = sample(grid);
  std::vector<cplx> dv(n);
  kernels::central_diff(v, grid.h(), dv);
  for (int i = 0; i < n; ++i) out[i] = r[i] * dv[i].real();
  return out;
}

std::vector<double> Potential::sample_r_dV_pos(const RadialGrid& grid) const {
  std::vector<double> out = sample_r_dV(grid);
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  return out;
}

Potential Potential::scaled(cplx c) const {
  if (std::holds_alternative<Zero>(v_)) return *this;
  if (const auto* p = std::get_if<Rellich>(&v_)) return rellich(c * p->alpha);
  if (const auto* p = std::get_if<Bump>(&v_))
    return bump(c * p->height, p->center, p->width);
  if (const auto* p = std::get_if<Step>(&v_))
    return step(c * p->height, p->radius);
  const auto& s = std::get<Sampled>(v_);
  std::vector<cplx> vals(s.values);
  for (cplx& v : vals) v *= c;
  return sampled(std::move(vals), s.grid);
}

Potential Potential::conjugated() const {
  if (std::holds_alternative<Zero>(v_)) return *this;
  if (const auto* p = std::get_if<Rellich>(&v_))
    return rellich(std::conj(p->alpha));
  if (const auto* p = std::get_if<Bump>(&v_))
    return bump(std::conj(p->height), p->center, p->width);
  if (const auto* p = std::get_if<Step>(&v_))
    return step(std::conj(p->height), p->radius);
  const auto& s = std::get<Sampled>(v_);
  std::vector<cplx> vals(s.values);
  for (cplx& v : vals) v = std::conj(v);
  return sampled(std::move(vals), s.grid);
}

std::string Potential::describe() const {
  auto fmt = [](cplx c) {
    std::string s = std::to_string(c.real());
    if (c.imag() != 0.0) s += (c.imag() > 0 ? "+" : "") + std::to_string(c.imag()) + "i";
    return s;
  };
  if (std::holds_alternative<Zero>(v_)) return "zero";
  if (const auto* p = std::get_if<Rellich>(&v_))
    return "rellich(alpha=" + fmt(p->alpha) + ")";
  if (const auto* p = std::get_if<Bump>(&v_))
    return "bump(height=" + fmt(p->height) + ", center=" +
           std::to_string(p->center) + ", width=" + std::to_string(p->width) +
           ")";
  if (const auto* p = std::get_if<Step>(&v_))
    return "step(height=" + fmt(p->height) + ", radius=" +
           std::to_string(p->radius) + ")";
  return "sampled(n=" + std::to_string(std::get<Sampled>(v_).values.size()) +
         ")";
}

}  // namespace bispec
