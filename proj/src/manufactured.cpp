#include "bispec/manufactured.hpp"

#include <cmath>

namespace bispec {

cplx GaussianPoly::value(double r) const {
  const double s = r * r;
  cplx acc(0.0);
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * s + p[k];
  return acc * std::exp(-q * s);
}

std::function<cplx(double)> GaussianPoly::fn() const {
  GaussianPoly copy = *this;
  return [copy](double r) { return copy.value(r); };
}

GaussianPoly GaussianPoly::laplacian(Dimension d) const {
  const std::size_t m = p.size();
  auto at = [&](const std::vector<cplx>& c, std::size_t k) {
    return k < c.size() ? c[k] : cplx(0.0);
  };
  std::vector<cplx> dp(m > 1 ? m - 1 : 1, cplx(0.0));   // P'
  for (std::size_t k = 1; k < m; ++k) dp[k - 1] = static_cast<double>(k) * p[k];
  std::vector<cplx> d2p(m > 2 ? m - 2 : 1, cplx(0.0));  // P''
  for (std::size_t k = 2; k < m; ++k)
    d2p[k - 2] = static_cast<double>(k * (k - 1)) * p[k];

  // Q = 2 d (P' - q P) + 4 s (P'' - 2 q P' + q^2 P)
  std::vector<cplx> out(m + 1, cplx(0.0));
  const double dd = d.dbl();
  for (std::size_t k = 0; k < m + 1; ++k) {
    out[k] += 2.0 * dd * (at(dp, k) - q * at(p, k));
    if (k >= 1)
      out[k] += 4.0 * (at(d2p, k - 1) - 2.0 * q * at(dp, k - 1) +
                       q * q * at(p, k - 1));
  }
  while (out.size() > 1 && std::abs(out.back()) == 0.0) out.pop_back();
  return {out, q};
}

std::function<cplx(double)> mollifier_bump(double center, double width,
                                           double phase) {
  return [center, width, phase](double r) -> cplx {
    const double s = (r - center) / width;
    if (std::abs(s) >= 1.0) return 0.0;
    const double amp = std::exp(1.0 - 1.0 / (1.0 - s * s));
    return phase == 0.0 ? cplx(amp)
                        : amp * std::polar(1.0, phase * r);
  };
}

std::function<cplx(double)> gaussian_bump(double center, double width,
                                          double phase) {
  return [center, width, phase](double r) -> cplx {
    const double s = (r - center) / width;
    if (std::abs(s) >= 7.5) return 0.0;
    const double amp = std::exp(-s * s);
    return phase == 0.0 ? cplx(amp) : amp * std::polar(1.0, phase * r);
  };
}

std::vector<cplx> sample_profile(const std::function<cplx(double)>& f,
                                 const RadialGrid& grid) {
  std::vector<cplx> out(grid.n());
  auto r = grid.r();
  for (int i = 0; i < grid.n(); ++i) out[i] = f(r[i]);
  return out;
}

}  // namespace bispec
