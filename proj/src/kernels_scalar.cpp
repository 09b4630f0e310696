#include "bispec/kernels.hpp"

#include <cassert>

namespace bispec::kernels::scalar {

double abs2_sum(std::span<const cplx> x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

double weighted_abs2(std::span<const double> w, std::span<const cplx> x) {
  assert(w.size() == x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return acc;
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> x,
                  std::span<const cplx> y) {
  assert(w.size() == x.size() && x.size() == y.size());
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    re += w[i] * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
    im += w[i] * (x[i].real() * y[i].imag() - x[i].imag() * y[i].real());
  }
  return {re, im};
}

void diag_scale(std::span<const double> a, std::span<const cplx> x,
                std::span<cplx> out) {
  assert(a.size() == x.size() && x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a[i] * x[i];
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void fma_cc(std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  assert(a.size() == x.size() && x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a[i] * x[i];
}

void central_diff(std::span<const cplx> u, double h, std::span<cplx> out) {
  const std::size_t n = u.size();
  assert(n >= 3 && out.size() == n);
  const double s = 1.0 / (2.0 * h);
  out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * s;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * s;
  out[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * s;
}

}  // namespace bispec::kernels::scalar
