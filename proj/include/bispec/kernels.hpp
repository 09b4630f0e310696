#pragma once

// Hot inner-loop kernels: scalar reference implementations plus AVX2 variants
// selected at runtime. Every variant pair is equivalence-tested; the scalar
// path is the semantic reference.

#include <complex>
#include <span>

namespace bispec::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

// Selected once from CPU detection (and the BISPEC_KERNELS environment
// variable: "scalar" or "avx2"); force_backend overrides it afterwards.
Backend active_backend();
void force_backend(Backend b);
bool avx2_supported();

// sum_i |x_i|^2
double abs2_sum(std::span<const cplx> x);

// sum_i w_i |x_i|^2, w real
double weighted_abs2(std::span<const double> w, std::span<const cplx> x);

// sum_i w_i conj(x_i) y_i, w real
cplx weighted_dot(std::span<const double> w, std::span<const cplx> x,
                  std::span<const cplx> y);

// out_i = a_i x_i, a real diagonal
void diag_scale(std::span<const double> a, std::span<const cplx> x,
                std::span<cplx> out);

// y_i += alpha x_i
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

// y_i += a_i x_i (complex pointwise multiply-accumulate; banded matvec core)
void fma_cc(std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);

// Centered first difference with second-order one-sided ends:
// out_i = (u_{i+1} - u_{i-1}) / (2h) interior, one-sided at i = 0, n-1.
// Requires n >= 3.
void central_diff(std::span<const cplx> u, double h, std::span<cplx> out);

namespace scalar {
double abs2_sum(std::span<const cplx> x);
double weighted_abs2(std::span<const double> w, std::span<const cplx> x);
cplx weighted_dot(std::span<const double> w, std::span<const cplx> x,
                  std::span<const cplx> y);
void diag_scale(std::span<const double> a, std::span<const cplx> x,
                std::span<cplx> out);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void fma_cc(std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
void central_diff(std::span<const cplx> u, double h, std::span<cplx> out);
}  // namespace scalar

#ifdef BISPEC_HAVE_AVX2
namespace avx2 {
double abs2_sum(std::span<const cplx> x);
double weighted_abs2(std::span<const double> w, std::span<const cplx> x);
cplx weighted_dot(std::span<const double> w, std::span<const cplx> x,
                  std::span<const cplx> y);
void diag_scale(std::span<const double> a, std::span<const cplx> x,
                std::span<cplx> out);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void fma_cc(std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
void central_diff(std::span<const cplx> u, double h, std::span<cplx> out);
}  // namespace avx2
#endif

}  // namespace bispec::kernels
