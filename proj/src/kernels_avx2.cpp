#ifdef BISPEC_HAVE_AVX2

#include <immintrin.h>

#include <cassert>

#include "bispec/kernels.hpp"

// Each __m256d holds two interleaved complex<double> values [re0 im0 re1 im1].
// Complex products use the movedup/permute + fmaddsub idiom; conjugated
// products flip to fmsubadd. Tails run the scalar loop.

namespace bispec::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_pd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [w0 w1] -> [w0 w0 w1 w1]
inline __m256d dup_pairs(const double* w) {
  __m256d t = _mm256_castpd128_pd256(_mm_loadu_pd(w));
  return _mm256_permute4x64_pd(t, 0x50);
}

inline const double* dptr(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

// a*b for two packed complex values
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d are = _mm256_movedup_pd(a);
  __m256d aim = _mm256_permute_pd(a, 0xF);
  __m256d bsw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

// conj(a)*b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  __m256d are = _mm256_movedup_pd(a);
  __m256d aim = _mm256_permute_pd(a, 0xF);
  __m256d bsw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(are, b, _mm256_mul_pd(aim, bsw));
}

}  // namespace

double abs2_sum(std::span<const cplx> x) {
  const std::size_t n = x.size();
  const double* xd = dptr(x.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double weighted_abs2(std::span<const double> w, std::span<const cplx> x) {
  assert(w.size() == x.size());
  const std::size_t n = x.size();
  const double* xd = dptr(x.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d wv = dup_pairs(w.data() + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), wv, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> x,
                  std::span<const cplx> y) {
  assert(w.size() == x.size() && x.size() == y.size());
  const std::size_t n = x.size();
  const double* xd = dptr(x.data());
  const double* yd = dptr(y.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d wv = dup_pairs(w.data() + i);
    acc = _mm256_fmadd_pd(cmul_conj(xv, yv), wv, acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_add_pd(lo, hi);
  double re = _mm_cvtsd_f64(lo);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  for (; i < n; ++i) {
    re += w[i] * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
    im += w[i] * (x[i].real() * y[i].imag() - x[i].imag() * y[i].real());
  }
  return {re, im};
}

void diag_scale(std::span<const double> a, std::span<const cplx> x,
                std::span<cplx> out) {
  assert(a.size() == x.size() && x.size() == out.size());
  const std::size_t n = x.size();
  const double* xd = dptr(x.data());
  double* od = dptr(out.data());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(od + 2 * i, _mm256_mul_pd(v, dup_pairs(a.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * x[i];
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const double* xd = dptr(x.data());
  double* yd = dptr(y.data());
  __m256d are = _mm256_set1_pd(alpha.real());
  __m256d aim = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xsw = _mm256_permute_pd(xv, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(are, xv, _mm256_mul_pd(aim, xsw));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void fma_cc(std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  assert(a.size() == x.size() && x.size() == y.size());
  const std::size_t n = x.size();
  const double* ad = dptr(a.data());
  const double* xd = dptr(x.data());
  double* yd = dptr(y.data());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d av = _mm256_loadu_pd(ad + 2 * i);
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul(av, xv)));
  }
  for (; i < n; ++i) y[i] += a[i] * x[i];
}

void central_diff(std::span<const cplx> u, double h, std::span<cplx> out) {
  const std::size_t n = u.size();
  assert(n >= 3 && out.size() == n);
  const double s = 1.0 / (2.0 * h);
  out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * s;
  const double* ud = dptr(u.data());
  double* od = dptr(out.data());
  __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 1;
  for (; i + 2 <= n - 1; i += 2) {
    __m256d up = _mm256_loadu_pd(ud + 2 * (i + 1));
    __m256d um = _mm256_loadu_pd(ud + 2 * (i - 1));
    _mm256_storeu_pd(od + 2 * i, _mm256_mul_pd(_mm256_sub_pd(up, um), sv));
  }
  for (; i + 1 < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * s;
  out[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * s;
}

}  // namespace bispec::kernels::avx2

#endif  // BISPEC_HAVE_AVX2
