#include "bispec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace bispec::kernels {

bool avx2_supported() {
#if defined(BISPEC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("BISPEC_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{initial_backend()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) b = Backend::scalar;
  g_backend.store(b, std::memory_order_relaxed);
}

#ifdef BISPEC_HAVE_AVX2
#define BISPEC_DISPATCH(fn, ...)                       \
  if (active_backend() == Backend::avx2) {             \
    return avx2::fn(__VA_ARGS__);                      \
  }                                                    \
  return scalar::fn(__VA_ARGS__)
#else
#define BISPEC_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double abs2_sum(std::span<const cplx> x) { BISPEC_DISPATCH(abs2_sum, x); }

double weighted_abs2(std::span<const double> w, std::span<const cplx> x) {
  BISPEC_DISPATCH(weighted_abs2, w, x);
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> x,
                  std::span<const cplx> y) {
  BISPEC_DISPATCH(weighted_dot, w, x, y);
}

void diag_scale(std::span<const double> a, std::span<const cplx> x,
                std::span<cplx> out) {
  BISPEC_DISPATCH(diag_scale, a, x, out);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  BISPEC_DISPATCH(axpy, alpha, x, y);
}

void fma_cc(std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  BISPEC_DISPATCH(fma_cc, a, x, y);
}

void central_diff(std::span<const cplx> u, double h, std::span<cplx> out) {
  BISPEC_DISPATCH(central_diff, u, h, out);
}

#undef BISPEC_DISPATCH

}  // namespace bispec::kernels
