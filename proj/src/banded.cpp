#include "bispec/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bispec/errors.hpp"
#include "bispec/kernels.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace bispec {

BandedMatrix BandedMatrix::zeros(int n, int kl, int ku) {
  if (n < 1 || kl < 0 || ku < 0 || kl >= n || ku >= n)
    throw InvalidArgument("BandedMatrix: bad shape");
  BandedMatrix m;
  m.n = n;
  m.kl = kl;
  m.ku = ku;
  m.diags.resize(kl + ku + 1);
  for (int o = -kl; o <= ku; ++o)
    m.diags[o + kl].assign(n - std::abs(o), cplx(0.0));
  return m;
}

cplx BandedMatrix::at(int i, int j) const {
  const int o = j - i;
  if (o < -kl || o > ku) return 0.0;
  return diags[o + kl][std::min(i, j)];
}

cplx& BandedMatrix::ref(int i, int j) {
  const int o = j - i;
  if (o < -kl || o > ku) throw InvalidArgument("BandedMatrix: outside band");
  return diags[o + kl][std::min(i, j)];
}

void BandedMatrix::matvec(std::span<const cplx> x, std::span<cplx> y) const {
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw InvalidArgument("BandedMatrix::matvec: size mismatch");
  std::fill(y.begin(), y.end(), cplx(0.0));
  for (int o = -kl; o <= ku; ++o) {
    const auto& dg = diags[o + kl];
    const int len = n - std::abs(o);
    if (o >= 0)
      kernels::fma_cc(std::span<const cplx>(dg.data(), len), x.subspan(o, len),
                      y.subspan(0, len));
    else
      kernels::fma_cc(std::span<const cplx>(dg.data(), len), x.subspan(0, len),
                      y.subspan(-o, len));
  }
}

std::vector<cplx> BandedMatrix::apply(std::span<const cplx> x) const {
  std::vector<cplx> y(n);
  matvec(x, y);
  return y;
}

BandedMatrix BandedMatrix::multiply(const BandedMatrix& other) const {
  if (other.n != n) throw InvalidArgument("BandedMatrix::multiply: size");
  const int rkl = std::min(n - 1, kl + other.kl);
  const int rku = std::min(n - 1, ku + other.ku);
  BandedMatrix c = zeros(n, rkl, rku);
  for (int i = 0; i < n; ++i) {
    const int kmin = std::max(0, i - kl), kmax = std::min(n - 1, i + ku);
    for (int k = kmin; k <= kmax; ++k) {
      const cplx aik = at(i, k);
      if (aik == cplx(0.0)) continue;
      const int jmin = std::max(0, k - other.kl);
      const int jmax = std::min(n - 1, k + other.ku);
      for (int j = jmin; j <= jmax; ++j) c.ref(i, j) += aik * other.at(k, j);
    }
  }
  return c;
}

void BandedMatrix::add_scaled_identity(cplx sigma) {
  for (int i = 0; i < n; ++i) diags[kl][i] += sigma;
}

void BandedMatrix::add_scaled(const BandedMatrix& other, cplx c) {
  if (other.n != n || other.kl > kl || other.ku > ku)
    throw InvalidArgument("BandedMatrix::add_scaled: band mismatch");
  for (int o = -other.kl; o <= other.ku; ++o) {
    auto& dst = diags[o + kl];
    const auto& src = other.diags[o + other.kl];
    for (std::size_t m = 0; m < src.size(); ++m) dst[m] += c * src[m];
  }
}

BandedMatrix BandedMatrix::widened(int kl_new, int ku_new) const {
  BandedMatrix m = zeros(n, kl_new, ku_new);
  m.add_scaled(*this, 1.0);
  return m;
}

double BandedMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& dg : diags) s += kernels::abs2_sum(dg);
  return std::sqrt(s);
}

double BandedMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& dg : diags)
    for (const cplx& v : dg) m = std::max(m, std::abs(v));
  return m;
}

double BandedMatrix::norm1() const {
  std::vector<double> col(n, 0.0);
  for (int o = -kl; o <= ku; ++o) {
    const auto& dg = diags[o + kl];
    for (std::size_t m = 0; m < dg.size(); ++m) {
      const int j = (o >= 0) ? static_cast<int>(m) + o : static_cast<int>(m);
      col[j] += std::abs(dg[m]);
    }
  }
  return *std::max_element(col.begin(), col.end());
}

double BandedMatrix::symmetry_defect() const {
  double defect = 0.0;
  for (int o = 1; o <= std::max(kl, ku); ++o) {
    const int len = n - o;
    for (int i = 0; i < len; ++i)
      defect = std::max(defect, std::abs(at(i, i + o) - at(i + o, i)));
  }
  const double scale = max_abs();
  return scale > 0.0 ? defect / scale : 0.0;
}

bool BandedMatrix::is_real(double tol) const {
  const double scale = max_abs();
  for (const auto& dg : diags)
    for (const cplx& v : dg)
      if (std::abs(v.imag()) > tol * scale) return false;
  return true;
}

std::vector<cplx> BandedMatrix::dense_col_major() const {
  std::vector<cplx> a(static_cast<std::size_t>(n) * n, cplx(0.0));
  for (int o = -kl; o <= ku; ++o) {
    const auto& dg = diags[o + kl];
    for (std::size_t m = 0; m < dg.size(); ++m) {
      const int i = (o >= 0) ? static_cast<int>(m) : static_cast<int>(m) - o;
      const int j = i + o;
      a[static_cast<std::size_t>(j) * n + i] = dg[m];
    }
  }
  return a;
}

BandedLU::BandedLU(const BandedMatrix& A)
    : n_(A.n), kl_(A.kl), ku_(A.ku), ldab_(2 * A.kl + A.ku + 1) {
  anorm_ = A.norm1();
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, cplx(0.0));
  for (int j = 0; j < n_; ++j) {
    const int imin = std::max(0, j - ku_), imax = std::min(n_ - 1, j + kl_);
    for (int i = imin; i <= imax; ++i)
      ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j] = A.at(i, j);
  }
  ipiv_.resize(n_);
  const int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                                  ab_.data(), ldab_, ipiv_.data());
  if (info > 0)
    throw FactorizationSingular("BandedLU: exact zero pivot at index " +
                                std::to_string(info));
  if (info < 0) throw Error("BandedLU: zgbtrf illegal argument");
}

void BandedLU::solve_inplace(std::span<cplx> b, char trans) const {
  if (static_cast<int>(b.size()) != n_)
    throw InvalidArgument("BandedLU::solve: size mismatch");
  const int info =
      LAPACKE_zgbtrs(LAPACK_COL_MAJOR, trans, n_, kl_, ku_, 1, ab_.data(),
                     ldab_, ipiv_.data(), b.data(), n_);
  if (info != 0) throw Error("BandedLU: zgbtrs failed");
}

std::vector<cplx> BandedLU::solve(std::span<const cplx> b, char trans) const {
  std::vector<cplx> x(b.begin(), b.end());
  solve_inplace(x, trans);
  return x;
}

double BandedLU::rcond() const {
  if (rcond_ < 0.0) {
    double rc = 0.0;
    const int info = LAPACKE_zgbcon(LAPACK_COL_MAJOR, '1', n_, kl_, ku_,
                                    ab_.data(), ldab_, ipiv_.data(), anorm_,
                                    &rc);
    if (info != 0) throw Error("BandedLU: zgbcon failed");
    rcond_ = rc;
  }
  return rcond_;
}

double BandedLU::condition_flag() const {
  const double rc = rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

DenseEig dense_eig(const BandedMatrix& A, bool with_vectors) {
  const int n = A.n;
  std::vector<cplx> a = A.dense_col_major();
  std::vector<cplx> wv(n);
  std::vector<cplx> vr;
  if (with_vectors) vr.resize(static_cast<std::size_t>(n) * n);
  const int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', with_vectors ? 'V' : 'N', n, a.data(), n,
      wv.data(), nullptr, 1, with_vectors ? vr.data() : nullptr,
      with_vectors ? n : 1);
  if (info != 0) throw Error("dense_eig: zgeev failed, info=" +
                             std::to_string(info));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a_, int b_) {
    if (wv[a_].real() != wv[b_].real()) return wv[a_].real() < wv[b_].real();
    return wv[a_].imag() < wv[b_].imag();
  });
  DenseEig out;
  out.values.resize(n);
  for (int k = 0; k < n; ++k) out.values[k] = wv[order[k]];
  if (with_vectors) {
    out.vectors.resize(n);
    for (int k = 0; k < n; ++k) {
      const cplx* col = vr.data() + static_cast<std::size_t>(order[k]) * n;
      out.vectors[k].assign(col, col + n);
    }
  }
  return out;
}

std::vector<double> dense_sym_gen_eig(const BandedMatrix& A,
                                      const BandedMatrix& B) {
  const int n = A.n;
  if (B.n != n) throw InvalidArgument("dense_sym_gen_eig: size mismatch");
  if (!A.is_real(1e-14) || !B.is_real(1e-14))
    throw InvalidArgument("dense_sym_gen_eig: matrices must be real");
  auto densify = [n](const BandedMatrix& M) {
    std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = std::max(0, j - M.kl); i <= std::min(n - 1, j + M.ku); ++i)
        out[static_cast<std::size_t>(j) * n + i] = M.at(i, j).real();
    return out;
  };
  std::vector<double> a = densify(A), b = densify(B), w(n);
  const int info = LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'N', 'L', n, a.data(),
                                  n, b.data(), n, w.data());
  if (info != 0)
    throw Error("dense_sym_gen_eig: dsygvd failed, info=" +
                std::to_string(info));
  return w;
}

}  // namespace bispec
