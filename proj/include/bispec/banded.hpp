#pragma once

// Complex banded matrices in diagonal-offset storage (one contiguous array
// per diagonal, SIMD-friendly), banded LU via LAPACK zgbtrf/zgbtrs/zgbcon,
// and dense eigensolvers used as oracles and for the DenseQR path.

#include <complex>
#include <span>
#include <vector>

#include "bispec/core.hpp"

namespace bispec {

struct BandedMatrix {
  int n = 0, kl = 0, ku = 0;
  // diags[k] is diagonal o = k - kl; for o >= 0, diags[k][i] = A(i, i+o),
  // for o < 0, diags[k][j] = A(j-o, j). Length n - |o|.
  std::vector<std::vector<cplx>> diags;

  static BandedMatrix zeros(int n, int kl, int ku);

  cplx at(int i, int j) const;
  cplx& ref(int i, int j);

  void matvec(std::span<const cplx> x, std::span<cplx> y) const;
  std::vector<cplx> apply(std::span<const cplx> x) const;

  BandedMatrix multiply(const BandedMatrix& other) const;
  void add_scaled_identity(cplx sigma);           // A += sigma I
  void add_scaled(const BandedMatrix& other, cplx c);  // A += c B (band superset required)
  BandedMatrix widened(int kl_new, int ku_new) const;

  double frobenius() const;
  double max_abs() const;
  // rough 1-norm, used as the spectral scale estimate
  double norm1() const;
  double symmetry_defect() const;  // max_{ij} |A_ij - A_ji| / max|A|
  bool is_real(double tol) const;

  std::vector<cplx> dense_col_major() const;
};

// LU factorization of a banded matrix (partial pivoting). Throws
// FactorizationSingular when a pivot is exactly zero.
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& A);

  // Solve A x = b ('N'), A^T x = b ('T') or A^H x = b ('C') in place.
  void solve_inplace(std::span<cplx> b, char trans = 'N') const;
  std::vector<cplx> solve(std::span<const cplx> b, char trans = 'N') const;

  // 1-norm condition estimate (zgbcon); condition_flag = 1/rcond.
  double rcond() const;
  double condition_flag() const;

 private:
  int n_, kl_, ku_, ldab_;
  double anorm_;
  std::vector<cplx> ab_;
  std::vector<int> ipiv_;
  mutable double rcond_ = -1.0;
};

struct DenseEig {
  std::vector<cplx> values;
  // vectors[k] is the right eigenvector of values[k] (empty when not requested)
  std::vector<std::vector<cplx>> vectors;
};

// All eigenvalues of a general complex matrix (LAPACK zgeev on the densified
// band), sorted by (Re, Im) for determinism.
DenseEig dense_eig(const BandedMatrix& A, bool with_vectors);

// All eigenvalues of the symmetric-definite pencil (A, B), both real
// symmetric banded, via LAPACK dsygvd on the densified matrices. Oracle for
// the iterative pencil solvers.
std::vector<double> dense_sym_gen_eig(const BandedMatrix& A,
                                      const BandedMatrix& B);

}  // namespace bispec
