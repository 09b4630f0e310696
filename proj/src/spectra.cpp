#include "bispec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "bispec/kernels.hpp"

namespace bispec {

namespace {

std::vector<double> pair_residuals(const BandedMatrix& m,
                                   const std::vector<cplx>& values,
                                   const std::vector<std::vector<cplx>>& vecs) {
  std::vector<double> res(values.size(), 0.0);
  std::vector<cplx> hv(m.n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    m.matvec(vecs[k], hv);
    kernels::axpy(-values[k], vecs[k], hv);
    res[k] = std::sqrt(kernels::abs2_sum(hv) / kernels::abs2_sum(vecs[k]));
  }
  return res;
}

void sort_pairs(std::vector<cplx>& values, std::vector<double>& residuals) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a].real() != values[b].real())
      return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });
  std::vector<cplx> v(values.size());
  std::vector<double> r(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    v[i] = values[order[i]];
    r[i] = residuals[order[i]];
  }
  values.swap(v);
  residuals.swap(r);
}

EigenResult dense_path(const BandedOperator& H) {
  DenseEig de = dense_eig(H.m, /*with_vectors=*/true);
  EigenResult out;
  out.method = EigMethod::dense_qr;
  out.spectral_scale = H.m.norm1();
  out.eigenvalues = std::move(de.values);
  out.residuals = pair_residuals(H.m, out.eigenvalues, de.vectors);
  sort_pairs(out.eigenvalues, out.residuals);
  out.n = H.grid->n();
  out.R = H.grid->R();
  out.ell = H.sector.ell;
  return out;
}

EigenResult arnoldi_path(const BandedOperator& H, int k, cplx shift,
                         const ArnoldiParams& params) {
  const int n = H.m.n;
  const double scale = H.m.norm1();
  const int m = std::min(n, std::max(params.krylov_factor * k, k + 8));

  BandedMatrix shifted = H.m;
  shifted.add_scaled_identity(-shift);
  BandedLU lu(shifted);  // FactorizationSingular propagates to the caller

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<cplx> start(n);
  for (cplx& x : start) x = cplx(ud(rng), ud(rng));

  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= params.max_restarts; ++restart) {
    // Arnoldi with modified Gram-Schmidt and one reorthogonalization pass.
    std::vector<std::vector<cplx>> q;
    q.reserve(m + 1);
    {
      const double nrm = std::sqrt(kernels::abs2_sum(start));
      std::vector<cplx> q0 = start;
      for (cplx& x : q0) x *= 1.0 / nrm;
      q.push_back(std::move(q0));
    }
    std::vector<cplx> hess(static_cast<std::size_t>(m + 1) * m, cplx(0.0));
    auto hat = [&](int i, int j) -> cplx& {
      return hess[static_cast<std::size_t>(j) * (m + 1) + i];
    };
    int built = m;
    for (int j = 0; j < m; ++j) {
      std::vector<cplx> v = lu.solve(q[j]);
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          cplx hij(0.0);
          for (int t = 0; t < n; ++t) hij += std::conj(q[i][t]) * v[t];
          hat(i, j) += hij;
          kernels::axpy(-hij, q[i], v);
        }
      const double beta = std::sqrt(kernels::abs2_sum(v));
      hat(j + 1, j) = beta;
      if (beta < 1e-14) {
        built = j + 1;
        break;
      }
      for (cplx& x : v) x *= 1.0 / beta;
      q.push_back(std::move(v));
    }

    // Ritz pairs of the small Hessenberg block.
    BandedMatrix hsmall = BandedMatrix::zeros(built, built - 1 > 0 ? built - 1 : 0, built - 1 > 0 ? built - 1 : 0);
    for (int j = 0; j < built; ++j)
      for (int i = 0; i < built; ++i)
        if (hat(i, j) != cplx(0.0)) hsmall.ref(i, j) = hat(i, j);
    DenseEig small = dense_eig(hsmall, /*with_vectors=*/true);

    // Order by |mu| descending: dominant in the shift-inverted spectrum
    // means nearest the shift.
    std::vector<int> order(small.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(small.values[a]) > std::abs(small.values[b]);
    });

    const int kk = std::min<int>(k, order.size());
    std::vector<cplx> values(kk);
    std::vector<std::vector<cplx>> vectors(kk);
    for (int t = 0; t < kk; ++t) {
      const int idx = order[t];
      values[t] = shift + 1.0 / small.values[idx];
      std::vector<cplx> v(n, cplx(0.0));
      for (int j = 0; j < built; ++j)
        kernels::axpy(small.vectors[idx][j], q[j], v);
      vectors[t] = std::move(v);
    }
    std::vector<double> res = pair_residuals(H.m, values, vectors);
    const double worst = *std::max_element(res.begin(), res.end());
    best_residual = std::min(best_residual, worst);
    if (worst <= params.tol * scale) {
      EigenResult out;
      out.method = EigMethod::shift_invert_arnoldi;
      out.spectral_scale = scale;
      out.eigenvalues = std::move(values);
      out.residuals = std::move(res);
      sort_pairs(out.eigenvalues, out.residuals);
      out.n = H.grid->n();
      out.R = H.grid->R();
      out.ell = H.sector.ell;
      return out;
    }
    // Explicit restart from the span of the wanted Ritz vectors.
    std::fill(start.begin(), start.end(), cplx(0.0));
    for (int t = 0; t < kk; ++t) kernels::axpy(cplx(1.0), vectors[t], start);
    for (cplx& x : start)
      x += cplx(1e-6 * ud(rng), 1e-6 * ud(rng));
  }
  throw ConvergenceError("eigenvalues: Arnoldi did not reach tolerance",
                         best_residual);
}

}  // namespace

EigenResult eigenvalues(const BandedOperator& H, int k, cplx shift,
                        EigMethod method, const ArnoldiParams& params) {
  const int n = H.m.n;
  if (k < 1 || k > n) throw InvalidArgument("eigenvalues: need 1 <= k <= n");
  if (method == EigMethod::dense_qr) {
    if (n > 1500)
      throw InvalidArgument(
          "eigenvalues: dense path guarded to n <= 1500 (use Arnoldi)");
    return dense_path(H);
  }
  return arnoldi_path(H, k, shift, params);
}

double distance_to_positive_axis(cplx z) {
  return z.real() >= 0.0 ? std::abs(z.imag()) : std::abs(z);
}

namespace {

// Nearest eigenvalue of H to the target: dense list lookup when available,
// otherwise shift-invert Arnoldi anchored at the target itself.
cplx nearest_eigenvalue(const BandedOperator& H,
                        const std::vector<cplx>* dense_list, cplx target) {
  if (dense_list) {
    cplx best(0.0);
    double dist = std::numeric_limits<double>::infinity();
    for (cplx z2 : *dense_list) {
      const double dd = std::abs(z2 - target);
      if (dd < dist) {
        dist = dd;
        best = z2;
      }
    }
    return best;
  }
  cplx shift = target;
  for (int attempt = 0;; ++attempt) {
    try {
      EigenResult er =
          eigenvalues(H, 4, shift, EigMethod::shift_invert_arnoldi);
      cplx best(0.0);
      double dist = std::numeric_limits<double>::infinity();
      for (cplx z2 : er.eigenvalues) {
        const double dd = std::abs(z2 - target);
        if (dd < dist) {
          dist = dd;
          best = z2;
        }
      }
      return best;
    } catch (const FactorizationSingular&) {
      // the shift sits exactly on an eigenvalue of the doubled operator
      if (attempt >= 3) return target;
      shift += cplx(1e-6, 1e-6) * (1.0 + std::abs(shift));
    }
  }
}

std::vector<CandidateTrack> match_candidates(const Potential& V, Dimension d,
                                             GridParams gp,
                                             const PersistenceParams& pp) {
  const double h = gp.R / gp.n;
  const double uv = std::pow(4.0 / (h * h), 2);
  const double window =
      pp.spectral_window > 0.0 ? pp.spectral_window : 1e-3 * uv;
  if (gp.n > 1500)
    throw InvalidArgument(
        "persistence analysis: base grid exceeds the dense eigensolver guard");
  std::vector<CandidateTrack> tracks;
  for (int ell : pp.sectors) {
    AngularSector sec(ell, d);
    GridPtr g1 = make_grid(gp.n, gp.R, d);
    EigenResult e1 = eigenvalues(build_hamiltonian(d, sec, g1, V), gp.n,
                                 cplx(0.0), EigMethod::dense_qr);
    std::vector<cplx> cands;
    for (cplx z : e1.eigenvalues) {
      const double d1 = distance_to_positive_axis(z);
      if (d1 > pp.dist_tol && std::abs(z) <= window) cands.push_back(z);
    }
    if (cands.empty()) continue;

    GridPtr g2 = make_grid(2 * gp.n, 2.0 * gp.R, d);
    BandedOperator H2 = build_hamiltonian(d, sec, g2, V);
    std::vector<cplx> dense2;
    const std::vector<cplx>* dense_ptr = nullptr;
    if (2 * gp.n <= 1500) {
      dense2 = eigenvalues(H2, 2 * gp.n, cplx(0.0), EigMethod::dense_qr)
                   .eigenvalues;
      dense_ptr = &dense2;
    }
    for (cplx z : cands) {
      CandidateTrack t;
      t.ell = ell;
      t.lambda_R = z;
      t.dist_R = distance_to_positive_axis(z);
      t.lambda_2R = nearest_eigenvalue(H2, dense_ptr, z);
      t.dist_2R = distance_to_positive_axis(t.lambda_2R);
      // persistent when doubling the radius failed to pull the candidate
      // toward [0, inf) by the drift factor
      t.persistent =
          t.dist_2R > 0.0 && (t.dist_R / t.dist_2R) < pp.drift_factor;
      tracks.push_back(t);
    }
  }
  return tracks;
}

}  // namespace

AbsenceVerdict check_total_absence(const Potential& V, Dimension d,
                                   GridParams gp,
                                   const PersistenceParams& pp) {
  static constexpr int kElls[] = {0, 1, 2};
  AbsenceVerdict verdict;
  verdict.n = gp.n;
  verdict.R = gp.R;
  GridPtr g1 = make_grid(gp.n, gp.R, d);
  verdict.a_measured = smallness_over_sectors(V, d, g1, kElls);
  verdict.a_threshold = admissible_threshold(d);
  verdict.hypothesis_met = verdict.a_measured < verdict.a_threshold;
  verdict.tracks = match_candidates(V, d, gp, pp);
  verdict.any_persistent = std::any_of(
      verdict.tracks.begin(), verdict.tracks.end(),
      [](const CandidateTrack& t) { return t.persistent; });
  return verdict;
}

ConeReport check_cone_enclosure(const Potential& V, Dimension d, double delta,
                                GridParams gp, const PersistenceParams& pp) {
  static constexpr int kElls[] = {0, 1, 2};
  if (!(delta > 0.0))
    throw InvalidArgument("check_cone_enclosure: delta must be > 0");
  ConeReport rep;
  rep.delta = delta;
  rep.n = gp.n;
  rep.R = gp.R;
  GridPtr g1 = make_grid(gp.n, gp.R, d);
  rep.a_measured = rellich_smallness_over_sectors(V, d, g1, kElls);
  rep.a_threshold = cone_threshold(delta, d);
  rep.hypothesis_met = rep.a_measured < rep.a_threshold;
  std::vector<CandidateTrack> tracks = match_candidates(V, d, gp, pp);
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (CandidateTrack& t : tracks) {
    if (!t.persistent) continue;
    const cplx z = t.lambda_2R;
    const double margin =
        (std::abs(z.imag()) - delta * z.real()) / std::max(std::abs(z), 1e-300);
    rep.worst_margin = std::max(rep.worst_margin, margin);
    if (margin > 1e-3) rep.all_inside = false;
    rep.persistent.push_back(t);
  }
  if (rep.persistent.empty())
    rep.worst_margin = 0.0;  // vacuously inside
  return rep;
}

}  // namespace bispec
