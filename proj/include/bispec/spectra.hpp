#pragma once

// Eigenvalues of the discretized Hamiltonian and their classification
// against the absence/enclosure predictions: dense QR for desk-scale
// matrices, shift-invert Arnoldi as the independent second path, and the
// domain-doubling persistence analysis that separates genuine point spectrum
// from truncation artifacts.

#include <optional>
#include <vector>

#include "bispec/core.hpp"
#include "bispec/discretize.hpp"
#include "bispec/inequalities.hpp"

namespace bispec {

enum class EigMethod { dense_qr, shift_invert_arnoldi };

struct ArnoldiParams {
  int krylov_factor = 4;  // Krylov dimension = krylov_factor * k
  int max_restarts = 30;
  double tol = 1e-10;  // residual target relative to the spectral scale
  unsigned seed = 777;
};

struct EigenResult {
  std::vector<cplx> eigenvalues;
  std::vector<double> residuals;  // ||H v - lambda v|| / ||v|| per pair
  EigMethod method = EigMethod::dense_qr;
  double spectral_scale = 0.0;  // 1-norm estimate of H
  int n = 0;
  double R = 0.0;
  int ell = 0;
};

// k eigenvalues nearest `shift` (Arnoldi) or all of them (dense). Dense is
// guarded to n <= 1500. Results are sorted by (Re, Im).
EigenResult eigenvalues(const BandedOperator& H, int k, cplx shift,
                        EigMethod method, const ArnoldiParams& params = {});

// Distance from z to the half line [0, infinity).
double distance_to_positive_axis(cplx z);

struct GridParams {
  int n;
  double R;
};

struct PersistenceParams {
  double dist_tol = 1e-3;     // candidate threshold on dist(z, [0, inf))
  double drift_factor = 1.5;  // persistent if dist shrinks by less than this
  // Candidates above this magnitude are discretization artifacts pinned to
  // the grid's UV scale (~ (4/h^2)^2) rather than spectral features; 0 means
  // the default 1e-3 * (4/h^2)^2.
  double spectral_window = 0.0;
  std::vector<int> sectors = {0, 1, 2, 3};
};

struct CandidateTrack {
  int ell = 0;
  cplx lambda_R, lambda_2R;
  double dist_R = 0.0, dist_2R = 0.0;
  bool persistent = false;
};

struct AbsenceVerdict {
  std::vector<CandidateTrack> tracks;
  bool any_persistent = false;
  bool hypothesis_met = false;
  double a_measured = 0.0;
  double a_threshold = 0.0;
  int n = 0;
  double R = 0.0;
};

// Eigenvalue tracks at radius R and 2R (same spacing) for every requested
// sector; candidates are eigenvalues away from [0, inf) inside the spectral
// window. Hypothesis: smallness_coefficient < admissible_threshold.
AbsenceVerdict check_total_absence(const Potential& V, Dimension d,
                                   GridParams gp,
                                   const PersistenceParams& pp = {});

struct ConeReport {
  std::vector<CandidateTrack> persistent;
  bool hypothesis_met = false;
  bool all_inside = true;
  double worst_margin = 0.0;  // max over persistent of (|Im| - delta Re)/|z|
  double a_measured = 0.0;
  double a_threshold = 0.0;
  double delta = 0.0;
  int n = 0;
  double R = 0.0;
};

// Persistent eigenvalues must lie in {|Im z| <= delta Re z} within relative
// angular tolerance 1e-3. Hypothesis: rellich_smallness < cone_threshold.
ConeReport check_cone_enclosure(const Potential& V, Dimension d, double delta,
                                GridParams gp,
                                const PersistenceParams& pp = {});

}  // namespace bispec
