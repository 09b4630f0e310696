// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion pins its tolerances in code.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <vector>

#include "bispec/identities.hpp"
#include "bispec/inequalities.hpp"
#include "bispec/manufactured.hpp"
#include "bispec/resolvent.hpp"
#include "bispec/spectra.hpp"

using namespace bispec;

namespace {

int failures = 0;

struct Criterion {
  const char* name;
  double budget_s;
  bool ok = true;
  std::vector<std::string> details;
  std::chrono::steady_clock::time_point t0 =
      std::chrono::steady_clock::now();

  Criterion(const char* n, double budget) : name(n), budget_s(budget) {}

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      details.push_back(what);
    }
  }

  void finish() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs > budget_s) {
      ok = false;
      details.push_back("runtime " + std::to_string(secs) + "s exceeds " +
                        std::to_string(budget_s) + "s");
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "  ("
              << static_cast<int>(secs * 10) / 10.0 << "s)\n";
    for (const std::string& d : details) std::cout << "       - " << d << "\n";
    if (!ok) ++failures;
  }
};

double bessel_zero_oracle() {
  double lo = M_PI, hi = 1.5 * M_PI;
  auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void criterion1_constants() {
  Criterion c("criterion 1: constants suite (3% above closed forms at n=2000,"
              " R=40; gap shrink >= 2x from n=500)", 60.0);
  struct K {
    ConstantKind kind;
    double gamma;
    const char* name;
  };
  const K kinds[] = {{ConstantKind::hardy, 0, "C_H"},
                     {ConstantKind::rellich, 0, "C_R"},
                     {ConstantKind::hardy_rellich, 0, "C_HR"},
                     {ConstantKind::weighted_hardy, -1.0, "wH(-1)"}};
  for (int dv : {5, 6, 7}) {
    Dimension d(dv);
    AngularSector s0(0, d);
    for (const K& k : kinds) {
      ConstantEstimate coarse =
          estimate_constant(k.kind, d, make_grid(500, 40.0, d), s0, k.gamma);
      ConstantEstimate fine =
          estimate_constant(k.kind, d, make_grid(2000, 40.0, d), s0, k.gamma);
      const double rel = fine.discrete / fine.analytic - 1.0;
      c.expect(rel >= -1e-9 && rel <= 0.03,
               std::string(k.name) + " d=" + std::to_string(dv) +
                   ": discrete " + fmt(fine.discrete) + " is " +
                   fmt(rel * 100) + "% above analytic " + fmt(fine.analytic) +
                   " (needs 0..3%)");
      const double shrink = (coarse.discrete - coarse.analytic) /
                            (fine.discrete - fine.analytic);
      c.expect(shrink >= 2.0, std::string(k.name) + " d=" + std::to_string(dv) +
                                  ": gap shrink n=500->2000 is " +
                                  fmt(shrink) + "x (needs >= 2x)");
    }
  }
  c.finish();
}

void criterion2_bessel() {
  Criterion c("criterion 2: first Navier eigenvalue vs Bessel oracle (1%)",
              10.0);
  Dimension d(5);
  const double j = bessel_zero_oracle();
  const double target = std::pow(j, 4);  // 407.6655...
  GridPtr g = make_grid(2000, 1.0, d);
  BandedOperator B = build_bilaplacian(d, AngularSector(0, d), g);
  // n = 2000 exceeds the dense guard; shift-invert Arnoldi is the production
  // path here, cross-checked against the closed-form oracle.
  EigenResult er = eigenvalues(B, 1, cplx(300.0), EigMethod::shift_invert_arnoldi);
  const double lam = er.eigenvalues.front().real();
  c.expect(std::abs(lam / target - 1.0) <= 0.01,
           "lambda_1 = " + fmt(lam) + " vs (j_{3/2,1})^4 = " + fmt(target));
  c.finish();
}

void criterion3_factorization() {
  Criterion c("criterion 3: factorization residual <= 1e-12, 20 random z",
              5.0);
  Dimension d(5);
  AngularSector s0(0, d);
  GridPtr g = make_grid(1000, 10.0, d);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> mag(-2.0, 2.0), ang(-M_PI, M_PI);
  for (int k = 0; k < 20; ++k) {
    const cplx z = std::polar(std::pow(10.0, mag(rng)), ang(rng));
    const double res = verify_factorization(d, s0, g, z);
    c.expect(res <= 1e-12, "z = " + fmt(z.real()) + (z.imag() >= 0 ? "+" : "") +
                               fmt(z.imag()) + "i: residual " + fmt(res));
  }
  c.finish();
}

void criterion4_identities() {
  Criterion c("criterion 4: identity residuals <= 1e-4 at n=2000, rate 2.0"
              " +- 0.4 over three doublings, 10 inputs each", 30.0);
  Dimension d(5);
  AngularSector s0(0, d);
  const double R = 20.0;
  const int ns[] = {250, 500, 1000, 2000};
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> ud(0.0, 1.0);

  auto fit_rate = [](const std::vector<double>& rs) {
    const int m = static_cast<int>(rs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
      const double x = i, y = -std::log2(std::max(rs[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };

  for (int input = 0; input < 10; ++input) {
    GaussianPoly u{{cplx(0.5 + ud(rng), 0.4 * ud(rng)),
                    cplx(-0.25 * ud(rng), 0.5 * ud(rng)),
                    cplx(0.1 * ud(rng), -0.08 * ud(rng))},
                   (36.0 + 8.0 * ud(rng)) / (R * R)};
    GaussianPoly bilap = u.laplacian(d).laplacian(d);
    const cplx z(0.5 + ud(rng), -1.5 + 0.8 * ud(rng));
    const double ac = (0.48 + 0.05 * ud(rng)) * R;
    const double aw = 0.078 * R;
    Potential V = Potential::bump(cplx(1.0 + ud(rng)), 0.35 * R, 0.2 * R);

    std::vector<double> rs1, rs2, rsa;
    for (int n : ns) {
      GridPtr g = make_grid(n, R, d);
      std::vector<cplx> uv = sample_profile(u.fn(), *g);
      std::vector<cplx> fv = sample_profile(bilap.fn(), *g);
      for (int i = 0; i < n; ++i) fv[i] -= z * uv[i];
      rs1.push_back(verify_S1(uv, fv, z, *g, d, s0).residual);
      rs2.push_back(verify_S2(uv, fv, z, *g, d, s0).residual);

      std::vector<cplx> ua =
          sample_profile(gaussian_bump(ac, aw, 0.2 + 0.3 * ud(rng)), *g);
      BandedOperator HV = build_hamiltonian(d, s0, g, V);
      std::vector<cplx> fa = HV.apply(ua);
      const double za = 0.5;
      for (int i = 0; i < n; ++i) fa[i] -= za * ua[i];
      std::vector<cplx> ga(n, cplx(0.0));
      rsa.push_back(verify_A(ua, V, fa, ga, za, *g, d, s0).residual);
    }
    c.expect(rs1.back() <= 1e-4, "S1 input " + std::to_string(input) +
                                     ": residual " + fmt(rs1.back()));
    c.expect(rs2.back() <= 1e-4, "S2 input " + std::to_string(input) +
                                     ": residual " + fmt(rs2.back()));
    c.expect(rsa.back() <= 1e-4, "A input " + std::to_string(input) +
                                     ": residual " + fmt(rsa.back()));
    const double r1 = fit_rate(rs1), ra = fit_rate(rsa);
    c.expect(std::abs(r1 - 2.0) <= 0.4, "S1 input " + std::to_string(input) +
                                            ": rate " + fmt(r1));
    c.expect(std::abs(ra - 2.0) <= 0.4,
             "A input " + std::to_string(input) + ": rate " + fmt(ra));
    // S2 is satisfied exactly by the symmetrized discretization (residuals
    // at rounding level), which supersedes the O(h^2) rate requirement;
    // accept either a clean rate or exactness at the floor.
    const double r2 = fit_rate(rs2);
    const bool s2_exact =
        *std::max_element(rs2.begin(), rs2.end()) <= 1e-10;
    c.expect(std::abs(r2 - 2.0) <= 0.4 || s2_exact,
             "S2 input " + std::to_string(input) + ": rate " + fmt(r2) +
                 " and residuals above the exactness floor");
  }
  c.finish();
}

void criterion5_free_resolvent() {
  Criterion c("criterion 5: free resolvent bounds at 50 z with Re z < 0",
              60.0);
  Dimension d(5);
  AngularSector s0(0, d);
  GridPtr g = make_grid(1000, 20.0, d);
  BandedOperator H = build_bilaplacian(d, s0, g);
  const double angles[] = {3 * M_PI / 4, -3 * M_PI / 4};
  std::vector<cplx> zs = log_polar_grid(0.01, 100.0, 25, angles);
  std::vector<cplx> f = sample_profile(mollifier_bump(6.0, 2.4), *g);
  for (cplx z : zs) {
    const double nrm = weighted_resolvent_norm(H, z);
    c.expect(nrm <= 0.6528, "wrn(" + fmt(z.real()) + "," + fmt(z.imag()) +
                                ") = " + fmt(nrm) + " > 0.6528");
    CheckReport rep = apriori_check_neg(H, Potential::zero(), z, f);
    c.expect(rep.passed, "apriori ratio " + fmt(rep.measured) + " > " +
                             fmt(0.8 * 1.02) + " at z = " + fmt(z.real()) +
                             "," + fmt(z.imag()));
  }
  c.finish();
}

void criterion6_uniformity() {
  Criterion c("criterion 6: admissible Rellich sweep, sup stable under"
              " R-doubling (10%)", 300.0);
  Dimension d(5);
  AngularSector s0(0, d);
  Potential V = Potential::rellich(cplx(0.01));
  static constexpr int ells[] = {0, 1, 2};
  const double a =
      smallness_over_sectors(V, d, make_grid(800, 16.0, d), ells);
  const double astar = admissible_threshold(d);
  c.expect(a < astar, "hypothesis: a = " + fmt(a) + " vs a* = " + fmt(astar));

  const double angles[] = {M_PI / 4, 3 * M_PI / 4, -3 * M_PI / 4, -M_PI / 4};
  std::vector<cplx> zs = log_polar_grid(0.01, 100.0, 25, angles);
  double sup[2];
  for (int i = 0; i < 2; ++i) {
    GridPtr g = make_grid(800 * (i + 1), 16.0 * (i + 1), d);
    BandedOperator H = build_hamiltonian(d, s0, g, V);
    SweepResult sr = sweep_resolvent_norm(H, zs, 1e-6, 2);
    c.expect(sr.failures == 0,
             "sweep failures at R = " + fmt(g->R()) + ": " +
                 std::to_string(sr.failures));
    sup[i] = sr.sup_norm;
    c.expect(std::isfinite(sup[i]) && sup[i] > 0.0,
             "sup norm not finite at R = " + fmt(g->R()));
  }
  const double change = std::abs(sup[1] / sup[0] - 1.0);
  c.expect(change <= 0.10, "sup changed " + fmt(change * 100) +
                               "% under R-doubling (sup " + fmt(sup[0]) +
                               " -> " + fmt(sup[1]) + ")");
  c.finish();
}

void criterion7_gauge() {
  Criterion c("criterion 7: gauge necessity at z = 4 (ungauged >= 1.5x,"
              " gauged <= 10%)", 60.0);
  Dimension d(5);
  GaugeContrast gc = gauge_necessity_contrast(d, GridParams{1000, 10.0}, 4.0);
  c.expect(gc.ungauged_growth >= 1.5,
           "ungauged growth " + fmt(gc.ungauged_growth) + "x < 1.5x");
  c.expect(gc.gauged_change <= 0.10,
           "gauged change " + fmt(gc.gauged_change * 100) + "% > 10%");
  // the gauged inequality itself must hold at both radii
  for (int i = 0; i < 2; ++i) {
    CheckReport rep = apriori_check_pos_outgoing(
        d, GridParams{1000 * (i + 1), 10.0 * (i + 1)}, 4.0);
    c.expect(rep.passed, "gauged estimate failed at R = " + fmt(rep.R));
  }
  c.finish();
}

void criterion8_absence_contrast() {
  Criterion c("criterion 8: admissible Rellich absence vs binding well"
              " persistence", 180.0);
  Dimension d(5);
  PersistenceParams pp;  // sectors {0,1,2,3}
  AbsenceVerdict ok =
      check_total_absence(Potential::rellich(cplx(0.01)), d,
                          GridParams{500, 10.0}, pp);
  c.expect(ok.hypothesis_met, "Rellich(0.01) must certify smallness (a = " +
                                  fmt(ok.a_measured) + " vs a* = " +
                                  fmt(ok.a_threshold) + ")");
  c.expect(!ok.any_persistent,
           "admissible potential produced a persistent candidate");

  AbsenceVerdict bad =
      check_total_absence(Potential::bump(cplx(-50.0), 2.0, 0.5), d,
                          GridParams{500, 10.0}, pp);
  c.expect(!bad.hypothesis_met, "deep well should not certify smallness");
  bool negative_persistent = false;
  for (const CandidateTrack& t : bad.tracks)
    if (t.persistent && t.lambda_R.real() < 0.0) negative_persistent = true;
  c.expect(negative_persistent,
           "deep well must keep a persistent negative eigenvalue");
  c.finish();
}

void criterion9_sa_track() {
  Criterion c("criterion 9: self-adjoint bounds at z in {-10, 0, 10, 100}",
              60.0);
  Dimension d(5);
  GridParams gp{1000, 20.0};
  auto f = mollifier_bump(6.0, 2.4);
  for (const Potential& V :
       {Potential::zero(), Potential::rellich(cplx(0.1))}) {
    for (double z : {-10.0, 0.0, 10.0, 100.0}) {
      SaAprioriReport sr = sa_apriori_check(V, d, gp, z, f);
      c.expect(sr.delta_bound.hypothesis_met, "hypothesis unmet (" +
                                                  V.describe() + ")");
      c.expect(sr.delta_bound.passed && sr.delta_bound.measured <= 1.2 * 1.02,
               V.describe() + " z=" + fmt(z) + ": ||Delta u||/||r^2 f|| = " +
                   fmt(sr.delta_bound.measured) + " > 1.224");
      c.expect(
          sr.weighted_bound.passed && sr.weighted_bound.measured <= 0.96 * 1.02,
          V.describe() + " z=" + fmt(z) + ": ||r^-2 u||/||r^2 f|| = " +
              fmt(sr.weighted_bound.measured) + " > 0.9792");
    }
  }
  c.finish();
}

void criterion10_schrodinger() {
  Criterion c("criterion 10: Schrodinger lemmas at kappa in {1, 1+i, 5}",
              30.0);
  Dimension d(5);
  GridParams gp{2000, 20.0};
  auto f = mollifier_bump(6.0, 2.4);
  for (cplx kappa : {cplx(1.0), cplx(1.0, 1.0), cplx(5.0)}) {
    SchrodingerReport sr = schrodinger_checks(d, gp, kappa, f);
    c.expect(sr.weighted_gradient.passed &&
                 sr.weighted_gradient.measured <= 2.0 * 1.02,
             "(grad, kappa=" + fmt(kappa.real()) + "+" + fmt(kappa.imag()) +
                 "i) ratio " + fmt(sr.weighted_gradient.measured) +
                 " > 2.04");
    c.expect(sr.gauged_gradient.passed,
             "gauged inequality failed at kappa=" + fmt(kappa.real()) + "+" +
                 fmt(kappa.imag()) + "i");
  }
  c.finish();
}

}  // namespace

int main() {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  criterion1_constants();
  criterion2_bessel();
  criterion3_factorization();
  criterion4_identities();
  criterion5_free_resolvent();
  criterion6_uniformity();
  criterion7_gauge();
  criterion8_absence_contrast();
  criterion9_sa_track();
  criterion10_schrodinger();
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) +
                                    " criteria failed\n");
  return failures;
}
