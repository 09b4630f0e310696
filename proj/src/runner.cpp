#include "bispec/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "bispec/identities.hpp"
#include "bispec/inequalities.hpp"
#include "bispec/manufactured.hpp"
#include "bispec/parallel.hpp"
#include "bispec/report.hpp"
#include "bispec/resolvent.hpp"
#include "bispec/spectra.hpp"

namespace bispec {

using nlohmann::json;

namespace {

struct RunState {
  const RunConfig& cfg;
  Dimension d;
  int jobs;
  json results = json::object();
  std::vector<CheckReport> checks;
  std::vector<std::string> files;
  std::filesystem::path out;

  explicit RunState(const RunConfig& c, int j)
      : cfg(c), d(c.d), jobs(j), out(c.out_dir) {}

  void add_check(CheckReport rep) { checks.push_back(std::move(rep)); }

  void write_csv(const std::string& name,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    const std::filesystem::path path = out / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << csv_row(header);
    for (const auto& row : rows) f << csv_row(row);
    if (!f) throw IoError("write failed: " + path.string());
    files.push_back(path.string());
  }
};

std::string kind_name(ConstantKind k) {
  switch (k) {
    case ConstantKind::hardy: return "hardy";
    case ConstantKind::rellich: return "rellich";
    case ConstantKind::hardy_rellich: return "hardy_rellich";
    case ConstantKind::weighted_hardy: return "weighted_hardy";
  }
  return "?";
}

json estimate_json(const ConstantEstimate& e) {
  json j;
  j["kind"] = kind_name(e.kind);
  if (e.kind == ConstantKind::weighted_hardy) j["gamma"] = e.gamma;
  j["analytic"] = e.analytic;
  j["discrete"] = e.discrete;
  j["gap"] = e.discrete - e.analytic;
  j["n"] = e.n;
  j["R"] = e.R;
  j["ell"] = e.ell;
  return j;
}

CheckReport estimate_check(const ConstantEstimate& e) {
  CheckReport rep;
  rep.name = "constant_" + kind_name(e.kind) +
             (e.kind == ConstantKind::weighted_hardy
                  ? "_gamma" + format_double(e.gamma)
                  : "");
  rep.measured = e.discrete;
  rep.bound = e.analytic;
  rep.margin = e.discrete - e.analytic;
  rep.passed = e.discrete >= e.analytic - 1e-9;
  rep.n = e.n;
  rep.R = e.R;
  rep.ell = e.ell;
  rep.notes = "discrete Rayleigh estimate must not fall below the sharp "
              "constant";
  return rep;
}

std::function<cplx(double)> standard_bump(double R) {
  return mollifier_bump(0.3 * R, 0.12 * R);
}

void run_constants(RunState& st) {
  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  const std::vector<int> ladder = {st.cfg.n / 4, st.cfg.n / 2, st.cfg.n};
  struct KindSpec {
    ConstantKind kind;
    double gamma;
  };
  const KindSpec kinds[] = {{ConstantKind::hardy, 0.0},
                            {ConstantKind::rellich, 0.0},
                            {ConstantKind::hardy_rellich, 0.0},
                            {ConstantKind::weighted_hardy, -1.0}};
  for (const KindSpec& ks : kinds) {
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const int n = std::max(8, ladder[i]);
      ConstantEstimate e = estimate_constant(
          ks.kind, st.d, make_grid(n, st.cfg.R, st.d), AngularSector(0, st.d),
          ks.gamma);
      arr.push_back(estimate_json(e));
      st.add_check(estimate_check(e));
      rows.push_back({kind_name(ks.kind), format_double(ks.gamma),
                      std::to_string(e.n), format_double(e.R),
                      std::to_string(e.ell), format_double(e.analytic),
                      format_double(e.discrete),
                      format_double(e.discrete - e.analytic)});
    }
    if (st.cfg.r_doubling) {
      ConstantEstimate e = estimate_constant(
          ks.kind, st.d, make_grid(st.cfg.n, 2.0 * st.cfg.R, st.d),
          AngularSector(0, st.d), ks.gamma);
      arr.push_back(estimate_json(e));
      rows.push_back({kind_name(ks.kind), format_double(ks.gamma),
                      std::to_string(e.n), format_double(e.R),
                      std::to_string(e.ell), format_double(e.analytic),
                      format_double(e.discrete),
                      format_double(e.discrete - e.analytic)});
    }
  }
  st.results["constants"] = arr;
  st.write_csv("constants.csv",
               {"kind", "gamma", "n", "R", "ell", "analytic", "discrete",
                "gap"},
               rows);
}

void run_smallness(RunState& st, const Potential& V) {
  json j;
  const double radii[] = {st.cfg.R, 2.0 * st.cfg.R};
  const int count = st.cfg.r_doubling ? 2 : 1;
  static constexpr int kElls[] = {0, 1, 2};
  for (int i = 0; i < count; ++i) {
    GridPtr g = make_grid(st.cfg.n * (i + 1), radii[i], st.d);
    json row;
    row["n"] = g->n();
    row["R"] = g->R();
    row["smallness_a"] = smallness_over_sectors(V, st.d, g, kElls);
    row["rellich_smallness_a"] =
        rellich_smallness_over_sectors(V, st.d, g, kElls);
    if (V.is_real()) {
      double a = 0.0;
      for (int ell : kElls)
        a = std::max(a, repulsivity_coefficient(V, st.d, g,
                                                AngularSector(ell, st.d)));
      row["repulsivity_a"] = a;
    }
    AdmissibilityReport ar = admissibility_report(V, st.d, g);
    row["admissible"] = ar.admissible;
    row["a_star"] = ar.a_star;
    j[i == 0 ? "base" : "doubled"] = row;
  }
  j["admissible_threshold"] = admissible_threshold(st.d);
  j["cone_threshold"] = cone_threshold(st.cfg.delta, st.d);
  j["delta"] = st.cfg.delta;
  j["potential"] = V.describe();
  st.results["smallness"] = j;
}

json track_json(const CandidateTrack& t) {
  json j;
  j["ell"] = t.ell;
  j["re_R"] = t.lambda_R.real();
  j["im_R"] = t.lambda_R.imag();
  j["dist_R"] = t.dist_R;
  j["re_2R"] = t.lambda_2R.real();
  j["im_2R"] = t.lambda_2R.imag();
  j["dist_2R"] = t.dist_2R;
  j["persistent"] = t.persistent;
  return j;
}

void run_spectrum(RunState& st, const Potential& V) {
  PersistenceParams pp;
  pp.dist_tol = st.cfg.dist_tol;
  pp.drift_factor = st.cfg.drift_factor;
  GridParams gp{st.cfg.n, st.cfg.R};

  AbsenceVerdict av = check_total_absence(V, st.d, gp, pp);
  json ja;
  ja["hypothesis_met"] = av.hypothesis_met;
  ja["a_measured"] = av.a_measured;
  ja["a_threshold"] = av.a_threshold;
  ja["any_persistent"] = av.any_persistent;
  ja["tracks"] = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const CandidateTrack& t : av.tracks) {
    ja["tracks"].push_back(track_json(t));
    rows.push_back({std::to_string(t.ell), format_double(t.lambda_R.real()),
                    format_double(t.lambda_R.imag()), format_double(t.dist_R),
                    format_double(t.lambda_2R.real()),
                    format_double(t.lambda_2R.imag()),
                    format_double(t.dist_2R), t.persistent ? "true" : "false"});
  }
  st.write_csv("spectrum_tracks.csv",
               {"ell", "re_R", "im_R", "dist_R", "re_2R", "im_2R", "dist_2R",
                "persistent"},
               rows);
  CheckReport absence;
  absence.name = "total_absence";
  absence.hypothesis_met = av.hypothesis_met;
  absence.passed = !av.any_persistent;
  absence.measured = static_cast<double>(std::count_if(
      av.tracks.begin(), av.tracks.end(),
      [](const CandidateTrack& t) { return t.persistent; }));
  absence.bound = 0.0;
  absence.margin = -absence.measured;
  absence.n = gp.n;
  absence.R = gp.R;
  absence.notes = av.hypothesis_met
                      ? "smallness certified; persistent candidates "
                        "contradict eigenvalue absence"
                      : "hypothesis unmet (informative only)";
  st.add_check(absence);
  ja["check"] = to_json(absence);
  st.results["spectrum"]["absence"] = ja;

  ConeReport cr = check_cone_enclosure(V, st.d, st.cfg.delta, gp, pp);
  json jc;
  jc["hypothesis_met"] = cr.hypothesis_met;
  jc["a_measured"] = cr.a_measured;
  jc["a_threshold"] = cr.a_threshold;
  jc["delta"] = cr.delta;
  jc["all_inside"] = cr.all_inside;
  jc["worst_margin"] = cr.worst_margin;
  jc["persistent"] = json::array();
  for (const CandidateTrack& t : cr.persistent)
    jc["persistent"].push_back(track_json(t));
  CheckReport cone;
  cone.name = "cone_enclosure";
  cone.hypothesis_met = cr.hypothesis_met;
  cone.passed = cr.all_inside;
  cone.measured = cr.worst_margin;
  cone.bound = 1e-3;
  cone.margin = 1e-3 - cr.worst_margin;
  cone.n = gp.n;
  cone.R = gp.R;
  cone.notes = cr.hypothesis_met ? "persistent eigenvalues must lie in the "
                                   "cone within angular tolerance"
                                 : "hypothesis unmet (informative only)";
  st.add_check(cone);
  jc["check"] = to_json(cone);
  st.results["spectrum"]["cone"] = jc;
}

void run_sweep(RunState& st, const Potential& V) {
  json j;
  std::vector<std::vector<std::string>> rows;
  double sup[2] = {0.0, 0.0};
  const int count = st.cfg.r_doubling ? 2 : 1;
  for (int i = 0; i < count; ++i) {
    GridPtr g = make_grid(st.cfg.n * (i + 1), st.cfg.R * (i + 1), st.d);
    BandedOperator H = build_hamiltonian(st.d, AngularSector(0, st.d), g, V);
    SweepResult sr =
        sweep_resolvent_norm(H, st.cfg.z_points, st.cfg.wrn_tol, st.jobs);
    sup[i] = sr.sup_norm;
    json jr;
    jr["sup_norm"] = sr.sup_norm;
    jr["failures"] = sr.failures;
    jr["n"] = g->n();
    jr["R"] = g->R();
    j[i == 0 ? "base" : "doubled"] = jr;
    for (const SweepPoint& p : sr.points)
      rows.push_back({format_double(p.z.real()), format_double(p.z.imag()),
                      p.ok ? format_double(p.norm) : "",
                      format_double(p.condition_flag), "0",
                      format_double(g->R()), p.ok ? "" : p.error});
  }
  st.write_csv("resolvent_sweep.csv",
               {"re_z", "im_z", "norm", "condition_flag", "sector", "R",
                "error"},
               rows);
  if (st.cfg.r_doubling) {
    AdmissibilityReport ar =
        admissibility_report(V, st.d, make_grid(st.cfg.n, st.cfg.R, st.d));
    CheckReport rep;
    rep.name = "sweep_uniformity";
    rep.hypothesis_met = ar.admissible;
    rep.measured = sup[0] > 0.0 ? std::abs(sup[1] / sup[0] - 1.0) : 0.0;
    rep.bound = 0.10;
    rep.margin = rep.bound - rep.measured;
    rep.passed = rep.measured <= rep.bound;
    rep.n = st.cfg.n;
    rep.R = st.cfg.R;
    rep.notes = "sup-norm change under R-doubling; hypothesis = potential "
                "admissibility";
    st.add_check(rep);
    j["uniformity_check"] = to_json(rep);
  }
  st.results["sweep"] = j;
}

void run_identities(RunState& st, const Potential& V, int inputs) {
  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  // coarse end floored so the test profiles stay resolvable and compactly
  // supported on every rung
  std::vector<int> ladder;
  for (int f = 8; f >= 1; f /= 2) {
    const int n = std::max(48, st.cfg.n / f);
    if (ladder.empty() || n > ladder.back()) ladder.push_back(n);
  }
  const double R = st.cfg.R;
  AngularSector s0(0, st.d);
  std::mt19937_64 rng(st.cfg.seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);

  std::vector<double> rates;

  for (int input = 0; input < inputs; ++input) {
    // S1/S2: Gaussian-polynomial profile, f analytic
    GaussianPoly u{{cplx(0.4 + ud(rng), 0.5 * ud(rng)),
                    cplx(-0.3 * ud(rng), 0.8 * ud(rng)),
                    cplx(0.2 * ud(rng), -0.15 * ud(rng))},
                   (36.0 + 8.0 * ud(rng)) / (R * R)};
    const GaussianPoly bilap = u.laplacian(st.d).laplacian(st.d);
    const cplx z(0.8 + ud(rng), -1.2 + 0.7 * ud(rng));

    // A: mollifier bump, f manufactured through the discrete operator
    const double ac = (0.48 + 0.05 * ud(rng)) * R;
    const double aw = 0.078 * R;
    const double aphase = 0.0;

    std::vector<double> res_s1, res_a, lgn;
    double res_s1_final = 0, res_s2_final = 0, res_a_final = 0;
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      GridPtr g = make_grid(ladder[li], R, st.d);
      lgn.push_back(std::log2(static_cast<double>(ladder[li])));
      std::vector<cplx> uv = sample_profile(u.fn(), *g);
      std::vector<cplx> fv = sample_profile(bilap.fn(), *g);
      for (int i = 0; i < g->n(); ++i) fv[i] -= z * uv[i];
      IdentityResidual s1 = verify_S1(uv, fv, z, *g, st.d, s0);
      IdentityResidual s2 = verify_S2(uv, fv, z, *g, st.d, s0);

      std::vector<cplx> ua = sample_profile(gaussian_bump(ac, aw, aphase), *g);
      BandedOperator HV = build_hamiltonian(st.d, s0, g, V);
      std::vector<cplx> fa = HV.apply(ua);
      const double za = 0.5;
      for (int i = 0; i < g->n(); ++i) fa[i] -= za * ua[i];
      std::vector<cplx> ga(g->n(), cplx(0.0));
      IdentityResidual A = verify_A(ua, V, fa, ga, za, *g, st.d, s0);

      res_s1.push_back(s1.residual);
      res_a.push_back(A.residual);
      res_s1_final = s1.residual;
      res_s2_final = s2.residual;
      res_a_final = A.residual;
      rows.push_back({std::to_string(input), std::to_string(g->n()),
                      format_double(s1.residual), format_double(s2.residual),
                      format_double(A.residual)});
    }
    auto measured_rate = [&lgn](const std::vector<double>& rs) {
      // least-squares slope of -log2(residual) against log2(n)
      const int m = static_cast<int>(rs.size());
      if (m < 2) return 0.0;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < m; ++i) {
        const double x = lgn[i], y = -std::log2(std::max(rs[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
      }
      return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    const double rate_s1 = measured_rate(res_s1);
    const double rate_a = measured_rate(res_a);
    rates.push_back(rate_s1);
    rates.push_back(rate_a);
    json ji;
    ji["input"] = input;
    ji["s1_residual"] = res_s1_final;
    ji["s2_residual"] = res_s2_final;
    ji["a_residual"] = res_a_final;
    ji["s1_rate"] = rate_s1;
    ji["a_rate"] = rate_a;
    ji["z_re"] = z.real();
    ji["z_im"] = z.imag();
    arr.push_back(ji);
  }
  st.write_csv("identities.csv",
               {"input", "n", "s1_residual", "s2_residual", "a_residual"},
               rows);
  CheckReport rep;
  rep.name = "identity_residuals";
  rep.measured = 0.0;
  for (const json& ji : arr)
    rep.measured = std::max({rep.measured, ji["s1_residual"].get<double>(),
                             ji["s2_residual"].get<double>(),
                             ji["a_residual"].get<double>()});
  // O(h^2) acceptance threshold anchored at 1e-4 for n = 2000
  const double anchor = 2000.0 / st.cfg.n;
  rep.bound = 1e-4 * std::max(1.0, anchor * anchor);
  rep.margin = rep.bound - rep.measured;
  rep.passed = rep.measured <= rep.bound;
  rep.n = st.cfg.n;
  rep.R = R;
  rep.notes = "max multiplier-identity residual at the finest grid";
  st.add_check(rep);
  st.results["identities"] = json::object();
  st.results["identities"]["inputs"] = arr;
  st.results["identities"]["check"] = to_json(rep);
}

void run_apriori(RunState& st, const Potential& V) {
  json arr = json::array();
  AngularSector s0(0, st.d);
  GridParams gp{st.cfg.n, st.cfg.R};
  GridPtr g = make_grid(gp.n, gp.R, st.d);
  auto fb = standard_bump(gp.R);
  const std::vector<cplx> f = sample_profile(fb, *g);

  // negative-z a priori (free and with V)
  {
    BandedOperator Hfree = build_bilaplacian(st.d, s0, g);
    CheckReport rep = apriori_check_neg(Hfree, Potential::zero(), cplx(-1.0), f);
    rep.name = "apriori_neg_free";
    st.add_check(rep);
    arr.push_back(to_json(rep));
  }
  if (!V.is_zero()) {
    BandedOperator HV = build_hamiltonian(st.d, s0, g, V);
    CheckReport rep = apriori_check_neg(HV, V, cplx(-5.0), f);
    rep.name = "apriori_neg_potential";
    st.add_check(rep);
    arr.push_back(to_json(rep));
  }

  // positive-z gauged estimates: solve-based at z = i, outgoing at z = 4
  {
    CheckReport rep = apriori_check_pos(st.d, gp, cplx(0.0, 1.0), fb);
    st.add_check(rep);
    arr.push_back(to_json(rep));
  }
  if (st.d.value() == 5) {
    // pinned protocol grid: the contrast needs room for the outgoing tail
    const GridParams gauge_gp{1000, 10.0};
    CheckReport rep = apriori_check_pos_outgoing(st.d, gauge_gp, 4.0);
    st.add_check(rep);
    arr.push_back(to_json(rep));

    GaugeContrast gc = gauge_necessity_contrast(st.d, gauge_gp, 4.0);
    CheckReport rg;
    rg.name = "gauge_necessity";
    rg.measured = gc.ungauged_growth;
    rg.bound = 1.5;
    rg.margin = gc.ungauged_growth - 1.5;
    rg.passed = gc.ungauged_growth >= 1.5 && gc.gauged_change <= 0.10;
    rg.value_R = gc.ungauged_R;
    rg.value_2R = gc.ungauged_2R;
    rg.n = 1000;
    rg.R = 10.0;
    rg.notes = "ungauged growth must exceed 1.5x while the gauged functional "
               "changes by <= 10% (change = " +
               format_double(gc.gauged_change) + ")";
    st.add_check(rg);
    arr.push_back(to_json(rg));
  }

  // Schrodinger lemmas
  for (cplx kappa : {cplx(1.0), cplx(1.0, 1.0), cplx(5.0)}) {
    SchrodingerReport sr = schrodinger_checks(st.d, gp, kappa, fb);
    sr.gauged_gradient.name += "_k" + format_double(kappa.real()) +
                               (kappa.imag() != 0.0
                                    ? "+" + format_double(kappa.imag()) + "i"
                                    : "");
    sr.weighted_gradient.name += "_k" + format_double(kappa.real()) +
                                 (kappa.imag() != 0.0
                                      ? "+" + format_double(kappa.imag()) + "i"
                                      : "");
    st.add_check(sr.gauged_gradient);
    st.add_check(sr.weighted_gradient);
    arr.push_back(to_json(sr.gauged_gradient));
    arr.push_back(to_json(sr.weighted_gradient));
  }

  // potential chain
  if (!V.is_zero()) {
    const std::vector<cplx> psi = sample_profile(fb, *g);
    CheckReport rep = potential_chain_check(V, st.d, g, psi);
    st.add_check(rep);
    arr.push_back(to_json(rep));
  }

  // self-adjoint track
  if (V.is_real()) {
    for (double z : {-10.0, 0.0, 10.0, 100.0}) {
      SaAprioriReport sr = sa_apriori_check(V, st.d, gp, z, fb);
      sr.delta_bound.name += "_z" + format_double(z);
      sr.weighted_bound.name += "_z" + format_double(z);
      st.add_check(sr.delta_bound);
      st.add_check(sr.weighted_bound);
      arr.push_back(to_json(sr.delta_bound));
      arr.push_back(to_json(sr.weighted_bound));
    }
  }
  st.results["apriori"] = arr;
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["command"] = command_name(cfg.command);
  j["d"] = cfg.d;
  j["n"] = cfg.n;
  j["R"] = cfg.R;
  j["r_doubling"] = cfg.r_doubling;
  j["seed"] = cfg.seed;
  j["delta"] = cfg.delta;
  j["potential_kind"] = cfg.potential.kind;
  j["z_points"] = cfg.z_points.size();
  j["wrn_tol"] = cfg.wrn_tol;
  j["dist_tol"] = cfg.dist_tol;
  j["drift_factor"] = cfg.drift_factor;
  return j;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, int jobs) {
  RunState st(cfg, jobs);
  std::filesystem::create_directories(st.out);
  GridPtr base_grid = make_grid(cfg.n, cfg.R, st.d);
  const Potential V = build_potential(cfg.potential, base_grid);

  switch (cfg.command) {
    case Command::constants:
      run_constants(st);
      break;
    case Command::smallness:
      run_smallness(st, V);
      break;
    case Command::spectrum:
      run_spectrum(st, V);
      break;
    case Command::resolvent_sweep:
      run_sweep(st, V);
      break;
    case Command::identities:
      run_identities(st, V, 10);
      break;
    case Command::full_report:
      run_constants(st);
      run_smallness(st, V);
      run_spectrum(st, V);
      run_sweep(st, V);
      run_identities(st, V, 4);
      run_apriori(st, V);
      break;
  }

  json root;
  root["command"] = command_name(cfg.command);
  root["config"] = config_echo(cfg);
  root["results"] = st.results;
  json checks = json::array();
  bool all_passed = true;
  for (const CheckReport& rep : st.checks) {
    checks.push_back(to_json(rep));
    if (rep.hypothesis_met && !rep.passed) all_passed = false;
  }
  root["checks"] = checks;
  root["all_hypothesis_met_checks_passed"] = all_passed;

  const std::filesystem::path jpath = st.out / "report.json";
  {
    std::ofstream f(jpath, std::ios::binary);
    if (!f) throw IoError("cannot write " + jpath.string());
    f << root.dump(2) << "\n";
    if (!f) throw IoError("write failed: " + jpath.string());
  }
  st.files.push_back(jpath.string());

  RunOutcome outcome;
  outcome.exit_code = all_passed ? 0 : 1;
  outcome.files_written = std::move(st.files);
  return outcome;
}

}  // namespace bispec
