#include <doctest.h>

#include <cmath>
#include <random>

#include "bispec/core.hpp"

using namespace bispec;

TEST_CASE("Dimension rejects d <= 4") {
  CHECK_THROWS_AS(Dimension(4), InvalidArgument);
  CHECK_THROWS_AS(Dimension(0), InvalidArgument);
  CHECK(Dimension(5).value() == 5);
}

TEST_CASE("AngularSector eigenvalues") {
  Dimension d(5);
  CHECK(AngularSector(0, d).c_ell == 0.0);
  CHECK(AngularSector(1, d).c_ell == 4.0);   // 1*(1+3)
  CHECK(AngularSector(2, d).c_ell == 10.0);  // 2*(2+3)
  double prev = -1.0;
  for (int ell = 0; ell < 6; ++ell) {
    const double c = AngularSector(ell, d).c_ell;
    CHECK(c > prev);
    prev = c;
  }
  CHECK_THROWS_AS(AngularSector(-1, d), InvalidArgument);
}

TEST_CASE("RadialGrid nodes, weights, volume check") {
  Dimension d(5);
  for (int n : {100, 400}) {
    RadialGrid g(n, 2.0, d);
    auto r = g.r();
    auto w = g.w();
    for (int i = 0; i < n; ++i) {
      CHECK(r[i] > 0.0);
      CHECK(r[i] < g.R());
      if (i) CHECK(r[i] > r[i - 1]);
      CHECK(w[i] > 0.0);
    }
    // sum w_i approximates R^d/d to relative O(h^2)
    double vol = 0.0;
    for (int i = 0; i < n; ++i) vol += w[i];
    const double exact = std::pow(g.R(), 5) / 5.0;
    CHECK(std::abs(vol / exact - 1.0) < 2.0 * g.h() * g.h());
  }
}

TEST_CASE("paper constants closed forms") {
  PaperConstants c5 = paper_constants(Dimension(5));
  CHECK(c5.hardy == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(c5.rellich == doctest::Approx(1.5625).epsilon(1e-15));
  CHECK(c5.hardy_rellich == doctest::Approx(6.25).epsilon(1e-15));
  CHECK(paper_constants(Dimension(6)).rellich == doctest::Approx(9.0));

  // strictly increasing in d, and C_HR > C_H for all d >= 5
  PaperConstants prev = c5;
  for (int d = 6; d <= 16; ++d) {
    PaperConstants c = paper_constants(Dimension(d));
    CHECK(c.hardy > prev.hardy);
    CHECK(c.rellich > prev.rellich);
    CHECK(c.hardy_rellich > prev.hardy_rellich);
    CHECK(c.hardy_rellich > c.hardy);
    prev = c;
  }
  CHECK(paper_constants(Dimension(5)).hardy_rellich >
        paper_constants(Dimension(5)).hardy);

  // large-d asymptotics of the Rellich constant: C_R / d^4 -> 1/16
  const double big = 1e6;
  CHECK(paper_constants(Dimension(static_cast<int>(big))).rellich /
            (big * big * big * big) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-5));
}

TEST_CASE("weighted Hardy constants") {
  Dimension d(5);
  CHECK(weighted_hardy_constant(d, 0.0) == doctest::Approx(2.25));
  CHECK(weighted_hardy_constant(d, 1.0) == doctest::Approx(25.0 / 4.0));
  CHECK(weighted_hardy_constant(d, -1.0) == doctest::Approx(0.25));
}

TEST_CASE("principal square root") {
  CHECK(principal_sqrt(cplx(4.0)) == cplx(2.0));
  CHECK(principal_sqrt(cplx(-1.0)).real() == doctest::Approx(0.0));
  CHECK(principal_sqrt(cplx(-1.0)).imag() == doctest::Approx(1.0));
  // branch cut approached from below must still land on Im > 0
  CHECK(principal_sqrt(cplx(-4.0, -0.0)).imag() == doctest::Approx(2.0));
  const cplx si = principal_sqrt(cplx(0.0, 1.0));
  CHECK(si.real() == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(si.imag() == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK_THROWS_AS(principal_sqrt(cplx(std::nan(""), 0.0)), InvalidArgument);

  // squaring recovers z within 1e-14 relative over a wide magnitude range
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(-6.0, 6.0), ang(-M_PI, M_PI);
  for (int i = 0; i < 10000; ++i) {
    const cplx z = std::polar(std::pow(10.0, mag(rng)), ang(rng));
    const cplx w = principal_sqrt(z);
    CHECK(std::abs(w * w - z) <= 1e-14 * std::abs(z));
    CHECK(w.real() >= 0.0);
    // S_pos wedge fact: Re z >= 0 implies Re sqrt(z) >= |Im sqrt(z)|
    if (z.real() >= 0.0) CHECK(w.real() >= std::abs(w.imag()) - 1e-15);
  }
}

TEST_CASE("classify_region") {
  RegionInfo a = classify_region(cplx(1.0), 0.5);
  CHECK(a.region == Region::SPos);
  CHECK(a.in_cone);
  RegionInfo b = classify_region(cplx(1.0, 1.0), 0.5);
  CHECK(b.region == Region::SPos);
  CHECK_FALSE(b.in_cone);
  RegionInfo c = classify_region(cplx(-1.0), 0.5);
  CHECK(c.region == Region::SNeg);
  CHECK_FALSE(c.in_cone);
  CHECK_THROWS_AS(classify_region(cplx(1.0), 0.0), InvalidArgument);
}

TEST_CASE("gauge wavenumber and apply_gauge") {
  Dimension d(5);
  GridPtr g = make_grid(64, 4.0, d);

  // z = -1: sqrt(z) = i has zero real part, so k = 0 and u is unchanged
  CHECK(gauge_wavenumber(cplx(-1.0)) == 0.0);
  std::vector<cplx> ones(g->n(), cplx(1.0));
  std::vector<cplx> gauged = apply_gauge(ones, *g, cplx(-1.0));
  for (const cplx& v : gauged) CHECK(std::abs(v - cplx(1.0)) < 1e-15);

  // z = 0: k = 0
  CHECK(gauge_wavenumber(cplx(0.0)) == 0.0);

  // z = 4: k = sqrt(2) under the sgn(0) = +1 convention
  CHECK(gauge_wavenumber(cplx(4.0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(gauge_wavenumber(cplx(4.0), SignZeroConvention::minus) ==
        doctest::Approx(-std::sqrt(2.0)));
  gauged = apply_gauge(ones, *g, cplx(4.0));
  auto r = g->r();
  for (int i = 0; i < g->n(); ++i) {
    const cplx expect = std::polar(1.0, -std::sqrt(2.0) * r[i]);
    CHECK(std::abs(gauged[i] - expect) < 1e-14);
  }

  // unimodular multiplier: the weighted L2 norm is preserved exactly
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<cplx> u(g->n());
  for (cplx& v : u) v = cplx(ud(rng), ud(rng));
  std::vector<cplx> gu = apply_gauge(u, *g, cplx(2.0, 3.0));
  for (int i = 0; i < g->n(); ++i)
    CHECK(std::abs(gu[i]) == doctest::Approx(std::abs(u[i])).epsilon(1e-14));

  SpectralPoint sp(cplx(4.0));
  CHECK(sp.region == Region::SPos);
  CHECK(sp.sqrt_z == cplx(2.0));
  CHECK(sp.gauge_k == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("potential families") {
  Dimension d(5);
  GridPtr g = make_grid(200, 8.0, d);
  auto r = g->r();

  SUBCASE("rellich evaluates to alpha/r^4 exactly at nodes") {
    Potential v = Potential::rellich(cplx(0.5, -0.25));
    std::vector<cplx> s = v.sample(*g);
    for (int i = 0; i < g->n(); ++i) {
      const cplx expect = cplx(0.5, -0.25) / std::pow(r[i], 4);
      CHECK(std::abs(s[i] - expect) <= 1e-15 * std::abs(expect));
    }
    CHECK_FALSE(v.is_real());
    CHECK(Potential::rellich(cplx(0.5)).is_real());
  }

  SUBCASE("bump and step are bounded with compact support") {
    Potential b = Potential::bump(cplx(-50.0), 2.0, 0.5);
    CHECK(std::abs(b(2.0) - cplx(-50.0)) < 1e-12);  // peak value = height
    CHECK(b(1.49) == cplx(0.0));
    CHECK(b(2.51) == cplx(0.0));
    Potential st = Potential::step(cplx(-10.0), 1.0);
    CHECK(st(0.5) == cplx(-10.0));
    CHECK(st(1.5) == cplx(0.0));
  }

  SUBCASE("sampled length must match its grid") {
    CHECK_THROWS_AS(Potential::sampled(std::vector<cplx>(7), g),
                    InvalidArgument);
    std::vector<cplx> vals(g->n(), cplx(1.0));
    Potential sp = Potential::sampled(vals, g);
    std::vector<cplx> back = sp.sample(*g);
    CHECK(back.size() == vals.size());
  }

  SUBCASE("radial derivative and repulsivity samples") {
    // Rellich with positive alpha: x . grad V = -4 alpha / r^4 <= 0
    Potential v = Potential::rellich(cplx(2.0));
    std::vector<double> pos = v.sample_r_dV_pos(*g);
    for (double x : pos) CHECK(x == 0.0);
    // analytic bump derivative matches differencing away from the support
    // edges (where the third derivative of the mollifier diverges)
    Potential b = Potential::bump(cplx(3.0), 4.0, 1.5);
    std::vector<double> rdv = b.sample_r_dV(*g);
    std::vector<cplx> vals = b.sample(*g);
    double scale = 0.0;
    for (double v : rdv) scale = std::max(scale, std::abs(v));
    for (int i = 1; i + 1 < g->n(); ++i) {
      if (std::abs((r[i] - 4.0) / 1.5) > 0.8) continue;
      const double fd =
          (vals[i + 1].real() - vals[i - 1].real()) / (2.0 * g->h());
      CHECK(std::abs(rdv[i] - r[i] * fd) <= 2e-2 * scale);
    }
    CHECK_THROWS_AS(Potential::rellich(cplx(0.0, 1.0)).sample_r_dV(*g),
                    InvalidArgument);
  }

  SUBCASE("scaling and conjugation") {
    Potential v = Potential::bump(cplx(2.0, 1.0), 3.0, 1.0);
    Potential w = v.scaled(cplx(0.0, 2.0));
    CHECK(std::abs(w(3.0) - cplx(0.0, 2.0) * v(3.0)) < 1e-14);
    Potential c = v.conjugated();
    CHECK(std::abs(c(3.0) - std::conj(v(3.0))) < 1e-14);
  }
}
