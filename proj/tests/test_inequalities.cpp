#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bispec/discretize.hpp"
#include "bispec/inequalities.hpp"

using namespace bispec;

TEST_CASE("pencil solvers agree with the dense oracle at n <= 400") {
  Dimension d(5);
  AngularSector s0(0, d);
  GridPtr g = make_grid(200, 10.0, d);

  SUBCASE("minimum of the Hardy pencil") {
    BandedMatrix A = gradient_form(*g, d, s0, 0.0);
    BandedMatrix B = diag_form(*g, -1.0);
    const double iter = pencil_extreme(A, B, false);
    const double dense = pencil_extreme_dense(A, B, false);
    CHECK(iter == doctest::Approx(dense).epsilon(1e-8));
  }
  SUBCASE("maximum of a smallness pencil") {
    Potential V = Potential::bump(cplx(-2.0), 4.0, 1.5);
    std::vector<cplx> vs = V.sample(*g);
    BandedMatrix M = BandedMatrix::zeros(g->n(), 0, 0);
    auto r = g->r();
    for (int i = 0; i < g->n(); ++i)
      M.ref(i, i) = std::pow(r[i], 4) * std::norm(vs[i]);
    BandedMatrix K = gradient_form(*g, d, s0, -1.0);
    const double iter = pencil_extreme(M, K, true);
    const double dense = pencil_extreme_dense(M, K, true);
    CHECK(iter == doctest::Approx(dense).epsilon(1e-8));
  }
}

TEST_CASE("constant estimates: bounds, monotonicity, sectors") {
  Dimension d(5);
  AngularSector s0(0, d);
  const double R = 20.0;

  SUBCASE("estimates never fall below the sharp constants") {
    GridPtr g = make_grid(500, R, d);
    for (auto kind : {ConstantKind::hardy, ConstantKind::rellich,
                      ConstantKind::hardy_rellich}) {
      ConstantEstimate e = estimate_constant(kind, d, g, s0);
      CHECK(e.discrete >= e.analytic - 1e-9);
    }
    ConstantEstimate w =
        estimate_constant(ConstantKind::weighted_hardy, d, g, s0, -1.0);
    CHECK(w.analytic == doctest::Approx(0.25));
    CHECK(w.discrete >= w.analytic - 1e-9);
  }

  SUBCASE("nested refinement decreases the estimates") {
    for (auto kind : {ConstantKind::hardy, ConstantKind::rellich}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int n : {250, 500, 1000, 2000}) {
        ConstantEstimate e =
            estimate_constant(kind, d, make_grid(n, R, d), s0);
        CHECK(e.discrete < prev * (1.0 + 1e-12));
        prev = e.discrete;
      }
    }
  }

  SUBCASE("ell = 1 sector gives larger estimates (sharp in the radial one)") {
    GridPtr g = make_grid(400, R, d);
    AngularSector s1(1, d);
    for (auto kind : {ConstantKind::hardy, ConstantKind::rellich}) {
      ConstantEstimate e0 = estimate_constant(kind, d, g, s0);
      ConstantEstimate e1 = estimate_constant(kind, d, g, s1);
      CHECK(e1.discrete > e0.discrete);
    }
  }
}

TEST_CASE("smallness coefficient") {
  Dimension d(5);
  AngularSector s0(0, d);

  SUBCASE("zero potential") {
    GridPtr g = make_grid(300, 10.0, d);
    CHECK(smallness_coefficient(Potential::zero(), d, g, s0) == 0.0);
  }

  SUBCASE("Rellich coupling: a -> 2|alpha|/(d-4) from below, monotone") {
    double prev = 0.0;
    for (int n : {250, 500, 1000}) {
      GridPtr g = make_grid(n, 20.0, d);
      const double a =
          smallness_coefficient(Potential::rellich(cplx(0.5)), d, g, s0);
      CHECK(a < 1.0);  // limit 2*0.5/(5-4) = 1
      CHECK(a > prev);
      prev = a;
      // cross-check against the weighted Hardy estimate (gamma = -1):
      // a = |alpha| / sqrt(wH_discrete)
      ConstantEstimate wh =
          estimate_constant(ConstantKind::weighted_hardy, d, g, s0, -1.0);
      CHECK(a == doctest::Approx(0.5 / std::sqrt(wh.discrete)).epsilon(1e-7));
    }
  }

  SUBCASE("homogeneity |c| a under complex scaling") {
    GridPtr g = make_grid(300, 12.0, d);
    Potential V = Potential::bump(cplx(1.0, -0.5), 4.0, 2.0);
    const double a = smallness_coefficient(V, d, g, s0);
    const cplx c(3.0, 4.0);
    const double ac = smallness_coefficient(V.scaled(c), d, g, s0);
    CHECK(ac == doctest::Approx(5.0 * a).epsilon(1e-10));
  }

  SUBCASE("sector monotonicity: the radial sector dominates") {
    GridPtr g = make_grid(250, 12.0, d);
    Potential V = Potential::bump(cplx(2.0), 4.0, 2.0);
    const double a0 = smallness_coefficient(V, d, g, AngularSector(0, d));
    const double a1 = smallness_coefficient(V, d, g, AngularSector(1, d));
    const double a2 = smallness_coefficient(V, d, g, AngularSector(2, d));
    CHECK(a0 >= a1);
    CHECK(a1 >= a2);
    static constexpr int ells[] = {0, 1, 2};
    CHECK(smallness_over_sectors(V, d, g, ells) == doctest::Approx(a0));
  }
}

TEST_CASE("rellich smallness coefficient") {
  Dimension d(5);
  AngularSector s0(0, d);

  SUBCASE("zero potential") {
    GridPtr g = make_grid(300, 10.0, d);
    CHECK(rellich_smallness_coefficient(Potential::zero(), d, g, s0) == 0.0);
  }

  SUBCASE("Rellich coupling: a_delta -> |alpha|/sqrt(C_R) from below") {
    double prev = 0.0;
    for (int n : {250, 500, 1000}) {
      GridPtr g = make_grid(n, 20.0, d);
      const double a =
          rellich_smallness_coefficient(Potential::rellich(cplx(0.5)), d, g, s0);
      CHECK(a < 0.5 / 1.25);
      CHECK(a > prev);
      prev = a;
      // cross-check: a = |alpha| / sqrt(Rellich_discrete)
      ConstantEstimate re = estimate_constant(ConstantKind::rellich, d, g, s0);
      CHECK(a == doctest::Approx(0.5 / std::sqrt(re.discrete)).epsilon(1e-7));
    }
  }

  SUBCASE("Hardy-Rellich chaining against the smallness coefficient") {
    GridPtr g = make_grid(300, 15.0, d);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ud(0.3, 1.0);
    for (int t = 0; t < 10; ++t) {
      Potential V = Potential::bump(cplx(2.0 * ud(rng), ud(rng)),
                                    2.0 + 6.0 * ud(rng), 1.0 + ud(rng));
      const double a = smallness_coefficient(V, d, g, s0);
      const double ad = rellich_smallness_coefficient(V, d, g, s0);
      CHECK(ad <= a / std::sqrt(6.25) + 1e-9);
    }
  }
}

TEST_CASE("repulsivity coefficient") {
  Dimension d(5);
  AngularSector s0(0, d);
  GridPtr g = make_grid(400, 10.0, d);

  SUBCASE("non-increasing potentials have vanishing positive part") {
    CHECK(repulsivity_coefficient(Potential::rellich(cplx(2.0)), d, g, s0) ==
          0.0);
    CHECK(repulsivity_coefficient(Potential::step(cplx(1.0), 3.0), d, g, s0) ==
          0.0);  // step DOWN at r=3: derivative negative
  }

  SUBCASE("complex potential is rejected") {
    CHECK_THROWS_AS(
        repulsivity_coefficient(Potential::rellich(cplx(0.0, 1.0)), d, g, s0),
        InvalidArgument);
  }

  SUBCASE("attractive well with rising inner edge is strictly positive") {
    GridPtr g200 = make_grid(200, 10.0, d);
    Potential V = Potential::step(cplx(-1.0), 2.0);
    const double a = repulsivity_coefficient(V, d, g200, s0);
    CHECK(a > 0.0);
    // dense pencil oracle at n = 200
    const std::vector<double> rdv = V.sample_r_dV_pos(*g200);
    BandedMatrix P = BandedMatrix::zeros(200, 0, 0);
    for (int i = 0; i < 200; ++i) P.ref(i, i) = 0.25 * rdv[i];
    BandedOperator lap = build_radial_laplacian(d, s0, g200);
    const double dense =
        pencil_extreme_dense(P, lap.m.multiply(lap.m), true);
    CHECK(a == doctest::Approx(dense).epsilon(1e-8));
  }
}

TEST_CASE("admissibility threshold") {
  SUBCASE("coefficients of the condition confirmed by direct substitution") {
    Dimension d(5);
    // c1 = 4 d^2 (d-3) / ((d-2)(d-4) sqrt(C_H)) = (200/3)/1.5
    const double c1 = (4.0 * 25.0 * 2.0 / 3.0) / 1.5;
    // c2 = 4 d sqrt(d) / ((d-4) sqrt((d-2)(d-4)) C_H^{3/4})
    const double c2 = (20.0 * std::sqrt(5.0) / std::sqrt(3.0)) /
                      std::pow(1.5, 1.5);
    CHECK(c1 == doctest::Approx(44.4444444444).epsilon(1e-9));
    CHECK(c2 == doctest::Approx(14.0545).epsilon(1e-4));
    for (double a : {0.001, 0.01, 0.02}) {
      CHECK(admissibility_lhs(a, d) ==
            doctest::Approx(c1 * a + c2 * std::pow(a, 1.5)).epsilon(1e-12));
    }
  }

  SUBCASE("F(0) = 0 and the root satisfies F(a*) = 1") {
    for (int dv = 5; dv <= 12; ++dv) {
      Dimension d(dv);
      CHECK(admissibility_lhs(0.0, d) == 0.0);
      const double astar = admissible_threshold(d);
      CHECK(astar > 0.0);
      CHECK(std::isfinite(astar));
      CHECK(admissibility_lhs(astar, d) == doctest::Approx(1.0).epsilon(1e-10));
    }
    // d=5 sanity bracket from the coefficient arithmetic
    const double astar5 = admissible_threshold(Dimension(5));
    CHECK(astar5 > 0.020);
    CHECK(astar5 < 0.023);
  }

  SUBCASE("F is strictly increasing on an a-ladder") {
    Dimension d(7);
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double v = admissibility_lhs(0.005 * i, d);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("cone threshold") {
  Dimension d(5);
  CHECK(cone_threshold(1.0, d) == doctest::Approx(0.625));
  CHECK(cone_threshold(1e9, d) == doctest::Approx(1.25).epsilon(1e-8));
  CHECK(cone_threshold(1e-9, d) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_THROWS_AS(cone_threshold(0.0, d), InvalidArgument);
  CHECK_THROWS_AS(cone_threshold(-1.0, d), InvalidArgument);
}

TEST_CASE("self-adjoint and non-self-adjoint constants") {
  Dimension d(5);
  SUBCASE("a = 0 values") {
    SaConstants sc = sa_constants(d, 0.0);
    CHECK(sc.c_tilde == doctest::Approx(1.2));
    CHECK(sc.c == doctest::Approx(0.96));
    CHECK(nsa_constant(d, 0.0) == doctest::Approx(0.8));
  }
  SUBCASE("poles") {
    CHECK(sa_constants(d, 0.999).c_tilde > 100.0);
    CHECK_THROWS_AS(sa_constants(d, 1.0), InvalidArgument);
    // pole of c_{a,d} at sqrt(C_R C_HR) = 3.125
    CHECK(nsa_constant(d, 3.1) > 10.0);
    CHECK_THROWS_AS(nsa_constant(d, 3.125), InvalidArgument);
  }
  SUBCASE("positivity") {
    for (double a : {0.0, 0.3, 0.9}) {
      SaConstants sc = sa_constants(d, a);
      CHECK(sc.c > 0.0);
      CHECK(sc.c_tilde > 0.0);
    }
  }
}

TEST_CASE("admissibility report") {
  Dimension d(5);
  GridPtr g = make_grid(300, 10.0, d);
  AdmissibilityReport yes =
      admissibility_report(Potential::rellich(cplx(0.005)), d, g);
  CHECK(yes.admissible);
  CHECK(yes.a_measured < yes.a_star);
  AdmissibilityReport no =
      admissibility_report(Potential::bump(cplx(-50.0), 2.0, 0.5), d, g);
  CHECK_FALSE(no.admissible);
}
