#include "doctest.h"

#include <cmath>

#include "spectral/models.hpp"
#include "spectral/periods.hpp"

using namespace spectral;

namespace {

CurveBranch gaussian_branch(double s) {
  const auto [b, a] = models::gaussian_branch_points(s);
  const CVec betas{a, b};
  return CurveBranch(Potential::gaussian(), CutGeometry(betas, CutSystem::default_for(betas)));
}

CurveBranch cubic_one_cut(double s, CVec via = {}) {
  const auto m = models::cubic_m1_curve(1.0, s, 0);
  const CVec betas{m.beta1, m.beta2};
  CutSystem cs = CutSystem::default_for(betas);
  if (!via.empty()) cs.via = {via};
  return CurveBranch(Potential::cubic(1.0), CutGeometry(betas, cs));
}

// N = 2 with four simple roots: every such curve is a genuine two-cut curve.
SpectralCurve two_cut_curve() { return build_curve(Potential::cubic(1.0), CVec{-0.4, cplx(0.1, 0.05)}); }

CurveBranch two_cut_branch(std::vector<CVec> via = {}) {
  const SpectralCurve c = two_cut_curve();
  const BranchConfiguration cfg = classify(c);
  CutSystem cs = CutSystem::default_for(cfg.betas);
  cs.via = std::move(via);
  return CurveBranch(c.potential, CutGeometry(cfg.betas, cs));
}

// Closed forms for the semicircle: l = s - s log s, F = 3 s^2 / 4 - (s^2 / 2) log s.
double gaussian_l(double s) { return s - s * std::log(s); }
double gaussian_F(double s) { return 0.75 * s * s - 0.5 * s * s * std::log(s); }

}  // namespace

TEST_CASE("A-periods on the unit cut") {
  const CVec b{-1.0, 1.0};
  const CutGeometry g(b, CutSystem::default_for(b));
  const cplx inv = a_period(g, 0, [](cplx, cplx y0) { return 1.0 / y0; });
  // Shrinking the contour onto the cut must agree with the residue at infinity.
  const cplx circle = circle_integral([&](cplx z) { return 1.0 / g.y0(z); }, 0.0, 3.0);
  CHECK(std::abs(circle - kTwoPiI) < 1e-12);
  CHECK(std::abs(inv - circle) < 1e-12);
  CHECK(std::abs(a_period(g, 0, [](cplx z, cplx y0) { return z / y0; })) < 1e-13);
  CHECK(std::abs(a_period(g, 0, [](cplx, cplx y0) { return y0; }) + kPi * kI) < 1e-12);
  CHECK_THROWS_AS(a_period(g, 1, [](cplx, cplx) { return cplx(1.0); }), InvalidArgument);
}

TEST_CASE("A-period on a bent cut equals the straight one") {
  const CVec b{cplx(-1.0, 0.2), cplx(1.5, -0.1), cplx(3.0, 0.5), cplx(4.0, 1.0)};
  CutSystem bent = CutSystem::default_for(b);
  bent.via = {CVec{cplx(0.2, 0.9)}, CVec{}};
  const CutGeometry straight(b, CutSystem::default_for(b));
  const CutGeometry poly(b, bent);
  auto f = [](cplx z, cplx y0) { return (z * z + 1.0) / y0; };
  CHECK(std::abs(a_period(straight, 0, f) - a_period(poly, 0, f)) < 1e-10);
  CHECK(std::abs(a_period(straight, 1, f) - a_period(poly, 1, f)) < 1e-10);
}

TEST_CASE("'t Hooft parameters") {
  SUBCASE("gaussian") {
    const SpectralCurve c = build_curve(Potential::gaussian(), CVec{-1.0});
    const BranchConfiguration cfg = classify(c);
    const HooftParams h = hooft_from_curve(c, cfg, CutSystem::default_for(cfg.betas));
    REQUIRE(h.s.size() == 1);
    CHECK(std::abs(h.s[0] - 0.25) < 1e-12);
    CHECK(h.residual < 1e-12);
  }
  SUBCASE("cubic one-cut branch") {
    const HooftParams h = hooft_params(cubic_one_cut(0.1));
    CHECK(std::abs(h.total - 0.1) < 1e-9);
    CHECK(h.residual < 1e-9);
  }
  SUBCASE("two cuts add up to s") {
    const SpectralCurve c = two_cut_curve();
    const BranchConfiguration cfg = classify(c);
    REQUIRE(cfg.q == 2);
    const HooftParams h = hooft_from_curve(c, cfg, CutSystem::default_for(cfg.betas));
    CHECK(std::abs(h.total - 0.1) < 1e-9);
    CHECK(h.residual < 1e-9);
  }
  SUBCASE("no cuts") {
    const SpectralCurve c = build_curve(Potential::cubic(1.0), CVec{0.0, 0.0});
    const BranchConfiguration cfg = classify(c);
    CHECK(cfg.q == 0);
    const HooftParams h = hooft_from_curve(c, cfg, CutSystem::default_for(cfg.betas));
    CHECK(h.s.empty());
    CHECK(std::abs(h.total) == 0.0);
  }
  SUBCASE("wrong branch points are rejected") {
    const SpectralCurve c = build_curve(Potential::gaussian(), CVec{-1.0});
    BranchConfiguration cfg = classify(c);
    cfg.betas = {-1.1, 1.0};
    CHECK_THROWS_AS(hooft_from_curve(c, cfg, CutSystem::default_for(cfg.betas)), BranchError);
  }
}

TEST_CASE("Abelian basis normalisation") {
  SUBCASE("one cut") {
    const CVec b{-1.0, 1.0};
    const CutGeometry g(b, CutSystem::default_for(b));
    const AbelianBasis basis = abelian_basis(g, 3);
    CHECK(basis.p.empty());
    CHECK(basis.period_matrix.size() == 0);
    CHECK(basis.P[0].degree() == 0);
    CHECK(std::abs(basis.P[0][0] - 1.0) < 1e-15);
  }
  SUBCASE("two symmetric cuts") {
    const CVec b{-2.0, -1.0, 1.0, 2.0};
    const CutGeometry g(b, CutSystem::default_for(b));
    const AbelianBasis basis = abelian_basis(g, 4);
    REQUIRE(basis.p.size() == 1);
    CHECK(basis.p[0].degree() == 0);
    CHECK(std::abs(a_period(g, 0, [&](cplx z, cplx y0) { return basis.p[0](z) / y0; }) - 1.0) < 1e-10);
    CHECK(basis.condition >= 1.0);
  }
  SUBCASE("generic three cuts") {
    const CVec b{cplx(-3.0, 0.1), cplx(-2.0, -0.4), cplx(-0.5, 0.3), cplx(0.7, 0.2), cplx(1.5, -1.0), cplx(2.5, 0.0)};
    const CutGeometry g(b, CutSystem::default_for(b));
    const AbelianBasis basis = abelian_basis(g, 4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const cplx v = a_period(g, i, [&](cplx z, cplx y0) { return basis.p[j](z) / y0; });
        CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
      for (const ComplexPoly& P : basis.P)
        CHECK(std::abs(a_period(g, i, [&](cplx z, cplx y0) { return P(z) / y0; })) < 1e-10);
    }
    // dOmega_n = (n/2 z^{n-1} + P_n/y0) dz has a pole of order n+1 at infinity and nothing else.
    for (int n = 0; n <= 4; ++n) {
      const LaurentSeries ser = poly_times_y0(basis.P[static_cast<std::size_t>(n)], b, -1, -2);
      if (n == 0) {
        CHECK(std::abs(ser.coeff(-1) - 1.0) < 1e-12);
      } else {
        CHECK(std::abs(ser.coeff(n - 1) - 0.5 * n) < 1e-12);
        for (int k = -1; k < n - 1; ++k) CHECK(std::abs(ser.coeff(k)) < 1e-10);
      }
    }
  }
  SUBCASE("coincident cuts are degenerate") {
    const CVec b{-2.0, -1.0, cplx(-2.0, 1e-14), cplx(-1.0, 1e-14)};
    CutSystem cs;
    cs.pairs = {{0, 1}, {2, 3}};
    CHECK_THROWS(abelian_basis(CutGeometry(b, cs), 2));
  }
}

TEST_CASE("spectral density") {
  const CurveBranch br = gaussian_branch(0.25);
  CHECK(std::abs(spectral_density(br, 0, 0.0).value - 1.0 / (2.0 * kPi)) < 1e-15);
  const DensityValue end = spectral_density(br, 0, 1.0);
  CHECK(end.endpoint);
  CHECK(end.value == cplx{});
  CHECK_THROWS_AS(spectral_density(br, 0, cplx(0.0, 0.5)), InvalidArgument);

  // Integrating rho along each cut gives the partial charges.
  const CurveBranch two = two_cut_branch();
  const HooftParams h = hooft_params(two);
  for (int j = 0; j < 2; ++j) {
    const cplx a = two.geometry().start(j), b = two.geometry().end(j);
    const cplx mass = tanh_sinh([&](double t, double) { return spectral_density(two, j, a + t * (b - a)).value; }) *
                      std::abs(b - a);
    CHECK(std::abs(mass - h.s[static_cast<std::size_t>(j)]) < 1e-9);
  }
}

TEST_CASE("l parameters: closed form and two independent routes") {
  for (double s : {0.05, 0.25, 1.3}) {
    const CurveBranch br = gaussian_branch(s);
    const cplx la = l_parameters(br)[0];
    const cplx lb = l_parameters_limit(br)[0];
    CHECK(std::abs(la - gaussian_l(s)) < 1e-10);
    CHECK(std::abs(lb - gaussian_l(s)) < 1e-8);
  }
  const CurveBranch one = cubic_one_cut(0.1);
  CHECK(std::abs(l_parameters(one)[0] - l_parameters_limit(one)[0]) < 1e-8);

  // Even quartic, symmetric real cut: every pair of symmetric branch points is a curve.
  const CVec qb{-1.5, 1.5};
  const CurveBranch quartic(Potential(CVec{0.0, -0.5, 0.0}), CutGeometry(qb, CutSystem::default_for(qb)));
  CHECK(quartic.consistency_defect() < 1e-14);
  CHECK(std::abs(l_parameters(quartic)[0].imag()) < 1e-12);
  CHECK(std::abs(l_parameters(quartic)[0] - l_parameters_limit(quartic)[0]) < 1e-8);

  const CurveBranch two = two_cut_branch();
  const CVec la = l_parameters(two), lb = l_parameters_limit(two);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(la[static_cast<std::size_t>(j)] - lb[static_cast<std::size_t>(j)]) < 1e-8);
  CHECK(std::abs(b_period(two, 0) - (la[1] - la[0])) < 1e-9);
  CHECK(std::abs(b_period(two, 1)) == 0.0);
}

TEST_CASE("prepotential") {
  CHECK(std::abs(prepotential(gaussian_branch(0.25)) - gaussian_F(0.25)) < 1e-10);
  const double h = 1e-4;
  const cplx dF = (prepotential(gaussian_branch(0.25 + h)) - prepotential(gaussian_branch(0.25 - h))) / (2 * h);
  CHECK(std::abs(dF - l_parameters(gaussian_branch(0.25))[0]) < 1e-6);

  // Same along the cubic one-cut family.
  const cplx dFc = (prepotential(cubic_one_cut(0.1 + h)) - prepotential(cubic_one_cut(0.1 - h))) / (2 * h);
  CHECK(std::abs(dFc - l_parameters(cubic_one_cut(0.1))[0]) < 1e-6);
}

TEST_CASE("bent cuts leave l and F unchanged") {
  const CurveBranch straight = cubic_one_cut(0.05);
  const cplx mid = 0.5 * (straight.geometry().start(0) + straight.geometry().end(0));
  const CurveBranch bent = cubic_one_cut(0.05, CVec{mid + cplx(0.0, 0.2)});
  CHECK(std::abs(prepotential(straight) - prepotential(bent)) < 1e-8);
  CHECK(std::abs(l_parameters(straight)[0] - l_parameters(bent)[0]) < 1e-7);

  const CurveBranch two = two_cut_branch();
  const auto& g = two.geometry();
  const cplx m0 = 0.5 * (g.start(0) + g.end(0)), m1 = 0.5 * (g.start(1) + g.end(1));
  const CurveBranch two_bent = two_cut_branch({CVec{m0 - cplx(0.0, 0.15)}, CVec{m1 + cplx(0.05, 0.1)}});
  const CVec a = l_parameters(two), b = l_parameters(two_bent);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]) < 1e-7);
  CHECK(std::abs(prepotential(two) - prepotential(two_bent)) < 1e-7);
}

TEST_CASE("moments at infinity follow the Laurent expansion of y") {
  const CurveBranch two = two_cut_branch();
  const LaurentSeries ser = poly_times_y0(two.A(), two.geometry().betas(), 1, -6);
  CHECK(std::abs(moment_at_infinity(two, 0) - 0.1) < 1e-12);
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(moment_at_infinity(two, n) + 0.5 * ser.coeff(-n - 1)) < 1e-11);
}

TEST_CASE("generating differential identity") {
  for (const CurveBranch& br : {cubic_one_cut(0.1), two_cut_branch()}) {
    const AbelianBasis basis = abelian_basis(br.geometry(), br.potential().N() + 1);
    const GeneratingDefect d = generating_defect(br, basis, hooft_params(br));
    CHECK(d.polynomial < 1e-8);
    CHECK(d.at_branch_points < 1e-8);
  }
}
