#include "doctest.h"

#include <random>

#include "spectral/cuts.hpp"
#include "spectral/quadrature.hpp"

using namespace spectral;

namespace {

CutSystem pairs(std::vector<std::pair<int, int>> p) {
  CutSystem cs;
  cs.pairs = std::move(p);
  return cs;
}

}  // namespace

TEST_CASE("default pairing sorts by real part") {
  const CVec b{2.0, -1.0, 3.0, 1.0};
  const CutSystem cs = CutSystem::default_for(b);
  REQUIRE(cs.q() == 2);
  CHECK(cs.pairs[0] == std::pair<int, int>{1, 3});
  CHECK(cs.pairs[1] == std::pair<int, int>{0, 2});
  CHECK_THROWS_AS(pairs({{0, 0}}).validate(2), InvalidArgument);
  CHECK_THROWS_AS(pairs({{0, 1}}).validate(4), InvalidArgument);
}

TEST_CASE("y0 on simple configurations") {
  const CVec b{-1.0, 1.0};
  const CutGeometry g(b, CutSystem::default_for(b));
  CHECK(std::abs(g.y0(2.0) - std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(g.y0(cplx(1e6, 3e5)) / cplx(1e6, 3e5) - 1.0) < 1e-11);
  // Left of the cut -1 -> 1 is the upper half plane: y0(x + i0) = i sqrt(1 - x^2).
  CHECK(std::abs(g.y0(cplx(0.3, 1e-9)) - g.y0_left(0, 0.3)) < 1e-8);
  CHECK(std::abs(g.y0_left(0, 0.3) - kI * std::sqrt(1 - 0.09)) < 1e-15);
  CHECK_THROWS_AS(g.y0(0.5), OnCut);

  const CVec b4{-1.0, 1.0, 2.0, 3.0};
  const CutGeometry g4(b4, CutSystem::default_for(b4));
  CHECK(std::abs(g4.y0(10.0) - std::sqrt(99.0 * 56.0)) < 1e-12);
}

TEST_CASE("y0 squares to the product and is continuous off the cuts") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  CVec b;
  for (int k = 0; k < 6; ++k) b.emplace_back(u(rng), u(rng));
  const CutGeometry g(b, CutSystem::default_for(b));
  int checked = 0;
  while (checked < 100) {
    const cplx z(u(rng), u(rng));
    if (g.distance_to_cuts(z) < 1e-3) continue;
    cplx prod = 1.0;
    for (cplx x : b) prod *= z - x;
    const cplx y = g.y0(z);
    CHECK(std::abs(y * y - prod) <= 1e-12 * std::abs(prod));
    // Small displacement does not flip the sign.
    const cplx y2 = g.y0(z + 1e-7);
    CHECK(std::abs(y2 - y) < 1e-3 * std::abs(y) + 1e-6);
    ++checked;
  }
}

TEST_CASE("polyline cut agrees with straight cut away from both") {
  const CVec b{-1.0, 1.0};
  CutSystem bent = CutSystem::default_for(b);
  bent.via = {CVec{cplx(0.0, 0.7)}};
  const CutGeometry straight(b, CutSystem::default_for(b));
  const CutGeometry poly(b, bent);
  for (cplx z : {cplx(0.0, -0.5), cplx(2.0, 1.0), cplx(-3.0, 0.2), cplx(0.0, 1.5)})
    CHECK(std::abs(straight.y0(z) - poly.y0(z)) < 1e-13);
  // Between the two cuts the branches differ by a sign.
  CHECK(std::abs(straight.y0(cplx(0.0, 0.3)) + poly.y0(cplx(0.0, 0.3))) < 1e-13);
  // Left limit on a bent segment matches approach from the left.
  const cplx p = cplx(-0.5, 0.35);
  const cplx d = cplx(1.0, 0.7) / std::abs(cplx(1.0, 0.7));
  CHECK(std::abs(poly.y0(p + 1e-9 * kI * d) - poly.y0_left(0, p)) < 1e-7);
}

TEST_CASE("intersecting cuts are rejected") {
  const CVec b{cplx(-1, 0), cplx(1, 0), cplx(0, -1), cplx(0, 1)};
  CHECK_THROWS_AS(CutGeometry(b, pairs({{0, 1}, {2, 3}})), CutConfigurationError);
}

TEST_CASE("monotone reference direction") {
  const CVec b{-2.0, -1.0, 1.0, 2.0};
  const CutGeometry g(b, CutSystem::default_for(b));
  CHECK(std::abs(g.reference_direction() - 1.0) < 1e-15);
  CHECK_NOTHROW(g.check_monotone());
  const CutGeometry bad(b, pairs({{1, 0}, {2, 3}}));
  CHECK_THROWS_AS(bad.check_monotone(), CutConfigurationError);
}

TEST_CASE("quadrature rules") {
  // int 1/sqrt(1-t^2) = pi; int t^2/sqrt(1-t^2) = pi/2.
  CHECK(std::abs(gauss_chebyshev([](double) { return cplx(1.0); }) - kPi) < 1e-14);
  CHECK(std::abs(gauss_chebyshev([](double t) { return cplx(t * t); }) - kPi / 2) < 1e-14);
  // int_0^1 log(t) = -1, int_0^1 1/sqrt(1-t) = 2.
  CHECK(std::abs(tanh_sinh([](double t, double) { return cplx(std::log(t)); }) + 1.0) < 1e-11);
  CHECK(std::abs(tanh_sinh([](double, double c) { return cplx(1.0 / std::sqrt(c)); }) - 2.0) < 1e-10);
  // Residue of 1/z and of exp(z)/z^2.
  CHECK(std::abs(circle_integral([](cplx z) { return 1.0 / z; }, 0.0, 2.0) - kTwoPiI) < 1e-13);
  CHECK(std::abs(circle_integral([](cplx z) { return std::exp(z) / (z * z); }, 0.0, 1.0) - kTwoPiI) < 1e-12);
  CHECK_THROWS_AS(gauss_chebyshev([](double t) { return cplx(std::sqrt(std::abs(t - 0.3))); }), QuadratureFailure);
}
