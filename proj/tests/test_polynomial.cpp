#include "doctest.h"

#include <random>

#include "spectral/polynomial.hpp"

using namespace spectral;

namespace {

cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("poly arithmetic and evaluation") {
  const ComplexPoly p{1.0, 0.0, -2.0};  // 1 - 2 z^2
  CHECK(p.degree() == 2);
  CHECK(std::abs(p(cplx(2.0, 0.0)) - cplx(-7.0, 0.0)) < 1e-15);
  CHECK(p.derivative().degree() == 1);
  CHECK(std::abs(p.derivative()[1] + 4.0) < 1e-15);
  const ComplexPoly q = p * ComplexPoly{0.0, 1.0};
  CHECK(q.degree() == 3);
  CHECK((p - p).is_zero());
  CHECK(ComplexPoly{0.0, 0.0}.is_zero());
}

TEST_CASE("find_roots small cases") {
  auto r = find_roots(ComplexPoly{-1.0, 0.0, 1.0});
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(std::abs(r[0] + 1.0) < 1e-14);
  CHECK(std::abs(r[1] - 1.0) < 1e-14);

  auto z = find_roots(ComplexPoly{0.0, 0.0, 1.0});
  CHECK(z.size() == 2);
  CHECK(std::abs(z[0]) == 0.0);
  CHECK(std::abs(z[1]) == 0.0);

  // (z^2-1)^2 + 0.1 z
  const ComplexPoly quartic{1.0, 0.1, -2.0, 0.0, 1.0};
  CHECK(reconstruction_error(quartic, find_roots(quartic)) < 1e-10);

  CHECK_THROWS_AS(find_roots(ComplexPoly{3.0}), InvalidArgument);
}

TEST_CASE("find_roots reconstructs random polynomials") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    CVec c(static_cast<std::size_t>(n) + 1);
    for (auto& a : c) a = random_cplx(rng, 3.0);
    const ComplexPoly p(c);
    CHECK(reconstruction_error(p, find_roots(p)) < 1e-10);
  }
}

TEST_CASE("find_roots with clustered roots") {
  const CVec roots{1.0, 1.0, 1.0, cplx(-0.5, 0.2)};
  const ComplexPoly p = ComplexPoly::from_roots(roots);
  const auto r = find_roots(p);
  CHECK(reconstruction_error(p, r) < 1e-12);
  const RootSet rs = cluster_roots(r, 1e-3);
  REQUIRE(rs.roots.size() == 2);
  CHECK(rs.total_multiplicity() == 4);
}

TEST_CASE("cluster_roots") {
  const CVec a{1.0, 1.0 + 1e-12, -1.0};
  const RootSet rs = cluster_roots(a, 1e-8);
  REQUIRE(rs.roots.size() == 2);
  CHECK(std::abs(rs.roots[0] + 1.0) < 1e-15);
  CHECK(rs.multiplicities[0] == 1);
  CHECK(rs.multiplicities[1] == 2);

  const CVec zeros{0.0, 0.0, 0.0};
  const RootSet z = cluster_roots(zeros, 1e-8);
  REQUIRE(z.roots.size() == 1);
  CHECK(z.multiplicities[0] == 3);

  // A chain 0, 0.8, 1.6 at tol 1: single linkage merges, diameter 1.6 > tol.
  const CVec chain{0.0, 0.8, 1.6};
  try {
    (void)cluster_roots(chain, 1.0);
    FAIL("expected AmbiguousClustering");
  } catch (const AmbiguousClustering& e) {
    CHECK(e.loose() == std::vector<int>{3});
    CHECK(e.tight() == std::vector<int>{1, 2});
  }

  CHECK_THROWS_AS(cluster_roots(a, 0.0), InvalidArgument);
}

TEST_CASE("cluster_roots at the cubic triple point") {
  const double s = 2.0 * std::pow(1.0 / 3.0, 1.5);
  const ComplexPoly p{-4.0 / 3.0 + 1.0, -4.0 * s, -2.0, 0.0, 1.0};
  const RootSet rs = cluster_roots(find_roots(p), 1e-3);
  REQUIRE(rs.roots.size() == 2);
  std::vector<int> m = rs.multiplicities;
  std::sort(m.begin(), m.end());
  CHECK(m == std::vector<int>{1, 3});
}

TEST_CASE("discriminant") {
  const double s = 0.3;
  CHECK(std::abs(discriminant(ComplexPoly{-4.0 * s, 0.0, 1.0}) - 16.0 * s) < 1e-13);
  const CVec rep{1.0, 1.0, -2.0};
  CHECK(std::abs(discriminant(ComplexPoly::from_roots(rep))) < 1e-12);
  CHECK_THROWS_AS(discriminant(ComplexPoly{1.0, 1.0}), InvalidArgument);

  // Depressed quartic z^4 + p z^2 + q z + r: 256 r^3 - 128 p^2 r^2 + 144 p q^2 r - 27 q^4 + 16 p^4 r - 4 p^3 q^2.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const cplx pp = random_cplx(rng), qq = random_cplx(rng), rr = random_cplx(rng);
    const cplx expect = 256.0 * rr * rr * rr - 128.0 * pp * pp * rr * rr + 144.0 * pp * qq * qq * rr -
                        27.0 * qq * qq * qq * qq + 16.0 * pp * pp * pp * pp * rr -
                        4.0 * pp * pp * pp * qq * qq;
    const cplx got = discriminant(ComplexPoly{rr, qq, pp, 0.0, 1.0});
    CHECK(std::abs(got - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("discriminant agrees with the root product") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    CVec roots(static_cast<std::size_t>(n));
    for (auto& r : roots) r = random_cplx(rng, 2.0);
    const cplx lead = random_cplx(rng) + 1.5;
    const ComplexPoly p = ComplexPoly::from_roots(roots, lead);
    const cplx a = discriminant(p);
    const cplx b = discriminant_from_roots(roots, lead);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
  }
}

TEST_CASE("plus projection") {
  const CVec b{-1.0, 1.0};
  const ComplexPoly one = plus_projection(ComplexPoly{0.0, 1.0}, b);
  CHECK(one.degree() == 0);
  CHECK(std::abs(one[0] - 1.0) < 1e-15);
  const ComplexPoly zz = plus_projection(ComplexPoly{0.0, 0.0, 1.0}, b);
  CHECK(zz.degree() == 1);
  CHECK(std::abs(zz[1] - 1.0) < 1e-15);
  CHECK(std::abs(zz[0]) < 1e-15);

  const CVec b2{cplx(-1.2, 0.1), cplx(-0.7, -0.3)};
  const ComplexPoly w = plus_projection(ComplexPoly{-1.0, 0.0, 1.0}, b2);
  CHECK(std::abs(w[1] - 1.0) < 1e-15);
  // z^2/sqrt((z-b1)(z-b2)) = z + (b1+b2)/2 + O(1/z); the root of this is alpha = -u.
  CHECK(std::abs(w[0] - (b2[0] + b2[1]) / 2.0) < 1e-15);
}

TEST_CASE("plus projection remainder decays") {
  std::mt19937_64 rng(3);
  for (int q = 1; q <= 3; ++q) {
    CVec b(static_cast<std::size_t>(2 * q));
    for (auto& x : b) x = random_cplx(rng);
    CVec c(static_cast<std::size_t>(q + 3));
    for (auto& x : c) x = random_cplx(rng);
    const ComplexPoly numer(c);
    const ComplexPoly plus = plus_projection(numer, b);
    CHECK(plus.degree() == numer.degree() - q);
    // Along the positive real axis far away principal sqrt of the product is the right branch.
    for (double R : {1e3, 1e4}) {
      const cplx z(R, 0.37 * R);
      cplx prod = 1.0;
      for (cplx x : b) prod *= (1.0 - x / z);
      const cplx y0 = std::pow(z, q) * std::sqrt(prod);
      const cplx rem = numer(z) / y0 - plus(z);
      CHECK(std::abs(rem) * R < 20.0);
    }
  }
}

TEST_CASE("sqrt product series squares back") {
  const CVec b{cplx(0.3, 0.1), -1.0, cplx(2.0, -0.5), 0.25};
  const CVec s = sqrt_product_series(b, 10);
  CVec sq(11, 0.0);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; i + j <= 10; ++j) sq[static_cast<std::size_t>(i + j)] += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
  const ComplexPoly q = ComplexPoly::from_roots(b);  // z^4 ... ; Q(w) = w^4 q(1/w) reversed
  for (int k = 0; k <= 4; ++k) CHECK(std::abs(sq[static_cast<std::size_t>(k)] - q[4 - k]) < 1e-14);
  for (int k = 5; k <= 10; ++k) CHECK(std::abs(sq[static_cast<std::size_t>(k)]) < 1e-13);
}
