#include "doctest.h"

#include <cmath>

#include "spectral/curve.hpp"
#include "spectral/models.hpp"
#include "spectral/scaling.hpp"

using namespace spectral;

namespace {

const double kSstar = 2.0 * std::pow(1.0 / 3.0, 1.5);

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
  return g;
}

// u0 data at s = -0.3, the regular start for approaching -s*.
CVec u0_start() {
  const auto m = models::cubic_m1_curve(1.0, -0.3, 0);
  return {m.beta1, m.beta2};
}

// Exact singular configuration of the u0 family.
models::CubicM1 u0_singular() { return models::cubic_m1_from_u(1.0, -kSstar, -1.0 / std::sqrt(3.0)); }

cplx merging_root(const models::CubicM1& m) {
  return std::abs(m.beta1 - m.alpha) < std::abs(m.beta2 - m.alpha) ? m.beta1 : m.beta2;
}

}  // namespace

TEST_CASE("painleve-I tritronquee") {
  const ODESolution s = painleve1(linspace(-16.0, 0.0, 1601));
  CHECK(std::abs(s.values.front()[0] + std::sqrt(16.0 / 6.0)) <= 1e-2);
  CHECK(s.residual_norm <= 1e-8);
  CHECK_FALSE(s.blew_up);
  // Starting further out changes the solution at x = 0 only through the truncated series.
  const ODESolution far = painleve1(linspace(-40.0, 0.0, 4001));
  CHECK(std::abs(far.values.back()[0] - s.values.back()[0]) < 1e-5);
  CHECK(std::abs(far.values.back()[0] + 0.18755) < 1e-4);
}

TEST_CASE("painleve-I first real pole is stable under refinement") {
  const auto grid = linspace(-16.0, 3.0, 1901);
  const ODESolution fine = painleve1(grid);
  OdeGridOptions coarse;
  coarse.ode.rtol = 1e-10;
  coarse.ode.atol = 1e-12;
  const ODESolution rough = painleve1(grid, coarse);
  REQUIRE(fine.blew_up);
  REQUIRE(rough.blew_up);
  CHECK(fine.blowup_x > 2.0);
  CHECK(fine.blowup_x < 3.0);
  CHECK(std::abs(fine.blowup_x - rough.blowup_x) <= 1e-4);
}

TEST_CASE("wrong asymptotic branch blows up at once") {
  const auto a = tritronquee_asymptotics(-16.0);
  // Same equation as Painleve-I (B = 2, C = 1/2) started on the positive root.
  CHECK_THROWS_AS(integrate_scalar_regularized(1, 2.0, 0.5, {-16.0, -6.0, 0.0}, std::array<cplx, 2>{-a[0], -a[1]}),
                  BranchError);
  CHECK_THROWS_AS(painleve1({-5.0, 0.0, 1.0}), InvalidArgument);
}

TEST_CASE("n = 1 regularisation maps onto Painleve-I") {
  for (auto [B, C] : {std::pair{0.7, 0.3}, std::pair{2.5, 1.2}}) {
    const PainleveMap map = painleve_rescaling(B, C);
    const auto xs = linspace(-16.0, 0.0, 801);
    std::vector<double> xis;
    for (double x : xs) xis.push_back(map.xi_scale.real() * x);
    const ODESolution p = painleve1(xs);
    const ODESolution r = integrate_scalar_regularized(1, B, C, xis);
    REQUIRE(r.values.size() == p.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(r.values[i][0] / map.beta_scale - p.values[i][0]));
    CHECK(worst <= 1e-6);
    CHECK(r.residual_norm <= 1e-8);
  }
  // B = 2, C = 1/2 is the identity map.
  const PainleveMap id = painleve_rescaling(2.0, 0.5);
  CHECK(std::abs(id.beta_scale - 1.0) < 1e-15);
  CHECK(std::abs(id.xi_scale - 1.0) < 1e-15);
}

TEST_CASE("n = 2 regularisation") {
  const auto a = regularized_asymptotics(2, 1.0, 0.5, -10.0);
  // The oscillating root is complex for n = 2.
  CHECK(std::abs(a[0].imag()) > 0.1);
  const ODESolution r = integrate_scalar_regularized(2, 1.0, 0.5, linspace(-10.0, -2.0, 801));
  CHECK(r.residual_norm <= 1e-8);
}

TEST_CASE("n = 0 against its power series") {
  // 2C b'' = xi + 2B b from b(0), b'(0): Taylor coefficients by recurrence.
  const cplx B(0.4, 0.1), C(0.8, -0.2);
  const cplx b0(0.3, 0.2), b1(-0.5, 0.1);
  std::vector<cplx> a{b0, b1};
  for (int k = 0; k < 80; ++k) a.push_back(((k == 1 ? 1.0 : 0.0) + 2.0 * B * a[static_cast<std::size_t>(k)]) / (2.0 * C * double((k + 1) * (k + 2))));
  const auto grid = linspace(0.0, 2.0, 201);
  const ODESolution r = integrate_scalar_regularized(0, B, C, grid, std::array<cplx, 2>{b0, b1});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx v{};
    for (std::size_t k = a.size(); k-- > 0;) v = v * grid[i] + a[k];
    worst = std::max(worst, std::abs(v - r.values[i][0]));
  }
  CHECK(worst <= 1e-6);
  CHECK(r.residual_norm <= 1e-8);
}

TEST_CASE("Riccati system") {
  SUBCASE("conserved energy without forcing") {
    RiccatiParams p;
    p.n = 1;
    p.B1 = 0.5;
    p.B2 = 0.8;
    const ODESolution r = integrate_coupled(p, linspace(0.0, 1.0, 201), CVec{0.3, -0.4});
    auto G = [&](const CVec& v) { return p.B1 * std::pow(v[0], 3) + p.B2 * std::pow(v[1], 3); };
    double drift = 0.0;
    for (const CVec& v : r.values) drift = std::max(drift, std::abs(G(v) - G(r.values.front())));
    CHECK(drift < 1e-11);
    CHECK(r.residual_norm <= 1e-8);
  }
  SUBCASE("forced: dG/dxi = D121 beta1 + D122 beta2") {
    RiccatiParams p;
    p.n = 1;
    p.B1 = 0.5;
    p.B2 = 0.8;
    p.D121 = 0.3;
    p.D122 = -0.2;
    p.A = 0.1;
    p.C = 0.4;
    p.eta = 0.5;
    const auto grid = linspace(0.0, 1.0, 2001);
    const ODESolution r = integrate_coupled(p, grid, CVec{0.3, -0.4});
    REQUIRE(r.values.size() == grid.size());
    auto G = [&](double xi, const CVec& v) {
      return p.B1 * std::pow(v[0], 3) + p.B2 * std::pow(v[1], 3) + (p.D121 * xi + p.A * p.eta) * v[0] +
             (p.D122 * xi + p.C * p.eta) * v[1];
    };
    // Simpson on the source term.
    cplx integral{};
    const double h = grid[1] - grid[0];
    for (std::size_t i = 0; i + 1 < grid.size(); i += 2) {
      auto f = [&](std::size_t k) { return p.D121 * r.values[k][0] + p.D122 * r.values[k][1]; };
      integral += h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
    }
    CHECK(std::abs(G(grid.back(), r.values.back()) - G(grid.front(), r.values.front()) - integral) < 1e-10);
    CHECK(r.residual_norm <= 1e-8);
  }
}

TEST_CASE("second-order coupled system") {
  SUBCASE("decoupled copies of the scalar equation") {
    CoupledParams p;
    p.n = 1;
    p.B1 = 0.7;
    p.B2 = 1.1;
    p.d(0, 0, 0, 0) = 1.5;
    p.d(0, 1, 0, 1) = 0.5;  // B11 = 2
    p.d(1, 0, 1, 1) = 3.0;  // B22 = 3
    const CoupledCoefficients c = coupled_coefficients(p);
    CHECK(std::abs(c.A(0, 1)) == 0.0);
    CHECK(std::abs(c.A(1, 0)) == 0.0);
    const auto grid = linspace(-3.0, -0.5, 251);
    const CVec init{0.2, -0.3, 0.1, 0.05};
    const ODESolution r = integrate_coupled(p, grid, init);
    const ODESolution s1 = integrate_scalar_regularized(1, p.B1, 2.0 / 8.0, grid, std::array<cplx, 2>{init[0], init[2]});
    const ODESolution s2 = integrate_scalar_regularized(1, p.B2, 3.0 / 8.0, grid, std::array<cplx, 2>{init[1], init[3]});
    REQUIRE(r.values.size() == grid.size());
    REQUIRE(s1.values.size() == grid.size());
    REQUIRE(s2.values.size() == grid.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max({worst, std::abs(r.values[i][0] - s1.values[i][0]), std::abs(r.values[i][1] - s2.values[i][0])});
    CHECK(worst <= 1e-8);
    CHECK(r.residual_norm <= 1e-8);
  }
  SUBCASE("symmetric data stays symmetric") {
    CoupledParams p;
    p.n = 2;
    p.B1 = p.B2 = 0.6;
    p.d(0, 0, 0, 0) = p.d(1, 1, 1, 1) = 2.0;
    p.d(0, 0, 1, 1) = p.d(1, 1, 0, 0) = 0.5;
    const ODESolution r = integrate_coupled(p, linspace(0.0, 2.0, 201), CVec{0.1, 0.1, -0.2, -0.2});
    double worst = 0.0;
    for (const CVec& v : r.values) worst = std::max(worst, std::abs(v[0] - v[1]));
    CHECK(worst == 0.0);
  }
  SUBCASE("singular coefficient matrix") {
    CoupledParams p;
    p.d(0, 0, 0, 0) = p.d(1, 0, 1, 0) = p.d(0, 0, 1, 0) = 1.0;
    CHECK_THROWS_AS(coupled_coefficients(p), Degeneracy);
  }
}

TEST_CASE("scaling expansion at the cubic triple root") {
  const Potential W = Potential::cubic(1.0);
  const auto m = u0_singular();
  ReducedSolution sol;
  sol.betas = {m.beta1, m.beta2};
  sol.t_head = {4.0 * kSstar};
  const std::vector<int> n = classify_singular(sol, W);
  REQUIRE(n.size() == 2);
  const ScalingExpansion e = scaling_expansion(W, sol, n);
  const int l = std::abs(m.beta1 - m.alpha) < std::abs(m.beta2 - m.alpha) ? 0 : 1;
  CHECK(e.gamma[static_cast<std::size_t>(l)] == 0.5);
  CHECK(e.exponent[static_cast<std::size_t>(l)] == -0.5);
  CHECK(e.gamma[static_cast<std::size_t>(1 - l)] == 1.0);
  // The printed q = 1 polynomial gives V_1 = -(beta1 + beta2)/4.
  CHECK(std::abs(e.A[0] + (m.beta1 + m.beta2) / 4.0) < 1e-12);
  CHECK(std::abs(e.Akl(0, 0) + 0.25) < 1e-8);
  CHECK(std::abs(e.Akl(0, 1) + 0.25) < 1e-8);
  CHECK(std::abs(e.B[static_cast<std::size_t>(l)]) > 1e-2);

  // Leading balance xi + 3 B (beta - beta0)^2 = 0 against the flow, at small distance.
  const double eps = 1e-6;
  const FlowTResult r = flow_t(W, u0_start(), {CVec{1.2}, CVec{4.0 * kSstar - eps}});
  const CVec& b = r.points.back().betas;
  const cplx b0 = merging_root(m);
  const cplx bl = std::abs(b[0] - b0) < std::abs(b[1] - b0) ? b[0] : b[1];
  const cplx xi = -eps * e.Akl(0, l);
  const double predicted = std::sqrt(std::abs(xi / (3.0 * e.B[static_cast<std::size_t>(l)])));
  CHECK(std::abs(std::abs(bl - b0) / predicted - 1.0) < 0.01);

  SUBCASE("regular point") {
    const auto mr = models::cubic_m1_curve(1.0, 0.1, 0);
    ReducedSolution reg;
    reg.betas = {mr.beta1, mr.beta2};
    reg.t_head = {-0.4};
    const ScalingExpansion er = scaling_expansion(W, reg, {});
    CHECK(er.gamma == std::vector<double>{1.0, 1.0});
    CHECK(er.exponent[0] == 0.0);
  }
}

TEST_CASE("exponent fit") {
  SUBCASE("synthetic power laws") {
    std::vector<double> d;
    std::vector<CVec> v;
    for (int k = 0; k < 60; ++k) {
      const double x = std::pow(10.0, -3.0 * k / 59.0);
      d.push_back(x);
      v.push_back(CVec{3.0 * std::pow(x, -0.5), cplx(0.0, 2.0) * std::pow(x, -2.0 / 3.0)});
    }
    const ExponentFit f = blowup_exponent_fit(d, v);
    CHECK(std::abs(f.slope[0] + 0.5) < 1e-12);
    CHECK(std::abs(f.slope[1] + 2.0 / 3.0) < 1e-12);
    CHECK(f.samples == 20);
    CHECK_THROWS_AS(blowup_exponent_fit(d, v, 1.0, 21), InvalidArgument);
  }
  SUBCASE("approach to the u0 triple root") {
    const Potential W = Potential::cubic(1.0);
    const ApproachSamples a = approach_samples(W, u0_start(), CVec{1.2}, CVec{4.0 * kSstar});
    CHECK(a.flow.catastrophe);
    const ExponentFit f = blowup_exponent_fit(a.dist, a.dbeta);
    const auto m = u0_singular();
    const bool first_merges = std::abs(m.beta1 - m.alpha) < std::abs(m.beta2 - m.alpha);
    const cplx b0 = merging_root(m);
    const CVec& last = a.flow.points.back().betas;
    const std::size_t l = std::abs(last[0] - b0) < std::abs(last[1] - b0) ? 0 : 1;
    CHECK(first_merges == (l == 0));
    CHECK(std::abs(f.slope[l] + 0.5) <= 0.05);
    CHECK(std::abs(f.slope[1 - l]) <= 0.05);
  }
  SUBCASE("two simple branch points colliding") {
    const Potential W = Potential::cubic(1.0);
    const BranchConfiguration cfg = classify(build_curve(W, CVec{0.0, -0.5}));
    const ApproachSamples a = approach_samples(W, cfg.betas, CVec{0.0, -0.5}, CVec{0.0, 0.0});
    CHECK(a.flow.catastrophe);
    const ExponentFit f = blowup_exponent_fit(a.dist, a.dbeta);
    double steepest = 0.0;
    for (double s : f.slope) steepest = std::min(steepest, s);
    CHECK(std::abs(steepest + 0.5) <= 0.05);
  }
  SUBCASE("regular segment") {
    const Potential W = Potential::cubic(1.0);
    const auto m = models::cubic_m1_curve(1.0, 0.01, 0);
    // Approach a regular point: derivatives stay bounded.
    const ApproachSamples a = approach_samples(W, CVec{m.beta1, m.beta2}, CVec{-0.04}, CVec{-0.5}, 30, 1e-1, 1e-4);
    std::vector<double> d;
    std::vector<CVec> v;
    for (std::size_t i = 0; i < a.dist.size(); ++i)
      if (a.flow.points[i].t[0].real() > -0.5) {
        d.push_back(a.dist[i]);
        v.push_back(a.dbeta[i]);
      }
    const ExponentFit f = blowup_exponent_fit(d, v);
    CHECK(std::abs(f.slope[0]) < 0.05);
    CHECK(std::abs(f.slope[1]) < 0.05);
  }
}

TEST_CASE("local scaling collapse") {
  const Potential W = Potential::cubic(1.0);
  const CollapseResult c =
      scaling_collapse(W, u0_start(), CVec{1.2}, CVec{4.0 * kSstar}, merging_root(u0_singular()), 1, {1e-2, 1e-3, 1e-4});
  CHECK(c.max_deviation <= 0.05);
  // With the wrong exponent the curves separate.
  const CollapseResult wrong =
      scaling_collapse(W, u0_start(), CVec{1.2}, CVec{4.0 * kSstar}, merging_root(u0_singular()), 0, {1e-2, 1e-3, 1e-4});
  CHECK(wrong.max_deviation > 0.5);
}

TEST_CASE("catastrophe location on the one-cut families") {
  const Potential W = Potential::cubic(1.0);
  FlowTOptions fo;
  fo.catastrophe_dist = 1e-7;
  SUBCASE("u0 reaches s = -s*") {
    const CatastropheLocation loc = locate_catastrophe(W, u0_start(), CVec{1.2}, CVec{1.8}, 1e-11, fo);
    CHECK(std::abs(-loc.t_head[0].real() / 4.0 + kSstar) <= 1e-8);
    CHECK(std::abs(loc.t[1] + 4.0 / 3.0) <= 1e-8);
    const BranchConfiguration cfg = classify(build_curve(W, loc.t), 1e-3);
    CHECK(cfg.roots.multiplicities == std::vector<int>{1, 3});
    ReducedSolution sol;
    sol.betas = loc.betas;
    sol.t_head = loc.t_head;
    const std::vector<int> n = classify_singular(sol, W, 1e-4);
    CHECK((n == std::vector<int>{1, 0} || n == std::vector<int>{0, 1}));
  }
  SUBCASE("u1 reaches s = +s*") {
    const auto m = models::cubic_m1_curve(1.0, 0.3, 1);
    const CatastropheLocation loc = locate_catastrophe(W, CVec{m.beta1, m.beta2}, CVec{-1.2}, CVec{-1.8}, 1e-11, fo);
    CHECK(std::abs(-loc.t_head[0].real() / 4.0 - kSstar) <= 1e-8);
    CHECK(std::abs(loc.t[1] + 4.0 / 3.0) <= 1e-8);
  }
  CHECK_THROWS_AS(locate_catastrophe(W, u0_start(), CVec{1.2}, CVec{1.3}), InvalidArgument);
}
