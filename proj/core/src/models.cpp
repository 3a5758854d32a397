#include "spectral/models.hpp"

#include <cmath>

#include "spectral/curve.hpp"
#include "spectral/polynomial.hpp"

namespace spectral::models {

std::pair<cplx, cplx> gaussian_branch_points(cplx s) {
  const cplx r = 2.0 * std::sqrt(s);
  return {r, -r};
}

std::array<cplx, 3> cubic_u_branches(cplx g, cplx s) {
  if (g == cplx{}) throw InvalidArgument("cubic_u_branches: g must be nonzero");
  const cplx g3 = g / 3.0;
  const cplx disc = std::sqrt(s * s / 4.0 - g3 * g3 * g3);
  const cplx d0 = std::pow(s / 2.0 + disc, 1.0 / 3.0);
  std::array<cplx, 3> u;
  for (int k = 0; k < 3; ++k) {
    const cplx dk = std::polar(1.0, 2.0 * kPi * k / 3.0) * d0;
    u[static_cast<std::size_t>(k)] = -g / (3.0 * dk) - dk;
  }
  return u;
}

CubicM1 cubic_m1_from_u(cplx g, cplx s, cplx u) {
  CubicM1 r;
  r.u = u;
  if (u == cplx{}) {
    if (s != cplx{}) throw InvalidArgument("cubic_m1: u = 0 requires s = 0");
    r.delta2 = 2.0 * g;
  } else {
    r.delta2 = 2.0 * s / u;
  }
  const cplx d = std::sqrt(r.delta2);
  r.alpha = -u;
  r.beta1 = u + d;
  r.beta2 = u - d;
  r.t2 = u * u * u * u - u * u * r.delta2 - g * g;
  return r;
}

CubicM1 cubic_m1_curve(cplx g, cplx s, int branch) {
  if (branch < 0 || branch > 2) throw InvalidArgument("cubic_m1_curve: branch must be 0, 1 or 2");
  return cubic_m1_from_u(g, s, cubic_u_branches(g, s)[static_cast<std::size_t>(branch)]);
}

cplx cubic_discriminant(cplx g, cplx s, cplx t2) {
  const cplx s2 = s * s;
  return 27.0 * s2 * s2 + (18.0 * g * t2 + 16.0 * g * g * g) * s2 - t2 * t2 * t2 - g * g * t2 * t2;
}

std::vector<CubicM2> cubic_m2_curve(cplx g, cplx s, cplx t2) {
  const ComplexPoly sextic{-s * s, 0.0, -t2, 0.0, -4.0 * g, 0.0, 4.0};
  const auto curve = build_curve(Potential::cubic(g), CVec{-4.0 * s, t2});
  const double scale = 1.0 + std::abs(g) + std::abs(s) + std::abs(t2);
  std::vector<CubicM2> out;
  for (cplx u1 : find_roots(sextic)) {
    if (std::abs(u1) <= 1e-12 * scale) continue;
    CubicM2 c;
    c.u1 = u1;
    c.delta1_sq = g - u1 * u1 + s / u1;
    c.delta2_sq = g - u1 * u1 - s / u1;
    const cplx d1 = std::sqrt(c.delta1_sq), d2 = std::sqrt(c.delta2_sq);
    c.betas = {u1 + d1, u1 - d1, -u1 + d2, -u1 - d2};
    c.factorization_residual = factorization_residual({}, c.betas, curve).max_abs;
    out.push_back(c);
  }
  return out;
}

std::array<std::pair<cplx, cplx>, 3> cubic_singular_points(cplx g) {
  const cplx sp = 2.0 * std::pow(g / 3.0, 1.5);
  const cplx t2 = -4.0 * g * g / 3.0;
  return {{{0.0, 0.0}, {sp, t2}, {-sp, t2}}};
}

}  // namespace spectral::models
