#pragma once

#include <array>
#include <utility>
#include <vector>

#include "spectral/common.hpp"

namespace spectral::models {

/// (2 sqrt(s), -2 sqrt(s)) with the principal square root.
std::pair<cplx, cplx> gaussian_branch_points(cplx s);

/// The three roots u_k of u^3 - g u + s = 0 in the closed form
/// u_k = -g/(3 D_k) - D_k, D_k = exp(2 pi i k/3) cbrt(s/2 + sqrt(s^2/4 - (g/3)^3)).
/// For g = 1 and s -> 0: u_0 -> -1, u_1 -> +1, u_2 -> 0.
std::array<cplx, 3> cubic_u_branches(cplx g, cplx s);

/// One-cut solution of the cubic model (W = z^3/3 - g z) on branch k.
struct CubicM1 {
  cplx u, delta2, alpha, beta1, beta2, t2;
};

/// alpha = -u, delta^2 = 2s/u (2g when u = 0), beta = u +/- delta,
/// t2 = u^4 - u^2 delta^2 - g^2. Throws InvalidArgument when u = 0 but s != 0.
CubicM1 cubic_m1_curve(cplx g, cplx s, int branch);
/// Same, for a given root u of the cubic (used by continuation along a path).
CubicM1 cubic_m1_from_u(cplx g, cplx s, cplx u);

/// 27 s^4 + (18 g t2 + 16 g^3) s^2 - t2^3 - g^2 t2^2.
cplx cubic_discriminant(cplx g, cplx s, cplx t2);

struct CubicM2 {
  cplx u1, delta1_sq, delta2_sq;
  std::array<cplx, 4> betas;  ///< u1 + d1, u1 - d1, u2 + d2, u2 - d2 with u2 = -u1
  double factorization_residual = 0.0;
};

/// Candidates from the nonzero roots of 4 u^6 - 4 g u^4 - t2 u^2 - s^2 = 0.
/// Roots u1 = 0 only occur for s = 0 and carry no information; they are skipped.
std::vector<CubicM2> cubic_m2_curve(cplx g, cplx s, cplx t2);

/// {(0,0), (+2 (g/3)^{3/2}, -4g^2/3), (-2 (g/3)^{3/2}, -4g^2/3)} as (s, t2) pairs.
std::array<std::pair<cplx, cplx>, 3> cubic_singular_points(cplx g);

}  // namespace spectral::models
