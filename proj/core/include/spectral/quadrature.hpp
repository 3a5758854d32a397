#pragma once

#include <functional>

#include "spectral/common.hpp"

namespace spectral {

struct QuadratureOptions {
  double rel_tol = 1e-11;
  double abs_floor = 1e-14;  ///< absolute floor added to the relative test
  int max_nodes = 1 << 14;
};

/// int_{-1}^{1} g(tau) / sqrt(1 - tau^2) dtau by Gauss-Chebyshev (first kind),
/// doubling the node count until two successive values agree.
cplx gauss_chebyshev(const std::function<cplx(double)>& g, const QuadratureOptions& opt = {});

/// int_0^1 f(t) dt by tanh-sinh; tolerates integrable endpoint singularities.
/// `f` receives (t, 1 - t) so that points near t = 1 keep full relative accuracy.
cplx tanh_sinh(const std::function<cplx(double, double)>& f, const QuadratureOptions& opt = {});

/// Contour integral of f(z) dz over the positively oriented circle |z - c| = r,
/// trapezoid rule with node doubling (spectrally accurate for analytic f).
cplx circle_integral(const std::function<cplx(cplx)>& f, cplx centre, double radius,
                     const QuadratureOptions& opt = {});

}  // namespace spectral
