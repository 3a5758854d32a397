#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "spectral/common.hpp"

namespace spectral {

using OdeState = Eigen::VectorXcd;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 1e-2;
  double hmin = 1e-12;
  double hmax = std::numeric_limits<double>::infinity();
  int max_steps = 100000;
};

struct OdeResult {
  double x = 0.0;
  OdeState y;
  bool stopped = false;  ///< the accept callback asked to stop before x1
  int accepted = 0;
  int rejected = 0;
};

/// Dormand-Prince 5(4) with standard step control on y' = f(x, y), x real, y complex.
/// `on_accept(x, y)` runs after every accepted step; it may modify y (e.g. project back
/// onto a constraint) and returns false to stop. Throws IntegrationFailure when the step
/// size falls below hmin or the step budget runs out.
template <class F, class Accept>
OdeResult integrate_dp45(F&& f, double x0, double x1, OdeState y, Accept&& on_accept, const OdeOptions& opt = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b* for the embedded fourth-order estimate.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeResult res;
  const double dir = x1 >= x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  double x = x0;
  double h = std::min({opt.h0, span, opt.hmax});
  int steps = 0;
  while (dir * (x1 - x) > 1e-14 * (1.0 + span)) {
    if (++steps > opt.max_steps) throw IntegrationFailure("integrate_dp45: step budget exhausted", x);
    h = std::min(h, std::abs(x1 - x));
    const double hs = dir * h;
    const OdeState k1 = f(x, y);
    const OdeState k2 = f(x + c2 * hs, y + hs * (a21 * k1));
    const OdeState k3 = f(x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const OdeState k4 = f(x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const OdeState k5 = f(x + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const OdeState k6 = f(x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const OdeState y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const OdeState k7 = f(x + hs, y5);
    const OdeState err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
      en = std::max(en, std::abs(err(i)) / sc);
    }
    if (!std::isfinite(en)) en = 1e10;
    if (en <= 1.0) {
      x += hs;
      y = y5;
      ++res.accepted;
      if (!on_accept(x, y)) {
        res.stopped = true;
        break;
      }
    } else {
      ++res.rejected;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h = std::min(h * fac, opt.hmax);
    if (h < opt.hmin) throw IntegrationFailure("integrate_dp45: step size underflow", x);
  }
  res.x = x;
  res.y = std::move(y);
  return res;
}

}  // namespace spectral
