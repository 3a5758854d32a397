#include "spectral/quadrature.hpp"

#include <cmath>

namespace spectral {

namespace {

bool agree(cplx a, cplx b, const QuadratureOptions& opt) {
  return std::abs(a - b) <= opt.rel_tol * std::abs(b) + opt.abs_floor;
}

}  // namespace

cplx gauss_chebyshev(const std::function<cplx(double)>& g, const QuadratureOptions& opt) {
  // Nodes cos((2k+1) pi / 2n) do not nest, so each level is a fresh evaluation. With
  // n tripling the nodes would nest, but doubling keeps the cost predictable.
  int n = 16;
  auto rule = [&](int m) {
    cplx acc{};
    for (int k = 0; k < m; ++k) acc += g(std::cos((2.0 * k + 1.0) * kPi / (2.0 * m)));
    return acc * (kPi / m);
  };
  cplx prev = rule(n);
  while (true) {
    n *= 2;
    const cplx cur = rule(n);
    if (agree(prev, cur, opt)) return cur;
    if (n >= opt.max_nodes) throw QuadratureFailure("gauss_chebyshev: node cap reached", prev, cur);
    prev = cur;
  }
}

cplx tanh_sinh(const std::function<cplx(double, double)>& f, const QuadratureOptions& opt) {
  // x = (1 + tanh(pi/2 sinh u)) / 2 on u in [-umax, umax]; complements computed directly.
  // Wide enough that the weight underflows before endpoint singularities like (1-t)^{-1/2} matter.
  const double umax = 6.0;
  auto term = [&](double u) -> cplx {
    const double s = 0.5 * kPi * std::sinh(u);
    const double c = std::cosh(s);
    const double w = 0.25 * kPi * std::cosh(u) / (c * c);
    // 1 - tanh(s) = 2 / (1 + exp(2s)), evaluated without cancellation.
    const double lo = 1.0 / (1.0 + std::exp(2.0 * s));
    const double hi = 1.0 / (1.0 + std::exp(-2.0 * s));
    if (lo <= 0.0 || hi <= 0.0 || w == 0.0) return {};
    const cplx v = f(hi, lo);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return {};
    return w * v;
  };
  double h = 0.5;
  cplx sum = term(0.0);
  for (double u = h; u <= umax; u += h) sum += term(u) + term(-u);
  cplx prev = sum * h;
  int nodes = static_cast<int>(2 * umax / h) + 1;
  while (true) {
    h *= 0.5;
    for (double u = h; u <= umax; u += 2 * h) sum += term(u) + term(-u);
    const cplx cur = sum * h;
    nodes *= 2;
    if (agree(prev, cur, opt)) return cur;
    if (nodes >= opt.max_nodes) throw QuadratureFailure("tanh_sinh: node cap reached", prev, cur);
    prev = cur;
  }
}

cplx circle_integral(const std::function<cplx(cplx)>& f, cplx centre, double radius,
                     const QuadratureOptions& opt) {
  int n = 32;
  auto node = [&](int k, int m) {
    const double th = 2.0 * kPi * k / m;
    const cplx u(std::cos(th), std::sin(th));
    return f(centre + radius * u) * (radius * u);
  };
  cplx sum{};
  for (int k = 0; k < n; ++k) sum += node(k, n);
  cplx prev = sum * (kTwoPiI / static_cast<double>(n));
  while (true) {
    for (int k = 1; k < 2 * n; k += 2) sum += node(k, 2 * n);
    n *= 2;
    const cplx cur = sum * (kTwoPiI / static_cast<double>(n));
    if (agree(prev, cur, opt)) return cur;
    if (n >= opt.max_nodes) throw QuadratureFailure("circle_integral: node cap reached", prev, cur);
    prev = cur;
  }
}

}  // namespace spectral
