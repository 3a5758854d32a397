#include "spectral/curve.hpp"

#include <cmath>
#include <limits>

namespace spectral {

Potential::Potential(CVec g) : g_(std::move(g)) {
  if (g_.empty()) throw InvalidArgument("Potential: need at least one coefficient");
  if (g_.size() > 32) throw InvalidArgument("Potential: degree N above 32");
  const int n = N();
  CVec w(static_cast<std::size_t>(n) + 2, 0.0);
  for (int k = 1; k <= n; ++k) w[static_cast<std::size_t>(k)] = g_[static_cast<std::size_t>(k - 1)];
  w[static_cast<std::size_t>(n + 1)] = 1.0 / (n + 1.0);
  w_ = ComplexPoly(std::move(w));
  wp_ = w_.derivative();
}

cplx Potential::coefficient(int n) const noexcept {
  if (n >= 1 && n <= N()) return g_[static_cast<std::size_t>(n - 1)];
  if (n == N() + 1) return 1.0 / (N() + 1.0);
  return {};
}

Potential Potential::gaussian() { return Potential(CVec{0.0}); }

Potential Potential::cubic(cplx g) { return Potential(CVec{-g, 0.0}); }

ComplexPoly SpectralCurve::f() const {
  const int n = potential.N();
  CVec c(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k <= n; ++k) c[static_cast<std::size_t>(n - k)] = t[static_cast<std::size_t>(k - 1)];
  return ComplexPoly(std::move(c));
}

ComplexPoly SpectralCurve::P() const { return potential.Wp() * potential.Wp() + f(); }

SpectralCurve build_curve(const Potential& W, CVec t) {
  if (static_cast<int>(t.size()) != W.N())
    throw InvalidArgument("build_curve: expected " + std::to_string(W.N()) + " deformation parameters");
  return SpectralCurve{W, std::move(t)};
}

BranchConfiguration classify(const SpectralCurve& curve, double tol) {
  const CVec raw = find_roots(curve.P());
  BranchConfiguration out;
  out.roots = cluster_roots(raw, tol);
  out.min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j) out.min_dist = std::min(out.min_dist, std::abs(raw[i] - raw[j]));
  for (std::size_t k = 0; k < out.roots.roots.size(); ++k) {
    const int m = out.roots.multiplicities[k];
    const cplx c = out.roots.roots[k];
    if (m % 2 == 1) out.betas.push_back(c);
    for (int r = 0; r < m / 2; ++r) out.alphas.push_back(c);
    if (m > 2) out.regular = false;
  }
  out.q = static_cast<int>(out.betas.size()) / 2;
  return out;
}

ComplexPoly alpha_polynomial(const Potential& W, std::span<const cplx> betas) {
  if (betas.size() % 2 != 0) throw InvalidArgument("alpha_polynomial: odd number of branch points");
  if (static_cast<int>(betas.size()) > 2 * W.N())
    throw InvalidArgument("alpha_polynomial: more than 2N branch points");
  return plus_projection(W.Wp(), betas);
}

CVec alphas_from_betas(const Potential& W, std::span<const cplx> betas, double tol) {
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t j = i + 1; j < betas.size(); ++j) {
      const double d = std::abs(betas[i] - betas[j]);
      if (d <= tol) throw Degeneracy("alphas_from_betas: branch points collide", d);
    }
  const ComplexPoly a = alpha_polynomial(W, betas);
  if (a.degree() == 0) return {};
  return find_roots(a);
}

FactorizationResidual factorization_residual(std::span<const cplx> alphas,
                                             std::span<const cplx> betas,
                                             const SpectralCurve& curve, double threshold) {
  CVec all(betas.begin(), betas.end());
  for (cplx a : alphas) {
    all.push_back(a);
    all.push_back(a);
  }
  const ComplexPoly prod = ComplexPoly::from_roots(all);
  const ComplexPoly p = curve.P();
  FactorizationResidual r;
  const int deg = std::max(prod.degree(), p.degree());
  for (int k = 0; k <= deg; ++k) {
    const cplx d = prod[k] - p[k];
    r.diff.push_back(d);
    r.max_abs = std::max(r.max_abs, std::abs(d));
    if (std::abs(d) > threshold) r.failing.push_back(k);
  }
  return r;
}

}  // namespace spectral
