#include "spectral/whitham.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/polynomial.hpp"

namespace spectral {

namespace {

CVec double_points(const Potential& W, const CVec& betas) {
  const ComplexPoly A = alpha_polynomial(W, betas);
  if (A.degree() == 0) return {};
  return find_roots(A);
}

// Solve sum_m alpha_l^{p-m} c_m = rhs_l (rows l = 1..p).
Eigen::PartialPivLU<Eigen::MatrixXcd> vandermonde(const CVec& alphas) {
  const int p = static_cast<int>(alphas.size());
  for (int l = 0; l < p; ++l)
    for (int m = l + 1; m < p; ++m) {
      const double d = std::abs(alphas[static_cast<std::size_t>(l)] - alphas[static_cast<std::size_t>(m)]);
      if (d <= 1e-12 * (1.0 + std::abs(alphas[static_cast<std::size_t>(l)])))
        throw Degeneracy("Vandermonde: double points coincide", d);
    }
  Eigen::MatrixXcd M(p, p);
  for (int l = 0; l < p; ++l)
    for (int m = 0; m < p; ++m) M(l, m) = std::pow(alphas[static_cast<std::size_t>(l)], p - 1 - m);
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M);
}

cplx horner_desc(const Eigen::VectorXcd& c, cplx z) {
  cplx acc{};
  for (Eigen::Index i = 0; i < c.size(); ++i) acc = acc * z + c(i);
  return acc;
}

}  // namespace

double root_gap(const CVec& alphas, const CVec& betas) {
  CVec all = betas;
  all.insert(all.end(), alphas.begin(), alphas.end());
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t k = i + 1; k < all.size(); ++k) d = std::min(d, std::abs(all[i] - all[k]));
  return d;
}

CVec implied_t(const Potential& W, const CVec& betas) {
  const ComplexPoly A = alpha_polynomial(W, betas);
  const ComplexPoly d = A * A * ComplexPoly::from_roots(betas) - W.Wp() * W.Wp();
  const int N = W.N();
  CVec t(static_cast<std::size_t>(N));
  for (int k = 1; k <= N; ++k) t[static_cast<std::size_t>(k - 1)] = d[N - k];
  return t;
}

WhithamT whitham_rhs_t(const Potential& W, const CVec& betas, double tol) {
  const int N = W.N();
  const int nb = static_cast<int>(betas.size());
  if (nb % 2 != 0 || nb == 0) throw InvalidArgument("whitham_rhs_t: need 2q >= 2 branch points");
  const int q = nb / 2;
  const int p = N - q;
  if (p < 0) throw InvalidArgument("whitham_rhs_t: more than 2N branch points");

  WhithamT out;
  out.rhs = Eigen::MatrixXcd(nb, q);
  out.min_denominator = std::numeric_limits<double>::infinity();
  if (p == 1) {
    cplx sum{};
    for (cplx b : betas) sum += b;
    const cplx a = -static_cast<double>(N) * W.coefficient(N) - 0.5 * sum;
    const CVec roots = double_points(W, betas);
    out.alphas = {a};
    out.alpha_formula_gap = std::abs(a - roots.front());
  } else if (p > 1) {
    out.alphas = double_points(W, betas);
  }

  // Interpolants c_j of z^{N-j} at the double points (descending coefficients).
  std::vector<Eigen::VectorXcd> interp;
  if (p > 0) {
    const auto lu = vandermonde(out.alphas);
    for (int j = 1; j <= q; ++j) {
      Eigen::VectorXcd rhs(p);
      for (int m = 0; m < p; ++m) rhs(m) = std::pow(out.alphas[static_cast<std::size_t>(m)], N - j);
      interp.push_back(lu.solve(rhs));
    }
  }

  for (int i = 0; i < nb; ++i) {
    const cplx bi = betas[static_cast<std::size_t>(i)];
    cplx den = 1.0;
    for (cplx a : out.alphas) den *= (a - bi) * (a - bi);
    for (int k = 0; k < nb; ++k)
      if (k != i) den *= bi - betas[static_cast<std::size_t>(k)];
    out.min_denominator = std::min(out.min_denominator, std::abs(den));
    if (std::abs(den) <= tol) throw Degeneracy("whitham_rhs_t: denominator collapse", std::abs(den));
    for (int j = 1; j <= q; ++j) {
      cplx num = -std::pow(bi, N - j);
      if (p == 1) num += std::pow(out.alphas[0], N - j);
      else if (p > 1) num += horner_desc(interp[static_cast<std::size_t>(j - 1)], bi);
      out.rhs(i, j - 1) = num / den;
    }
  }
  return out;
}

CVec reconstruct_t(const Potential& W, const CVec& alphas, const CVec& t_first) {
  const int N = W.N();
  const int p = static_cast<int>(alphas.size());
  const int q = static_cast<int>(t_first.size());
  if (p + q != N) throw InvalidArgument("reconstruct_t: need N - q double points");
  if (p == 0) return {};
  Eigen::VectorXcd rhs(p);
  for (int m = 0; m < p; ++m) {
    const cplx a = alphas[static_cast<std::size_t>(m)];
    cplx v = W.Wp()(a) * W.Wp()(a);
    for (int j = 1; j <= q; ++j) v += t_first[static_cast<std::size_t>(j - 1)] * std::pow(a, N - j);
    rhs(m) = -v;  // P(alpha_m) = 0
  }
  const Eigen::VectorXcd c = vandermonde(alphas).solve(rhs);
  return CVec(c.data(), c.data() + c.size());
}

FlowTResult flow_t(const Potential& W, const CVec& betas0, const std::vector<CVec>& path, const FlowTOptions& opt) {
  if (path.size() < 2) throw InvalidArgument("flow_t: path needs at least two points");
  const int q = static_cast<int>(betas0.size()) / 2;
  for (const CVec& p : path)
    if (static_cast<int>(p.size()) != q) throw InvalidArgument("flow_t: path point has wrong size");
  const CVec t0 = implied_t(W, betas0);
  for (int j = 0; j < q; ++j)
    if (std::abs(t0[static_cast<std::size_t>(j)] - path[0][static_cast<std::size_t>(j)]) > 1e-8 * (1.0 + std::abs(t0[static_cast<std::size_t>(j)])))
      throw InvalidArgument("flow_t: start does not match path[0]");

  auto to_cvec = [](const Eigen::VectorXcd& v) { return CVec(v.data(), v.data() + v.size()); };
  FlowTResult out;
  auto record = [&](double x, const CVec& b) {
    FlowTPoint pt;
    pt.lambda = x;
    pt.betas = b;
    pt.t = implied_t(W, b);
    pt.alphas = double_points(W, b);
    pt.min_dist = root_gap(pt.alphas, b);
    out.points.push_back(std::move(pt));
    return out.points.back().min_dist;
  };
  auto scale = [](const CVec& b) {
    double m = 1.0;
    for (cplx x : b) m = std::max(m, std::abs(x));
    return m;
  };
  // Cluster around the closest pair, alphas counted twice.
  auto guess_multiplicity = [&](const FlowTPoint& pt) {
    CVec all = pt.betas;
    std::vector<int> w(all.size(), 1);
    for (cplx a : pt.alphas) {
      all.push_back(a);
      w.push_back(2);
    }
    std::size_t bi = 0, bk = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t k = i + 1; k < all.size(); ++k)
        if (std::abs(all[i] - all[k]) < best) {
          best = std::abs(all[i] - all[k]);
          bi = i;
          bk = k;
        }
    const cplx c = 0.5 * (all[bi] + all[bk]);
    int m = 0;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (std::abs(all[i] - c) <= 10.0 * best) m += w[i];
    return m;
  };

  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(betas0.data(), static_cast<Eigen::Index>(betas0.size()));
  record(0.0, betas0);
  for (std::size_t m = 0; m + 1 < path.size(); ++m) {
    Eigen::VectorXcd dt(q);
    for (int j = 0; j < q; ++j) dt(j) = path[m + 1][static_cast<std::size_t>(j)] - path[m][static_cast<std::size_t>(j)];
    auto rhs = [&](double, const Eigen::VectorXcd& state) -> Eigen::VectorXcd {
      return whitham_rhs_t(W, to_cvec(state)).rhs * dt;
    };
    auto accept = [&](double x, Eigen::VectorXcd& state) {
      const CVec b = to_cvec(state);
      const double md = record(x, b);
      if (md < opt.catastrophe_dist * scale(b)) {
        out.catastrophe = true;
        return false;
      }
      return true;
    };
    try {
      const OdeResult r = integrate_dp45(rhs, static_cast<double>(m), static_cast<double>(m + 1), y, accept, opt.ode);
      y = r.y;
      if (r.stopped) break;
    } catch (const IntegrationFailure&) {
      out.catastrophe = true;
      break;
    } catch (const Degeneracy&) {
      out.catastrophe = true;
      break;
    }
  }
  if (out.catastrophe) out.multiplicity_guess = guess_multiplicity(out.points.back());
  return out;
}

}  // namespace spectral
