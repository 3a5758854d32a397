#include "spectral/hooft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spectral/polynomial.hpp"

namespace spectral {

namespace {

// Sign of the first-kind term in the Whitham equations for the branch points; fixed by
// finite differences of solve_from_hooft (tests/test_hooft.cpp).
constexpr double kFirstKindSign = 1.0;

double scale_of(const CVec& betas) {
  double m = 1.0;
  for (cplx b : betas) m = std::max(m, std::abs(b));
  return m;
}

double inf_norm(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

BranchConfiguration make_config(const Potential& W, const CVec& betas) {
  BranchConfiguration c;
  c.betas = betas;
  c.q = static_cast<int>(betas.size()) / 2;
  const ComplexPoly A = alpha_polynomial(W, betas);
  if (A.degree() > 0) c.alphas = find_roots(A);
  for (cplx b : betas) {
    c.roots.roots.push_back(b);
    c.roots.multiplicities.push_back(1);
  }
  for (cplx a : c.alphas) {
    c.roots.roots.push_back(a);
    c.roots.multiplicities.push_back(2);
  }
  c.min_dist = std::numeric_limits<double>::infinity();
  const CVec& all = c.roots.roots;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) c.min_dist = std::min(c.min_dist, std::abs(all[i] - all[j]));
  c.regular = true;
  return c;
}

// Smallest gap between distinct branch points and between branch points and double points.
double collision_distance(const ComplexPoly& A, const CVec& betas) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t k = i + 1; k < betas.size(); ++k) d = std::min(d, std::abs(betas[i] - betas[k]));
  if (A.degree() > 0)
    for (cplx a : find_roots(A))
      for (cplx b : betas) d = std::min(d, std::abs(a - b));
  return d;
}

}  // namespace

CVec critical_points(const Potential& W) {
  const RootSet rs = cluster_roots(find_roots(W.Wp()), 1e-8);
  return rs.roots;
}

Seed classical_seed(const Potential& W, int q, std::vector<int> assignment) {
  if (q < 1) throw InvalidArgument("classical_seed: q must be positive");
  const CVec crit = critical_points(W);
  if (assignment.empty()) {
    if (q > static_cast<int>(crit.size())) throw InvalidArgument("classical_seed: more cuts than critical points");
    assignment.resize(static_cast<std::size_t>(q));
    std::iota(assignment.begin(), assignment.end(), 0);
  }
  if (static_cast<int>(assignment.size()) != q) throw InvalidArgument("classical_seed: assignment size must be q");
  std::vector<int> sorted = assignment;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("classical_seed: two cuts on one critical point");
  double sc = 1.0;
  for (cplx a : crit) sc = std::max(sc, std::abs(a));
  const double eps = 1e-3 * sc;
  Seed seed;
  for (int j = 0; j < q; ++j) {
    const int k = assignment[static_cast<std::size_t>(j)];
    if (k < 0 || k >= static_cast<int>(crit.size())) throw InvalidArgument("classical_seed: no such critical point");
    const cplx a = crit[static_cast<std::size_t>(k)];
    seed.betas.push_back(a - eps);
    seed.betas.push_back(a + eps);
    seed.pairing.pairs.emplace_back(2 * j, 2 * j + 1);
  }
  return seed;
}

Eigen::VectorXcd hooft_residual(const Potential& W, const CVec& s, const CutSystem& pairing, const CVec& betas,
                                const CVec& t, const QuadratureOptions& quad) {
  const int N = W.N();
  const int q = pairing.q();
  if (static_cast<int>(s.size()) != q || static_cast<int>(betas.size()) != 2 * q || static_cast<int>(t.size()) != N)
    throw InvalidArgument("hooft_residual: size mismatch");
  const CurveBranch br(W, CutGeometry(betas, pairing));
  const ComplexPoly d = br.implied_P() - W.Wp() * W.Wp();
  Eigen::VectorXcd r(N + 2 * q);
  for (int k = 0; k < N + q; ++k) r(k) = d[k];
  for (int k = 1; k <= N; ++k) r(N - k) -= t[static_cast<std::size_t>(k - 1)];
  const ComplexPoly& A = br.A();
  for (int j = 0; j < q; ++j) {
    const cplx per = a_period(br.geometry(), j, [&](cplx z, cplx y0p) { return A(z) * y0p; }, quad);
    r(N + q + j) = -per / (4.0 * kPi * kI) - s[static_cast<std::size_t>(j)];
  }
  return r;
}

HooftSolution solve_from_hooft(const Potential& W, const CVec& s, const CutSystem& pairing, const CVec& seed,
                               const NewtonOptions& opt) {
  const int N = W.N();
  const int q = pairing.q();
  const int n = N + 2 * q;
  CVec betas = seed;
  CVec t = CurveBranch(W, CutGeometry(betas, pairing)).implied_t();
  auto eval = [&](const CVec& b, const CVec& tt) { return hooft_residual(W, s, pairing, b, tt, opt.quad); };

  HooftSolution out;
  Eigen::VectorXcd F = eval(betas, t);
  double fn = inf_norm(F);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (fn <= opt.tol) {
      out.iterations = it;
      break;
    }
    // Jacobian: forward differences in beta, exact -1 entries for t.
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
    const double h = opt.fd_step * scale_of(betas);
    for (int k = 0; k < 2 * q; ++k) {
      CVec bp = betas;
      bp[static_cast<std::size_t>(k)] += h;
      J.col(k) = (eval(bp, t) - F) / h;
    }
    for (int k = 1; k <= N; ++k) J(N - k, 2 * q + k - 1) = -1.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
    if (!(out.condition < opt.max_condition)) throw SingularJacobian("solve_from_hooft: singular Jacobian", out.condition);
    const Eigen::VectorXcd dx = svd.solve(-F);

    // Damped update; a trial that breaks the cut layout counts as a failed trial.
    double lam = 1.0;
    bool moved = false;
    for (int tries = 0; tries < 12; ++tries, lam *= 0.5) {
      CVec bn = betas, tn = t;
      for (int k = 0; k < 2 * q; ++k) bn[static_cast<std::size_t>(k)] += lam * dx(k);
      for (int k = 0; k < N; ++k) tn[static_cast<std::size_t>(k)] += lam * dx(2 * q + k);
      try {
        Eigen::VectorXcd Fn = eval(bn, tn);
        const double nn = inf_norm(Fn);
        if (nn < fn || tries == 11) {
          betas = std::move(bn);
          t = std::move(tn);
          F = std::move(Fn);
          fn = nn;
          moved = true;
          break;
        }
      } catch (const CutConfigurationError&) {
      } catch (const QuadratureFailure&) {
      }
    }
    out.iterations = it + 1;
    if (!moved) break;
  }
  if (!(fn <= opt.tol)) {
    std::vector<double> res(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) res[static_cast<std::size_t>(k)] = std::abs(F(k));
    throw SolverFailure("solve_from_hooft: no convergence", std::move(res));
  }
  out.betas = betas;
  out.t = t;
  out.residual = fn;
  out.config = make_config(W, betas);
  return out;
}

HooftSolution solve_with_continuation(const Potential& W, const CVec& s, const Seed& seed, const NewtonOptions& opt) {
  const int q = seed.pairing.q();
  if (static_cast<int>(s.size()) != q) throw InvalidArgument("solve_with_continuation: wrong number of s_j");
  // Each cut starts as a small semicircle at its critical point a: beta = a -/+ 2 sqrt(lambda s_j / W''(a)).
  const ComplexPoly Wpp = W.Wp().derivative();
  const double eps = std::abs(seed.betas[1] - seed.betas[0]) / 2.0;
  double lam = 1.0;
  std::vector<cplx> centre(static_cast<std::size_t>(q)), curv(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    const auto [a, b] = seed.pairing.pairs[static_cast<std::size_t>(j)];
    centre[static_cast<std::size_t>(j)] = 0.5 * (seed.betas[static_cast<std::size_t>(a)] + seed.betas[static_cast<std::size_t>(b)]);
    curv[static_cast<std::size_t>(j)] = Wpp(centre[static_cast<std::size_t>(j)]);
    const cplx sj = s[static_cast<std::size_t>(j)];
    if (sj == cplx{}) throw InvalidArgument("solve_with_continuation: every cut needs nonzero s_j");
    if (std::abs(curv[static_cast<std::size_t>(j)]) < 1e-12) throw InvalidArgument("solve_with_continuation: degenerate critical point");
    lam = std::min(lam, eps * eps * std::abs(curv[static_cast<std::size_t>(j)]) / (4.0 * std::abs(sj)));
  }
  CVec betas(seed.betas.size());
  for (int j = 0; j < q; ++j) {
    const auto [a, b] = seed.pairing.pairs[static_cast<std::size_t>(j)];
    cplx d = 2.0 * std::sqrt(lam * s[static_cast<std::size_t>(j)] / curv[static_cast<std::size_t>(j)]);
    // Keep the start of the cut on the same side as in the seed.
    const cplx seed_dir = seed.betas[static_cast<std::size_t>(b)] - seed.betas[static_cast<std::size_t>(a)];
    if ((d * std::conj(seed_dir)).real() < 0.0) d = -d;
    if (std::abs((d * std::conj(seed_dir)).real()) < 1e-12 * std::abs(d) * std::abs(seed_dir) &&
        (d.real() < 0.0 || (d.real() == 0.0 && d.imag() < 0.0)))
      d = -d;
    betas[static_cast<std::size_t>(a)] = centre[static_cast<std::size_t>(j)] - d;
    betas[static_cast<std::size_t>(b)] = centre[static_cast<std::size_t>(j)] + d;
  }
  auto scaled = [&](double l) {
    CVec v = s;
    for (cplx& x : v) x *= l;
    return v;
  };
  HooftSolution sol = solve_from_hooft(W, scaled(lam), seed.pairing, betas, opt);
  double factor = 4.0;
  while (lam < 1.0) {
    const double next = std::min(1.0, lam * factor);
    try {
      HooftSolution trial = solve_from_hooft(W, scaled(next), seed.pairing, sol.betas, opt);
      sol = std::move(trial);
      lam = next;
      if (sol.iterations > 8) factor = std::max(1.0 + (factor - 1.0) / 2.0, 1.0 + 1e-3);
      else if (sol.iterations <= 3) factor = std::min(factor * 2.0, 16.0);
    } catch (const SolverFailure&) {
      factor = 1.0 + (factor - 1.0) / 2.0;
      if (factor - 1.0 < 1e-4) throw;
    }
  }
  return sol;
}

Eigen::MatrixXcd whitham_s_rhs(const CurveBranch& br, const AbelianBasis& basis) {
  const CutGeometry& g = br.geometry();
  const int q = g.q();
  const CVec& b = g.betas();
  const int nb = static_cast<int>(b.size());
  Eigen::MatrixXcd M(nb, q);
  for (int i = 0; i < nb; ++i) {
    const cplx bi = b[static_cast<std::size_t>(i)];
    cplx den = br.A()(bi);
    for (int k = 0; k < nb; ++k)
      if (k != i) den *= bi - b[static_cast<std::size_t>(k)];
    const cplx p0 = basis.P[0](bi);
    for (int j = 0; j < q; ++j) {
      cplx num = p0;
      if (j + 1 < q) num += kFirstKindSign * kTwoPiI * basis.p[static_cast<std::size_t>(j)](bi);
      M(i, j) = 4.0 * num / den;
    }
  }
  return M;
}

FlowResult flow_hooft(const Potential& W, const CutSystem& pairing, const CVec& betas0, const std::vector<CVec>& path,
                      const FlowOptions& opt) {
  if (path.size() < 2) throw InvalidArgument("flow_hooft: path needs at least two points");
  const int q = pairing.q();
  for (const CVec& p : path)
    if (static_cast<int>(p.size()) != q) throw InvalidArgument("flow_hooft: path point has wrong size");
  auto t_of = [&](const CVec& b) { return CurveBranch(W, CutGeometry(b, pairing)).implied_t(); };
  auto residual_at = [&](const CVec& s, const CVec& b) {
    return inf_norm(hooft_residual(W, s, pairing, b, t_of(b), opt.newton.quad));
  };
  if (residual_at(path[0], betas0) > 1e-6) throw InvalidArgument("flow_hooft: start does not match path[0]");

  auto to_vec = [](const CVec& v) { return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size())).eval(); };
  auto to_cvec = [](const Eigen::VectorXcd& v) { return CVec(v.data(), v.data() + v.size()); };

  FlowResult out;
  out.points.push_back({0.0, path[0], betas0, t_of(betas0), residual_at(path[0], betas0), false});
  Eigen::VectorXcd y = to_vec(betas0);
  const double sc = scale_of(betas0);

  for (std::size_t m = 0; m + 1 < path.size(); ++m) {
    const Eigen::VectorXcd ds = to_vec(path[m + 1]) - to_vec(path[m]);
    auto s_at = [&](double x) {
      CVec v = path[m];
      for (int j = 0; j < q; ++j) v[static_cast<std::size_t>(j)] += (x - static_cast<double>(m)) * ds(j);
      return v;
    };
    auto rhs = [&](double, const Eigen::VectorXcd& state) -> Eigen::VectorXcd {
      const CurveBranch br(W, CutGeometry(to_cvec(state), pairing));
      const AbelianBasis basis = abelian_basis(br.geometry(), 0, opt.newton.quad);
      return whitham_s_rhs(br, basis) * ds;
    };
    auto accept = [&](double x, Eigen::VectorXcd& state) {
      CVec b = to_cvec(state);
      const CurveBranch br(W, CutGeometry(b, pairing));
      out.min_distance = collision_distance(br.A(), b);
      if (out.min_distance < opt.catastrophe_dist * sc) {
        out.catastrophe = true;
        out.points.push_back({x, s_at(x), b, br.implied_t(), residual_at(s_at(x), b), false});
        return false;
      }
      FlowPoint p{x, s_at(x), b, br.implied_t(), residual_at(s_at(x), b), false};
      if (p.residual > opt.verify_tol) {
        const HooftSolution sol = solve_from_hooft(W, p.s, pairing, b, opt.newton);
        p.betas = sol.betas;
        p.t = sol.t;
        p.polished = true;
        state = to_vec(sol.betas);
      }
      out.points.push_back(std::move(p));
      return true;
    };
    try {
      const OdeResult r = integrate_dp45(rhs, static_cast<double>(m), static_cast<double>(m + 1), y, accept, opt.ode);
      y = r.y;
      if (r.stopped) return out;
    } catch (const IntegrationFailure&) {
      out.catastrophe = true;
      return out;
    } catch (const Degeneracy&) {
      out.catastrophe = true;
      return out;
    } catch (const SingularJacobian&) {
      out.catastrophe = true;
      return out;
    }
  }
  return out;
}

}  // namespace spectral
