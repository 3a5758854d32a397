#include "spectral/scaling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "spectral/polynomial.hpp"

namespace spectral {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

CVec add(const CVec& a, const CVec& b, cplx s = 1.0) {
  CVec out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b[i];
  return out;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 3) throw InvalidArgument("ode grid: need at least three nodes");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("ode grid: nodes must increase strictly");
}

// Integrate u' = F(x, u) (order 1) or u'' = F(x, u) (order 2, state (u, u')) through the
// grid. Residuals come from three-point differences of the trajectory at x_i +/- delta_i,
// with delta_i balancing truncation against rounding from a first-pass derivative estimate.
// `pole_order` p assumes |u| ~ (x0 - x)^-p when estimating a blow-up location.
template <class Fn>
ODESolution integrate_grid(Fn&& F, int order, int m, const std::vector<double>& grid, const CVec& init,
                           double pole_order, const OdeGridOptions& opt) {
  check_grid(grid);
  if (static_cast<int>(init.size()) != order * m) throw InvalidArgument("ode grid: initial state has wrong size");

  auto rhs = [&](double x, const OdeState& y) -> OdeState {
    const Eigen::VectorXcd u = y.head(m);
    const Eigen::VectorXcd g = F(x, u);
    if (order == 1) return g;
    OdeState d(2 * m);
    d << y.tail(m), g;
    return d;
  };
  auto too_big = [&](const OdeState& y) {
    for (int k = 0; k < m; ++k)
      if (!(std::abs(y(k)) <= opt.blowup_bound)) return true;
    return false;
  };

  bool blew = false;
  double blow_x = std::numeric_limits<double>::quiet_NaN();
  auto note_blowup = [&](double x, const OdeState& y) {
    blew = true;
    int k = 0;
    for (int j = 1; j < m; ++j)
      if (std::abs(y(j)) > std::abs(y(k))) k = j;
    const cplx du = order == 2 ? y(m + k) : rhs(x, y)(k);
    blow_x = x + pole_order * std::real(y(k) / du);
  };

  // Advance `y` from x0 to x1; false if it blew up on the way.
  auto advance = [&](double x0, double x1, OdeState& y) {
    OdeOptions o = opt.ode;
    o.h0 = std::min(o.h0, x1 - x0);
    auto accept = [&](double x, OdeState& s) {
      if (too_big(s)) {
        note_blowup(x, s);
        return false;
      }
      return true;
    };
    try {
      const OdeResult r = integrate_dp45(rhs, x0, x1, y, accept, o);
      y = r.y;
      return !r.stopped;
    } catch (const IntegrationFailure& e) {
      blew = true;
      blow_x = e.at();
      return false;
    }
  };

  const OdeState y0 = Eigen::Map<const Eigen::VectorXcd>(init.data(), static_cast<Eigen::Index>(init.size()));

  // First pass: node values only.
  std::vector<OdeState> first{y0};
  {
    OdeState y = y0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!advance(grid[i - 1], grid[i], y)) break;
      first.push_back(y);
    }
  }
  const std::size_t K = first.size();
  const bool first_blew = blew;
  const double first_blow_x = blow_x;

  // Differencing steps: a local length scale from the first pass, times the
  // power of eps that balances five-point truncation against rounding.
  const double eps = std::numeric_limits<double>::epsilon();
  const double shrink = order == 2 ? std::pow(eps, 1.0 / 6.0) : std::pow(eps, 0.2);
  std::vector<double> delta(K, 0.0);
  for (std::size_t i = 1; i + 1 < K; ++i) {
    const double hl = grid[i] - grid[i - 1], hr = grid[i + 1] - grid[i];
    const Eigen::VectorXcd gl = F(grid[i - 1], first[i - 1].head(m)), gc = F(grid[i], first[i].head(m)),
                           gr = F(grid[i + 1], first[i + 1].head(m));
    const Eigen::VectorXcd dd = 2.0 * ((gr - gc) / hr - (gc - gl) / hl) / (hl + hr);
    double len = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      const double u = std::abs(first[i](k)) + 1e-6, w = std::abs(dd(k));
      if (w > 0.0) len = std::min(len, order == 2 ? std::pow(u / w, 0.25) : std::cbrt(u / w));
    }
    delta[i] = std::clamp(shrink * len, 1e-6, 0.2 * std::min(hl, hr));
  }

  // Second pass through the stations x_i - 2d, .., x_i + 2d.
  blew = false;
  ODESolution out;
  OdeState y = y0;
  out.grid.push_back(grid[0]);
  out.values.emplace_back(y0.data(), y0.data() + y0.size());
  double x = grid[0];
  double worst = 0.0;
  for (std::size_t i = 1; i < K; ++i) {
    if (i + 1 < K) {
      const double d = delta[i];
      std::array<OdeState, 5> st;
      OdeState cur = y;
      double from = x;
      bool ok = true;
      for (int j = 0; j < 5 && ok; ++j) {
        const double to = grid[i] + (j - 2) * d;
        ok = advance(from, to, cur);
        st[static_cast<std::size_t>(j)] = cur;
        from = to;
      }
      if (!ok) break;
      const Eigen::VectorXcd u = st[2].head(m);
      Eigen::VectorXcd lhs;
      if (order == 2)
        lhs = (-st[0].head(m) + 16.0 * st[1].head(m) - 30.0 * u + 16.0 * st[3].head(m) - st[4].head(m)) / (12.0 * d * d);
      else
        lhs = (st[0].head(m) - 8.0 * st[1].head(m) + 8.0 * st[3].head(m) - st[4].head(m)) / (12.0 * d);
      worst = std::max(worst, (lhs - F(grid[i], u)).cwiseAbs().maxCoeff());
      y = st[4];
      x = grid[i] + 2.0 * d;
      // Store the node value, not the station past it.
      out.grid.push_back(grid[i]);
      out.values.emplace_back(st[2].data(), st[2].data() + st[2].size());
    } else {
      if (!advance(x, grid[i], y)) break;
      x = grid[i];
      out.grid.push_back(grid[i]);
      out.values.emplace_back(y.data(), y.data() + y.size());
    }
  }
  out.residual_norm = worst;
  out.blew_up = first_blew || blew;
  out.blowup_x = first_blew ? first_blow_x : blow_x;
  return out;
}

}  // namespace

ScalingExpansion scaling_expansion(const Potential& W, const ReducedSolution& sol, std::vector<int> n,
                                   const ContourOptions& opt) {
  const int nb = static_cast<int>(sol.betas.size());
  const int q = nb / 2;
  if (static_cast<int>(sol.t_head.size()) != q) throw InvalidArgument("scaling_expansion: need t_1..t_q");
  if (n.empty()) n.assign(static_cast<std::size_t>(nb), 0);
  if (static_cast<int>(n.size()) != nb) throw InvalidArgument("scaling_expansion: n has wrong size");

  ScalingExpansion e;
  e.betas0 = sol.betas;
  e.t0 = sol.t_head;
  e.n = n;
  // V_k is exact as a difference because W is linear in t_1..t_q.
  auto V = [&](const CVec& b, int k) {
    CVec tk = sol.t_head;
    tk[static_cast<std::size_t>(k)] += 1.0;
    return epd_value(b, tk, W, opt) - epd_value(b, sol.t_head, W, opt);
  };
  const double h = 1e-4;
  e.A.resize(static_cast<std::size_t>(q));
  e.Akl = Eigen::MatrixXcd(q, nb);
  for (int k = 0; k < q; ++k) {
    e.A[static_cast<std::size_t>(k)] = V(sol.betas, k);
    for (int l = 0; l < nb; ++l) {
      CVec bp = sol.betas, bm = sol.betas;
      bp[static_cast<std::size_t>(l)] += h;
      bm[static_cast<std::size_t>(l)] -= h;
      e.Akl(k, l) = (V(bp, k) - V(bm, k)) / (2.0 * h);
    }
  }
  for (int l = 0; l < nb; ++l) {
    const int nl = n[static_cast<std::size_t>(l)];
    const cplx B = epd_derivative(sol.betas, sol.t_head, W, l, nl + 2, opt) / factorial(nl + 2);
    if (nl >= 1 && std::abs(B) < 1e-10)
      throw AmbiguousClassification("scaling_expansion: leading coefficient vanishes, classification is inconsistent");
    e.B.push_back(B);
    e.gamma.push_back(1.0 / (nl + 1));
    e.exponent.push_back(-double(nl) / (nl + 1));
  }
  return e;
}

ExponentFit blowup_exponent_fit(const std::vector<double>& dist, const std::vector<CVec>& dbeta, double decades,
                                int min_samples) {
  if (dist.size() != dbeta.size() || dist.empty()) throw InvalidArgument("blowup_exponent_fit: sizes differ or empty");
  double dmin = std::numeric_limits<double>::infinity();
  for (double d : dist)
    if (d > 0.0) dmin = std::min(dmin, d);
  const double dmax = dmin * std::pow(10.0, decades);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] > 0.0 && dist[i] <= dmax) idx.push_back(i);
  if (static_cast<int>(idx.size()) < min_samples) throw InvalidArgument("blowup_exponent_fit: scaling window too short");

  ExponentFit fit;
  fit.samples = static_cast<int>(idx.size());
  fit.window_lo = dmin;
  fit.window_hi = dmax;
  const std::size_t roots = dbeta[idx[0]].size();
  for (std::size_t l = 0; l < roots; ++l) {
    Eigen::MatrixXd X(fit.samples, 2);
    Eigen::VectorXd Y(fit.samples);
    for (int r = 0; r < fit.samples; ++r) {
      X(r, 0) = std::log(dist[idx[static_cast<std::size_t>(r)]]);
      X(r, 1) = 1.0;
      Y(r) = std::log(std::abs(dbeta[idx[static_cast<std::size_t>(r)]][l]));
    }
    const Eigen::Vector2d c = X.colPivHouseholderQr().solve(Y);
    fit.slope.push_back(c(0));
    fit.residual.push_back(std::sqrt((X * c - Y).squaredNorm() / fit.samples));
  }
  return fit;
}

namespace {

CVec unit_towards(const CVec& from, const CVec& to) {
  CVec u = add(to, from, -1.0);
  double nrm = 0.0;
  for (cplx x : u) nrm = std::max(nrm, std::abs(x));
  if (nrm == 0.0) throw InvalidArgument("scaling: start and singular point coincide");
  for (cplx& x : u) x /= nrm;
  return u;
}

}  // namespace

ApproachSamples approach_samples(const Potential& W, const CVec& betas_start, const CVec& t_start, const CVec& t0,
                                 int per_decade, double first, double last) {
  if (per_decade < 1 || !(last > 0.0) || !(first > last)) throw InvalidArgument("approach_samples: bad sampling");
  const CVec u = unit_towards(t0, t_start);
  std::vector<CVec> path{t_start};
  const int nodes = static_cast<int>(std::ceil(std::log10(first / last) * per_decade));
  for (int k = 0; k <= nodes; ++k) path.push_back(add(t0, u, first * std::pow(10.0, -double(k) / per_decade)));
  path.push_back(add(t0, u, -first));

  ApproachSamples out;
  out.flow = flow_t(W, betas_start, path);
  const Eigen::VectorXcd dir = -Eigen::Map<const Eigen::VectorXcd>(u.data(), static_cast<Eigen::Index>(u.size()));
  for (const FlowTPoint& p : out.flow.points) {
    double d = 0.0;
    for (std::size_t j = 0; j < t0.size(); ++j) d = std::max(d, std::abs(p.t[j] - t0[j]));
    // Past the last node the flow only creeps towards the halt.
    if (d < last * (1.0 - 1e-9)) continue;
    const Eigen::VectorXcd db = whitham_rhs_t(W, p.betas).rhs * dir;
    out.dist.push_back(d);
    out.dbeta.emplace_back(db.data(), db.data() + db.size());
  }
  return out;
}

CollapseResult scaling_collapse(const Potential& W, const CVec& betas_start, const CVec& t_start, const CVec& t0,
                                cplx beta0, int n, const std::vector<double>& eps, const std::vector<double>& tau) {
  if (eps.empty() || tau.empty()) throw InvalidArgument("scaling_collapse: empty sampling");
  const CVec u = unit_towards(t0, t_start);
  CollapseResult out;
  out.eps = eps;
  out.tau = tau;
  for (double e : eps) {
    CVec row;
    for (double tk : tau) {
      const FlowTResult r = flow_t(W, betas_start, {t_start, add(t0, u, e * tk)});
      if (r.catastrophe) throw IntegrationFailure("scaling_collapse: flow hit the catastrophe early", e * tk);
      const CVec& b = r.points.back().betas;
      const cplx bl = *std::min_element(b.begin(), b.end(), [&](cplx x, cplx y) { return std::abs(x - beta0) < std::abs(y - beta0); });
      row.push_back((bl - beta0) / std::pow(e, 1.0 / (n + 1)));
    }
    out.rescaled.push_back(row);
  }
  const std::size_t ref = static_cast<std::size_t>(std::min_element(eps.begin(), eps.end()) - eps.begin());
  double scale = 0.0;
  for (cplx v : out.rescaled[ref]) scale = std::max(scale, std::abs(v));
  for (const CVec& row : out.rescaled)
    for (std::size_t k = 0; k < row.size(); ++k)
      out.max_deviation = std::max(out.max_deviation, std::abs(row[k] - out.rescaled[ref][k]) / scale);
  return out;
}

std::array<double, 2> tritronquee_asymptotics(double x) {
  const double w = -x;
  return {-std::sqrt(w / 6.0) - 1.0 / (48.0 * w * w), 1.0 / (2.0 * std::sqrt(6.0 * w)) - 1.0 / (24.0 * w * w * w)};
}

ODESolution painleve1(const std::vector<double>& grid, const OdeGridOptions& opt) {
  check_grid(grid);
  if (grid.front() > -10.0) throw InvalidArgument("painleve1: start the grid at x <= -10");
  const auto a = tritronquee_asymptotics(grid.front());
  ODESolution s = integrate_grid(
      [](double x, const Eigen::VectorXcd& u) {
        Eigen::VectorXcd g(1);
        g(0) = 6.0 * u(0) * u(0) + x;
        return g;
      },
      2, 1, grid, CVec{a[0], a[1]}, 2.0, opt);
  if (s.values.size() < 2) throw BranchError("painleve1: immediate blow-up, wrong asymptotic branch");
  return s;
}

std::array<cplx, 2> regularized_asymptotics(int n, cplx B, cplx C, double xi) {
  if (n < 0) throw InvalidArgument("regularized_asymptotics: n must be nonnegative");
  if (B == 0.0 || C == 0.0) throw InvalidArgument("regularized_asymptotics: B and C must be nonzero");
  const cplx K0 = double(n + 1) * double(n + 2) * B;
  const cplx base = std::pow(-xi / (double(n + 2) * B), 1.0 / (n + 1));
  // Among the n+1 roots, take the one whose linearisation delta'' = kappa delta grows least.
  cplx rho = base;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) {
    const cplx r = base * std::polar(1.0, 2.0 * kPi * j / (n + 1));
    const cplx kappa = K0 * std::pow(r, n) / (2.0 * C);
    const double g = std::abs(std::sqrt(kappa).real());
    if (g < best - 1e-12) {
      best = g;
      rho = r;
    }
  }
  const cplx rp = -1.0 / (K0 * std::pow(rho, n));
  const cplx b1 = -2.0 * C * double(n) / (K0 * K0 * K0 * std::pow(rho, 3 * n + 1));
  const cplx b1p = -2.0 * C * double(n) * double(3 * n + 1) / (K0 * K0 * K0 * K0 * std::pow(rho, 4 * n + 2));
  return {rho + b1, rp + b1p};
}

ODESolution integrate_scalar_regularized(int n, cplx B, cplx C, const std::vector<double>& grid,
                                         std::optional<std::array<cplx, 2>> init, const OdeGridOptions& opt) {
  if (C == 0.0) throw InvalidArgument("integrate_scalar_regularized: C must be nonzero");
  if (n < 0) throw InvalidArgument("integrate_scalar_regularized: n must be nonnegative");
  check_grid(grid);
  const auto start = init ? *init : regularized_asymptotics(n, B, C, grid.front());
  ODESolution s = integrate_grid(
      [&](double xi, const Eigen::VectorXcd& u) {
        Eigen::VectorXcd g(1);
        g(0) = (xi + double(n + 2) * B * std::pow(u(0), n + 1)) / (2.0 * C);
        return g;
      },
      2, 1, grid, CVec{start[0], start[1]}, n > 0 ? 2.0 / n : 1.0, opt);
  if (s.values.size() < 2) throw BranchError("integrate_scalar_regularized: immediate blow-up");
  return s;
}

PainleveMap painleve_rescaling(cplx B, cplx C) {
  return {std::pow(16.0 * C / (B * B * B), 0.2), std::pow(8.0 * C * C / B, 0.2)};
}

CoupledCoefficients coupled_coefficients(const CoupledParams& p) {
  CoupledCoefficients c;
  c.Bm.setZero();
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c.Bm(l, m) += p.D[static_cast<std::size_t>(((l * 2 + i) * 2 + m) * 2 + j)];
  const cplx B11 = c.Bm(0, 0), B22 = c.Bm(1, 1), B12 = c.Bm(0, 1);
  const cplx den = B11 * B22 - B12 * B12;
  if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(B11 * B22)))
    throw Degeneracy("coupled_coefficients: B11 B22 - B12^2 vanishes", std::abs(den));
  const double k = 4.0 * (p.n + 2);
  c.A(0, 0) = k * p.B1 * B22 / den;
  c.A(0, 1) = -k * p.B2 * B12 / den;
  c.A(1, 0) = -k * p.B1 * B12 / den;
  c.A(1, 1) = k * p.B2 * B11 / den;
  c.a(0) = 4.0 * (B22 - B12) / den;
  c.a(1) = 4.0 * (B11 - B12) / den;
  return c;
}

ODESolution integrate_coupled(const RiccatiParams& p, const std::vector<double>& grid, const CVec& init,
                              const OdeGridOptions& opt) {
  if (p.n < 0) throw InvalidArgument("integrate_coupled: n must be nonnegative");
  const double k = p.n + 2;
  return integrate_grid(
      [&](double xi, const Eigen::VectorXcd& u) {
        Eigen::VectorXcd g(2);
        g(0) = p.D122 * xi + p.C * p.eta + k * p.B2 * std::pow(u(1), p.n + 1);
        g(1) = -p.D121 * xi - p.A * p.eta - k * p.B1 * std::pow(u(0), p.n + 1);
        return g;
      },
      1, 2, grid, init, p.n > 0 ? 1.0 / p.n : 1.0, opt);
}

ODESolution integrate_coupled(const CoupledParams& p, const std::vector<double>& grid, const CVec& init,
                              const OdeGridOptions& opt) {
  if (p.n < 0) throw InvalidArgument("integrate_coupled: n must be nonnegative");
  const CoupledCoefficients c = coupled_coefficients(p);
  return integrate_grid(
      [&](double xi, const Eigen::VectorXcd& u) {
        Eigen::Vector2cd pw(std::pow(u(0), p.n + 1), std::pow(u(1), p.n + 1));
        return Eigen::VectorXcd(c.A * pw + c.a * xi);
      },
      2, 2, grid, init, p.n > 0 ? 2.0 / p.n : 1.0, opt);
}

CatastropheLocation locate_catastrophe(const Potential& W, const CVec& betas0, const CVec& t_start, const CVec& t_end,
                                       double tol, const FlowTOptions& flow) {
  if (t_start.size() != t_end.size()) throw InvalidArgument("locate_catastrophe: endpoints differ in size");
  const CVec dt = add(t_end, t_start, -1.0);
  double len = 0.0;
  for (cplx d : dt) len = std::max(len, std::abs(d));
  if (len == 0.0) throw InvalidArgument("locate_catastrophe: empty segment");
  auto at = [&](double lam) { return add(t_start, dt, lam); };

  CatastropheLocation out;
  // A clean run ends where it was asked to; a flow that slipped past the singular point does not.
  auto clean_to = [&](const CVec& b, double from, double to, CVec& end) {
    ++out.flows;
    const FlowTResult r = flow_t(W, b, {at(from), at(to)}, flow);
    if (r.catastrophe) return false;
    end = r.points.back().betas;
    const CVec t = implied_t(W, end);
    const CVec target = at(to);
    for (std::size_t j = 0; j < target.size(); ++j)
      if (std::abs(t[j] - target[j]) > 1e-8 * (1.0 + std::abs(target[j]))) return false;
    return true;
  };

  double lo = 0.0, hi = 1.0;
  CVec b_lo = betas0, scratch;
  if (clean_to(b_lo, lo, hi, scratch)) throw InvalidArgument("locate_catastrophe: no catastrophe on the segment");
  while ((hi - lo) * len > tol) {
    const double mid = 0.5 * (lo + hi);
    CVec end;
    if (clean_to(b_lo, lo, mid, end)) {
      lo = mid;
      b_lo = end;
    } else {
      hi = mid;
    }
  }
  out.lambda = 0.5 * (lo + hi);
  out.width = hi - lo;
  out.t_head = at(out.lambda);
  out.betas = b_lo;
  out.t = implied_t(W, b_lo);
  const ComplexPoly A = alpha_polynomial(W, b_lo);
  if (A.degree() > 0) out.alphas = find_roots(A);
  return out;
}

}  // namespace spectral
