#include "spectral/periods.hpp"

#include <algorithm>
#include <cmath>

namespace spectral {

namespace {

// Point along the segment a -> b at fraction t, with c = 1 - t used near b.
cplx along(cplx a, cplx b, double t, double c) { return t <= 0.5 ? a + t * (b - a) : b - c * (b - a); }

cplx segment_integral(cplx a, cplx b, const std::function<cplx(cplx)>& f, const QuadratureOptions& opt) {
  return tanh_sinh([&](double t, double c) { return f(along(a, b, t, c)); }, opt) * (b - a);
}

double segment_distance(cplx z, cplx a, cplx b) {
  const cplx d = b - a;
  const double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

}  // namespace

CurveBranch::CurveBranch(Potential W, CutGeometry geom)
    : W_(std::move(W)), geom_(std::move(geom)), a_(alpha_polynomial(W_, geom_.betas())) {}

ComplexPoly CurveBranch::implied_P() const { return a_ * a_ * ComplexPoly::from_roots(geom_.betas()); }

CVec CurveBranch::implied_t() const {
  const ComplexPoly d = implied_P() - W_.Wp() * W_.Wp();
  const int N = W_.N();
  CVec t(static_cast<std::size_t>(N));
  for (int k = 1; k <= N; ++k) t[static_cast<std::size_t>(k - 1)] = d[N - k];
  return t;
}

double CurveBranch::consistency_defect() const {
  const ComplexPoly d = implied_P() - W_.Wp() * W_.Wp();
  double m = 0.0;
  for (int k = W_.N(); k <= d.degree(); ++k) m = std::max(m, std::abs(d[k]));
  return m;
}

cplx a_period(const CutGeometry& geom, int j, const std::function<cplx(cplx, cplx)>& f,
              const QuadratureOptions& opt) {
  if (j < 0 || j >= geom.q()) throw InvalidArgument("a_period: cut index out of range");
  const CVec& v = geom.vertices(j);
  if (geom.straight(j)) {
    const cplx m = 0.5 * (v[0] + v[1]);
    const cplx d = 0.5 * (v[1] - v[0]);
    // z = m + d tau; the weight sqrt(1 - tau^2) is put back so that f y0 ~ sqrt and
    // f / y0 ~ 1/sqrt are both smooth in tau.
    const cplx I = gauss_chebyshev(
        [&](double tau) {
          const cplx z = m + d * tau;
          const double w = std::sqrt((1.0 - tau) * (1.0 + tau));
          return f(z, kI * d * w * geom.others(j, z)) * d * w;
        },
        opt);
    return -2.0 * I;
  }
  cplx acc{};
  for (std::size_t s = 0; s + 1 < v.size(); ++s)
    acc += tanh_sinh([&](double t, double c) {
             return f(along(v[s], v[s + 1], t, c), geom.y0_left_param(j, s, t, c));
           }, opt) * (v[s + 1] - v[s]);
  return -2.0 * acc;
}

HooftParams hooft_params(const CurveBranch& br, const QuadratureOptions& opt) {
  HooftParams h;
  const ComplexPoly& A = br.A();
  for (int j = 0; j < br.q(); ++j) {
    const cplx per = a_period(br.geometry(), j, [&](cplx z, cplx y0p) { return A(z) * y0p; }, opt);
    h.s.push_back(-per / (4.0 * kPi * kI));
    h.total += h.s.back();
  }
  h.residual = std::abs(h.total + br.implied_t().front() / 4.0);
  return h;
}

HooftParams hooft_from_curve(const SpectralCurve& curve, const BranchConfiguration& config,
                             const CutSystem& pairing, const QuadratureOptions& opt) {
  const CurveBranch br(curve.potential, CutGeometry(config.betas, pairing));
  // y^2 must reproduce P away from the cuts.
  const ComplexPoly P = curve.P();
  const double r = 2.0 + 2.0 * br.geometry().radius();
  for (int k = 0; k < 8; ++k) {
    const cplx z = std::polar(r, 2.0 * kPi * (k + 0.3) / 8.0);
    const cplx y = br.y(z);
    if (std::abs(y * y - P(z)) > 1e-8 * (1.0 + P.abs_eval(r)))
      throw BranchError("hooft_from_curve: branch points do not factorise the curve");
  }
  HooftParams h = hooft_params(br, opt);
  h.residual = std::abs(h.total + curve.t.front() / 4.0);
  return h;
}

AbelianBasis abelian_basis(const CutGeometry& geom, int n_max, const QuadratureOptions& opt) {
  const int q = geom.q();
  if (q < 1) throw InvalidArgument("abelian_basis: need at least one cut");
  const int m = q - 1;
  const CVec& betas = geom.betas();
  AbelianBasis out;
  out.period_matrix = Eigen::MatrixXcd::Zero(m, m);
  auto periods_of = [&](const ComplexPoly& num) {
    Eigen::VectorXcd v(m);
    for (int i = 0; i < m; ++i) v(i) = a_period(geom, i, [&](cplx z, cplx y0p) { return num(z) / y0p; }, opt);
    return v;
  };
  for (int k = 0; k < m; ++k) out.period_matrix.col(k) = periods_of(ComplexPoly::monomial(k));

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  if (m > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.period_matrix);
    const auto& sv = svd.singularValues();
    const double smin = sv(m - 1);
    out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(out.condition < 1e12)) throw Degeneracy("abelian_basis: singular period matrix", smin);
    lu.compute(out.period_matrix);
  }
  auto to_poly = [&](const Eigen::VectorXcd& c) {
    CVec v(c.data(), c.data() + c.size());
    return ComplexPoly(std::move(v));
  };

  for (int j = 0; j < m; ++j) out.p.push_back(to_poly(lu.solve(Eigen::VectorXcd::Unit(m, j))));

  for (int n = 0; n <= n_max; ++n) {
    ComplexPoly base = (n == 0) ? y0_monomial_plus(-1, betas)
                                : ComplexPoly::constant(0.5 * n) * y0_monomial_plus(n - 1, betas);
    if (m > 0) base = base + to_poly(lu.solve(-periods_of(base)));
    out.P.push_back(std::move(base));
  }
  return out;
}

DensityValue spectral_density(const CurveBranch& br, int j, cplx x) {
  const CutGeometry& g = br.geometry();
  if (j < 0 || j >= g.q()) throw InvalidArgument("spectral_density: cut index out of range");
  const double tol = 1e-14 * (1.0 + std::abs(x));
  if (std::abs(x - g.start(j)) <= tol || std::abs(x - g.end(j)) <= tol) return {0.0, true};
  const CVec& v = g.vertices(j);
  std::size_t seg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < v.size(); ++s) {
    const double d = segment_distance(x, v[s], v[s + 1]);
    if (d < best) {
      best = d;
      seg = s;
    }
  }
  if (best > 1e-9 * (1.0 + std::abs(x))) throw InvalidArgument("spectral_density: point is not on the cut");
  const cplx d = (v[seg + 1] - v[seg]) / std::abs(v[seg + 1] - v[seg]);
  return {br.y_left(j, x) * d / kTwoPiI, false};
}

CVec l_parameters(const CurveBranch& br, const QuadratureOptions& opt) {
  const CutGeometry& g = br.geometry();
  g.check_monotone();
  const cplx e = g.reference_direction();
  const cplx le = std::log(e);
  const ComplexPoly& A = br.A();
  CVec l;
  for (int j = 0; j < g.q(); ++j) {
    const cplx b = g.end(j);
    cplx acc{};
    for (int k = 0; k < g.q(); ++k) {
      const CVec& v = g.vertices(k);
      for (std::size_t s = 0; s + 1 < v.size(); ++s) {
        const cplx va = v[s], vb = v[s + 1];
        const bool ends_at_b = (k == j && s + 2 == v.size());
        acc += tanh_sinh(
                   [&](double t, double c) {
                     const cplx z = along(va, vb, t, c);
                     const cplx y0p = g.y0_left_param(k, s, t, c);
                     // Cuts up to j lie behind beta_{2j} on the path, later ones ahead of it.
                     const cplx w = (k <= j) ? (ends_at_b ? c * (vb - va) : b - z) : z - b;
                     return (le + std::log(std::conj(e) * w)) * A(z) * y0p;
                   },
                   opt) *
               (vb - va);
      }
    }
    l.push_back(br.potential().W()(b) - 2.0 * acc / kTwoPiI);
  }
  return l;
}

CVec l_parameters_limit(const CurveBranch& br, const QuadratureOptions& opt) {
  const CutGeometry& g = br.geometry();
  g.check_monotone();
  const cplx e = g.reference_direction();
  const ComplexPoly& A = br.A();
  const ComplexPoly& Wp = br.potential().Wp();
  const int q = g.q();

  // Coordinates along (p) and across (o) the reference direction: z = e (p + i o).
  double omin = std::numeric_limits<double>::infinity(), omax = -omin;
  for (int k = 0; k < q; ++k)
    for (cplx v : g.vertices(k)) {
      const double o = (std::conj(e) * v).imag();
      omin = std::min(omin, o);
      omax = std::max(omax, o);
    }
  const double R = g.radius();
  const double gap = 1.0 + (omax - omin);
  const cplx last = std::conj(e) * g.end(q - 1);
  const double pl = last.real() + 3.0 * R + 2.0;
  const cplx lambda0 = e * cplx(pl, last.imag());

  // Laurent tail beyond lambda0; |lambda0| > 2 R keeps the series converging fast.
  const int K = 80;
  const LaurentSeries ser = poly_times_y0(A, g.betas(), 1, -K);
  const cplx s = -0.5 * ser.coeff(-1);
  cplx tail{};
  for (int k = 2; k <= K; ++k) tail += ser.coeff(-k) * std::pow(lambda0, 1 - k) / static_cast<double>(k - 1);

  auto y_minus_wp = [&](cplx z) { return A(z) * g.y0_unchecked(z) - Wp(z); };
  CVec l;
  for (int j = 0; j < q; ++j) {
    const cplx b = g.end(j);
    const double pb = (std::conj(e) * b).real();
    cplx avg{};
    for (int side : {1, -1}) {
      const double o = side > 0 ? omax + gap : omin - gap;
      const cplx p1 = e * cplx(pb, o), p2 = e * cplx(pl, o);
      avg += 0.5 * (segment_integral(b, p1, y_minus_wp, opt) + segment_integral(p1, p2, y_minus_wp, opt) +
                    segment_integral(p2, lambda0, y_minus_wp, opt));
    }
    const cplx L = std::log(e) + std::log(std::conj(e) * lambda0);
    l.push_back(br.potential().W()(b) - 2.0 * s * L - avg - tail);
  }
  return l;
}

cplx b_period(const CurveBranch& br, int i, const QuadratureOptions& opt) {
  const CutGeometry& g = br.geometry();
  if (i < 0 || i >= g.q()) throw InvalidArgument("b_period: cut index out of range");
  g.check_monotone();
  const ComplexPoly& A = br.A();
  cplx acc{};
  // Across intermediate cuts the two-sided average of y vanishes.
  for (int k = i; k + 1 < g.q(); ++k)
    acc += segment_integral(g.end(k), g.start(k + 1), [&](cplx z) { return A(z) * g.y0_unchecked(z); }, opt);
  return acc;
}

cplx prepotential(const CurveBranch& br, const QuadratureOptions& opt) {
  const HooftParams h = hooft_params(br, opt);
  const CVec l = l_parameters(br, opt);
  const ComplexPoly& A = br.A();
  const ComplexPoly& W = br.potential().W();
  cplx moment{};
  for (int j = 0; j < br.q(); ++j)
    moment += a_period(br.geometry(), j, [&](cplx z, cplx y0p) { return A(z) * W(z) * y0p; }, opt);
  cplx F = -0.5 * moment / (4.0 * kPi * kI);
  for (int j = 0; j < br.q(); ++j) F += 0.5 * h.s[static_cast<std::size_t>(j)] * l[static_cast<std::size_t>(j)];
  return F;
}

cplx moment_at_infinity(const CurveBranch& br, int n, const QuadratureOptions& opt) {
  if (n < 0) throw InvalidArgument("moment_at_infinity: n must be nonnegative");
  const ComplexPoly& Wp = br.potential().Wp();
  const double r = 2.0 + 2.0 * br.geometry().radius();
  const cplx I = circle_integral(
      [&](cplx z) { return std::pow(z, n) * 0.5 * (br.y(z) + Wp(z)); }, 0.0, r, opt);
  return -I / kTwoPiI;
}

GeneratingDefect generating_defect(const CurveBranch& br, const AbelianBasis& basis, const HooftParams& s) {
  const Potential& W = br.potential();
  const int N = W.N();
  if (static_cast<int>(basis.P.size()) < N + 2) throw InvalidArgument("generating_defect: basis needs P_0..P_{N+1}");
  if (static_cast<int>(s.s.size()) != br.q()) throw InvalidArgument("generating_defect: wrong number of s_j");
  ComplexPoly rhs = ComplexPoly::constant(-2.0 * s.total) * basis.P[0];
  for (int n = 1; n <= N + 1; ++n) rhs = rhs + ComplexPoly::constant(2.0 * W.coefficient(n)) * basis.P[static_cast<std::size_t>(n)];
  for (int j = 0; j + 1 < br.q(); ++j)
    rhs = rhs - ComplexPoly::constant(4.0 * kPi * kI * s.s[static_cast<std::size_t>(j)]) * basis.p[static_cast<std::size_t>(j)];
  const ComplexPoly lhs = br.A() * ComplexPoly::from_roots(br.geometry().betas());
  GeneratingDefect d;
  d.polynomial = (lhs - rhs).norm_inf();
  for (cplx b : br.geometry().betas()) d.at_branch_points = std::max(d.at_branch_points, std::abs(rhs(b)));
  return d;
}

}  // namespace spectral
