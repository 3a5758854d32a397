#include "spectral/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spectral {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kAberthMaxSweeps = 500;
constexpr double kBackwardTol = 1e-13;

// Double-double real, enough for a compensated Horner scheme.
struct DD {
  double hi = 0.0, lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

DD dd_mul(DD a, double b) {
  const double p = a.hi * b;
  const double e = std::fma(a.hi, b, -p);
  return two_sum(p, e + a.lo * b);
}

DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

struct DDComplex {
  DD re, im;
};

DDComplex dd_fma(DDComplex acc, cplx z, cplx c) {
  const DD nr = dd_add(dd_mul(acc.re, z.real()), dd_neg(dd_mul(acc.im, z.imag())));
  const DD ni = dd_add(dd_mul(acc.re, z.imag()), dd_mul(acc.im, z.real()));
  return {dd_add(nr, DD{c.real(), 0.0}), dd_add(ni, DD{c.imag(), 0.0})};
}

DDComplex dd_fma(DDComplex acc, cplx z, DDComplex c) {
  const DD nr = dd_add(dd_mul(acc.re, z.real()), dd_neg(dd_mul(acc.im, z.imag())));
  const DD ni = dd_add(dd_mul(acc.re, z.imag()), dd_mul(acc.im, z.real()));
  return {dd_add(nr, c.re), dd_add(ni, c.im)};
}

cplx to_cplx(DDComplex a) { return {a.re.hi + a.re.lo, a.im.hi + a.im.lo}; }

// p(z) and p'(z) in doubled working precision. Near an m-fold root plain Horner only
// resolves the root to eps^{1/m}, which is too coarse to place a cluster's centroid.
std::pair<cplx, cplx> horner_compensated(const CVec& c, cplx z) {
  DDComplex p, d;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    d = dd_fma(d, z, p);
    p = dd_fma(p, z, *it);
  }
  return {to_cplx(p), to_cplx(d)};
}
}  // namespace

// ---------------------------------------------------------------- ComplexPoly

ComplexPoly::ComplexPoly(CVec ascending) : c_(std::move(ascending)) { trim(); }

ComplexPoly::ComplexPoly(std::initializer_list<cplx> ascending) : c_(ascending) { trim(); }

ComplexPoly ComplexPoly::constant(cplx c) { return ComplexPoly(CVec{c}); }

ComplexPoly ComplexPoly::monomial(int degree, cplx c) {
  if (degree < 0) throw InvalidArgument("monomial: negative degree");
  CVec v(static_cast<std::size_t>(degree) + 1, 0.0);
  v.back() = c;
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::from_roots(std::span<const cplx> roots, cplx lead) {
  CVec v{lead};
  for (cplx r : roots) {
    CVec next(v.size() + 1, 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
      next[k + 1] += v[k];
      next[k] -= r * v[k];
    }
    v = std::move(next);
  }
  return ComplexPoly(std::move(v));
}

void ComplexPoly::trim() {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

cplx ComplexPoly::operator[](int k) const noexcept {
  if (k < 0 || k >= static_cast<int>(c_.size())) return {};
  return c_[static_cast<std::size_t>(k)];
}

cplx ComplexPoly::operator()(cplx z) const noexcept {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPoly ComplexPoly::derivative() const {
  if (c_.size() <= 1) return {};
  CVec d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return ComplexPoly(std::move(d));
}

double ComplexPoly::norm_inf() const noexcept {
  double m = 0.0;
  for (const auto& a : c_) m = std::max(m, std::abs(a));
  return m;
}

double ComplexPoly::abs_eval(double r) const noexcept {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx s) {
  for (auto& a : c_) a *= s;
  trim();
  return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  CVec v(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return ComplexPoly(std::move(v));
}

// -------------------------------------------------------------------- RootSet

int RootSet::total_multiplicity() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

double RootSet::min_separation() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) m = std::min(m, std::abs(roots[i] - roots[j]));
  return m;
}

// ----------------------------------------------------------------- root finder

CVec find_roots(const ComplexPoly& p) {
  if (p.is_zero() || p.degree() < 1) throw InvalidArgument("find_roots: degree must be >= 1");

  // Exact zeros at the origin are peeled off first; Aberth needs a nonzero constant term.
  const CVec& all = p.coeffs();
  std::size_t zeros = 0;
  while (zeros < all.size() && all[zeros] == cplx{}) ++zeros;
  CVec roots(zeros, 0.0);
  const ComplexPoly q(CVec(all.begin() + static_cast<std::ptrdiff_t>(zeros), all.end()));
  const int n = q.degree();
  if (n == 0) return roots;

  const cplx lead = q.lead();
  CVec monic = q.coeffs();
  for (auto& a : monic) a /= lead;
  const ComplexPoly mp(monic);

  if (n == 1) {
    roots.push_back(-monic[0]);
    return roots;
  }

  // Initial guesses on a circle about the root centroid, radius from a Fujiwara-type bound.
  const cplx centre = -monic[static_cast<std::size_t>(n - 1)] / static_cast<double>(n);
  double radius = 0.0;
  {
    // Bound on |z - centre| from the shifted polynomial's coefficients.
    CVec shifted = monic;
    for (int k = 0; k < n; ++k)
      for (int j = n - 1; j >= k; --j) shifted[static_cast<std::size_t>(j)] += centre * shifted[static_cast<std::size_t>(j + 1)];
    for (int k = 0; k < n; ++k) {
      const double a = std::abs(shifted[static_cast<std::size_t>(k)]);
      if (a > 0) radius = std::max(radius, std::pow(a, 1.0 / (n - k)));
    }
    if (radius == 0.0) radius = 1.0;
  }
  CVec z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * kPi * k / n + 0.4;
    z[static_cast<std::size_t>(k)] = centre + radius * cplx(std::cos(th), std::sin(th));
  }

  // No root is frozen. Inside a cluster every point within eps^{1/m} has a rounding-level
  // (even exactly zero) residual, so acceptance goes through the backward error of the set.
  std::vector<double> resid(static_cast<std::size_t>(n), 0.0);
  bool converged = false;
  for (int sweep = 0; sweep < kAberthMaxSweeps && !converged; ++sweep) {
    bool all_small = true;
    bool moved = false;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto [pv, dv] = horner_compensated(monic, z[ui]);
      const double scale = mp.abs_eval(std::abs(z[ui]));
      resid[ui] = std::abs(pv) / scale;
      if (pv == cplx{}) continue;
      if (resid[ui] > 8.0 * n * kEps * kEps) all_small = false;
      const cplx ratio = pv / dv;
      cplx sum{};
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[ui] - z[static_cast<std::size_t>(j)]);
      const cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[ui] -= step;
      if (std::abs(step) > 2.0 * kEps * std::abs(z[ui])) moved = true;
    }
    converged = !moved || (all_small && reconstruction_error(mp, z) <= kBackwardTol);
  }
  roots.insert(roots.end(), z.begin(), z.end());
  if (!converged && reconstruction_error(p, roots) > 1e-12)
    throw SolverFailure("find_roots: Aberth iteration did not converge", resid);
  return roots;
}

double reconstruction_error(const ComplexPoly& p, std::span<const cplx> roots) {
  const ComplexPoly r = ComplexPoly::from_roots(roots, p.lead());
  const double scale = std::max(p.norm_inf(), std::numeric_limits<double>::min());
  return (r - p).norm_inf() / scale;
}

// ----------------------------------------------------------------- clustering

namespace {

int find_set(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

bool less_complex(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Greedy complete-linkage grouping of one over-wide cluster; used only to report ambiguity.
std::vector<int> complete_linkage_sizes(std::span<const cplx> pts, double tol) {
  std::vector<std::vector<cplx>> groups;
  for (cplx p : pts) {
    bool placed = false;
    for (auto& g : groups) {
      const bool fits = std::all_of(g.begin(), g.end(), [&](cplx q) { return std::abs(p - q) <= tol; });
      if (fits) {
        g.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({p});
  }
  std::vector<int> sizes;
  for (auto& g : groups) sizes.push_back(static_cast<int>(g.size()));
  return sizes;
}

}  // namespace

RootSet cluster_roots(std::span<const cplx> roots, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("cluster_roots: tolerance must be positive");
  const int n = static_cast<int>(roots.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]) <= tol) {
        const int a = find_set(parent, i), b = find_set(parent, j);
        if (a != b) parent[static_cast<std::size_t>(b)] = a;
      }

  std::vector<std::vector<cplx>> members;
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find_set(parent, i);
    if (label[static_cast<std::size_t>(r)] < 0) {
      label[static_cast<std::size_t>(r)] = static_cast<int>(members.size());
      members.emplace_back();
    }
    members[static_cast<std::size_t>(label[static_cast<std::size_t>(r)])].push_back(roots[static_cast<std::size_t>(i)]);
  }

  std::vector<std::pair<cplx, int>> clusters;
  std::vector<int> loose, tight;
  bool ambiguous = false;
  for (const auto& m : members) {
    cplx c{};
    for (cplx v : m) c += v;
    c /= static_cast<double>(m.size());
    clusters.emplace_back(c, static_cast<int>(m.size()));
    loose.push_back(static_cast<int>(m.size()));
    double diam = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) diam = std::max(diam, std::abs(m[i] - m[j]));
    if (diam > tol) {
      ambiguous = true;
      for (int s : complete_linkage_sizes(m, tol)) tight.push_back(s);
    } else {
      tight.push_back(static_cast<int>(m.size()));
    }
  }
  if (ambiguous) {
    std::sort(loose.begin(), loose.end());
    std::sort(tight.begin(), tight.end());
    throw AmbiguousClustering("cluster_roots: chained cluster wider than tolerance", tight, loose);
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return less_complex(a.first, b.first); });
  RootSet out;
  out.cluster_tolerance = tol;
  for (const auto& [c, m] : clusters) {
    out.roots.push_back(c);
    out.multiplicities.push_back(m);
  }
  return out;
}

// --------------------------------------------------------------- discriminant

cplx discriminant(const ComplexPoly& p) {
  const int n = p.degree();
  if (p.is_zero() || n < 2) throw InvalidArgument("discriminant: degree must be >= 2");
  if (n > 64) throw InvalidArgument("discriminant: degree above 64 is not supported");
  const ComplexPoly dp = p.derivative();
  const int m = n - 1;
  const int size = n + m;
  Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(size, size);
  // m shifted rows of p, n shifted rows of p', coefficients in descending order.
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) syl(r, r + k) = p[n - k];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) syl(m + r, r + k) = dp[m - k];
  const cplx res = Eigen::PartialPivLU<Eigen::MatrixXcd>(syl).determinant();
  const double sign = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign * res / p.lead();
}

cplx discriminant_from_roots(std::span<const cplx> roots, cplx lead) {
  const int n = static_cast<int>(roots.size());
  cplx acc = std::pow(lead, 2 * n - 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cplx d = roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
      acc *= d * d;
    }
  return acc;
}

// ------------------------------------------------------------- Laurent series

cplx LaurentSeries::coeff(int k) const {
  const int i = top - k;
  if (i < 0 || i >= static_cast<int>(c.size())) return {};
  return c[static_cast<std::size_t>(i)];
}

ComplexPoly LaurentSeries::plus_part() const {
  if (top < 0) return {};
  CVec v(static_cast<std::size_t>(top) + 1, 0.0);
  for (int k = 0; k <= top; ++k) v[static_cast<std::size_t>(k)] = coeff(k);
  return ComplexPoly(std::move(v));
}

CVec sqrt_product_series(std::span<const cplx> betas, int order) {
  if (order < 0) return {};
  // Q(w) = prod (1 - beta_i w), truncated at w^order.
  CVec qs(static_cast<std::size_t>(order) + 1, 0.0);
  qs[0] = 1.0;
  for (cplx b : betas)
    for (int k = order; k >= 1; --k) qs[static_cast<std::size_t>(k)] -= b * qs[static_cast<std::size_t>(k - 1)];
  // S^2 = Q with S(0) = 1.
  CVec s(static_cast<std::size_t>(order) + 1, 0.0);
  s[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    cplx acc = qs[static_cast<std::size_t>(k)];
    for (int j = 1; j < k; ++j) acc -= s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
    s[static_cast<std::size_t>(k)] = 0.5 * acc;
  }
  return s;
}

LaurentSeries poly_times_y0(const ComplexPoly& a, std::span<const cplx> betas, int power,
                            int lowest) {
  if (power != 1 && power != -1) throw InvalidArgument("poly_times_y0: power must be +1 or -1");
  if (betas.size() % 2 != 0) throw InvalidArgument("poly_times_y0: odd number of branch points");
  const int q = static_cast<int>(betas.size()) / 2;
  LaurentSeries out;
  if (a.is_zero()) {
    out.top = lowest;
    out.c = {0.0};
    return out;
  }
  out.top = a.degree() + power * q;
  const int order = std::max(0, out.top - lowest);
  CVec s = sqrt_product_series(betas, order);
  if (power == -1) {
    CVec r(s.size(), 0.0);
    r[0] = 1.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      cplx acc{};
      for (std::size_t j = 1; j <= k; ++j) acc -= s[j] * r[k - j];
      r[k] = acc;
    }
    s = std::move(r);
  }
  // a(z) z^{power q} S(1/z): coefficient of z^{top - i}.
  out.c.assign(static_cast<std::size_t>(order) + 1, 0.0);
  const int da = a.degree();
  for (int i = 0; i <= order; ++i) {
    cplx acc{};
    for (int j = 0; j <= std::min(i, da); ++j) acc += a[da - j] * s[static_cast<std::size_t>(i - j)];
    out.c[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

ComplexPoly plus_projection(const ComplexPoly& numer, std::span<const cplx> betas) {
  return poly_times_y0(numer, betas, -1, 0).plus_part();
}

ComplexPoly y0_monomial_plus(int k, std::span<const cplx> betas) {
  const int q = static_cast<int>(betas.size()) / 2;
  if (k + q < 0) return {};
  // z^k y0 = z^{k+q} S(1/z); only the first k+q+1 series terms reach nonnegative powers.
  CVec s = sqrt_product_series(betas, k + q);
  CVec v(static_cast<std::size_t>(k + q) + 1, 0.0);
  for (int i = 0; i <= k + q; ++i) v[static_cast<std::size_t>(k + q - i)] = s[static_cast<std::size_t>(i)];
  return ComplexPoly(std::move(v));
}

}  // namespace spectral
