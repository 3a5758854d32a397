#include "spectral/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include <Eigen/Dense>

namespace spectral {

namespace {

ScanRow scan_node(const ScanSpec& spec, double x, double y) {
  ScanRow row;
  row.x = x;
  row.y = y;
  try {
    CVec t = spec.t_base;
    t.resize(static_cast<std::size_t>(spec.W.N()), 0.0);
    for (auto [a, v] : {std::pair{&spec.x, x}, std::pair{&spec.y, y}})
      if (a->t_index >= 0) t[static_cast<std::size_t>(a->t_index)] = a->scale * v;
    const SpectralCurve curve = build_curve(spec.W, t);
    const BranchConfiguration cfg = classify(curve, spec.classify_tol);
    row.q = cfg.q;
    row.regular = cfg.regular && cfg.q == spec.W.N();
    row.min_dist = cfg.min_dist;
    row.disc = discriminant(curve.P());
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<ScanRow> scan_grid(const ScanSpec& spec, int threads) {
  const int N = spec.W.N();
  for (const ScanAxis* a : {&spec.x, &spec.y}) {
    if (a->t_index == -1 && a->count > 1) throw InvalidArgument("scan_grid: inert axis '" + a->name + "' with several nodes");
    if (a->t_index < -1 || a->t_index >= N) throw InvalidArgument("scan_grid: axis '" + a->name + "' has no parameter");
    if (a->count < 0) throw InvalidArgument("scan_grid: negative node count on axis '" + a->name + "'");
  }
  if (spec.x.t_index >= 0 && spec.x.t_index == spec.y.t_index) throw InvalidArgument("scan_grid: both axes move the same parameter");
  if (static_cast<int>(spec.t_base.size()) > N) throw InvalidArgument("scan_grid: more than N base parameters");

  const std::size_t nx = static_cast<std::size_t>(spec.x.count), ny = static_cast<std::size_t>(spec.y.count);
  std::vector<ScanRow> rows(nx * ny);
  if (rows.empty()) return rows;

  // Workers pull whole grid lines; each writes only its own slots.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < ny;)
      for (std::size_t i = 0; i < nx; ++i)
        rows[j * nx + i] = scan_node(spec, spec.x.value(static_cast<int>(i)), spec.y.value(static_cast<int>(j)));
  };
  const int n = std::clamp(threads, 1, static_cast<int>(ny));
  std::vector<std::jthread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  return rows;
}

namespace {

// Monomials u^a v^b, a + b <= 4, and their first and second derivatives.
constexpr int kFitDeg = 4;

struct Monomials {
  std::vector<std::pair<int, int>> pw;
  Monomials() {
    for (int d = 0; d <= kFitDeg; ++d)
      for (int a = d; a >= 0; --a) pw.emplace_back(a, d - a);
  }
  static double mono(double u, int a) { return a < 0 ? 0.0 : std::pow(u, a); }
  double eval(const Eigen::VectorXd& c, double u, double v, int du = 0, int dv = 0) const {
    double s = 0.0;
    for (std::size_t k = 0; k < pw.size(); ++k) {
      auto [a, b] = pw[k];
      if (a < du || b < dv) continue;
      double f = 1.0;
      for (int r = 0; r < du; ++r) f *= a - r;
      for (int r = 0; r < dv; ++r) f *= b - r;
      s += c(static_cast<Eigen::Index>(k)) * f * mono(u, a - du) * mono(v, b - dv);
    }
    return s;
  }
};

}  // namespace

std::vector<CriticalPoint> discriminant_critical_points(const std::vector<ScanRow>& rows, int nx, int ny, int count,
                                                        double zero_tol) {
  constexpr int r = 3;
  if (nx < 2 * r + 1 || ny < 2 * r + 1 || static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) != rows.size())
    throw InvalidArgument("discriminant_critical_points: table does not match a grid of at least 7 x 7");
  auto at = [&](int i, int j) -> const ScanRow& { return rows[static_cast<std::size_t>(j * nx + i)]; };
  auto D = [&](int i, int j) { return at(i, j).disc.real(); };
  const double x0 = at(0, 0).x, y0 = at(0, 0).y;
  const double hx = at(1, 0).x - x0, hy = at(0, 1).y - y0;

  // |D| + h |grad D| is O(h) along a smooth piece of the zero set but smaller where the
  // gradient vanishes too.
  std::vector<std::pair<double, std::size_t>> rank;
  for (int j = 1; j + 1 < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i) {
      bool failed = false;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) failed = failed || !at(i + di, j + dj).error.empty();
      if (failed) continue;
      rank.emplace_back(
          std::abs(D(i, j)) + 0.5 * std::abs(D(i + 1, j) - D(i - 1, j)) + 0.5 * std::abs(D(i, j + 1) - D(i, j - 1)),
          static_cast<std::size_t>(j * nx + i));
    }
  std::sort(rank.begin(), rank.end());

  const Monomials M;
  const auto nm = static_cast<Eigen::Index>(M.pw.size());
  std::vector<CriticalPoint> out;
  const std::size_t tries = std::min(rank.size(), static_cast<std::size_t>(std::max(count, 1)) * 50);
  for (std::size_t k = 0; k < tries && static_cast<int>(out.size()) < count; ++k) {
    const int ci = std::clamp(static_cast<int>(rank[k].second) % nx, r, nx - 1 - r);
    const int cj = std::clamp(static_cast<int>(rank[k].second) / nx, r, ny - 1 - r);
    // Least squares in cell units centred on the window.
    Eigen::MatrixXd A((2 * r + 1) * (2 * r + 1), nm);
    Eigen::VectorXd b(A.rows());
    double scale = 0.0;
    bool failed = false;
    Eigen::Index row = 0;
    for (int dj = -r; dj <= r; ++dj)
      for (int di = -r; di <= r; ++di, ++row) {
        failed = failed || !at(ci + di, cj + dj).error.empty();
        for (Eigen::Index m = 0; m < nm; ++m)
          A(row, m) = Monomials::mono(di, M.pw[static_cast<std::size_t>(m)].first) *
                      Monomials::mono(dj, M.pw[static_cast<std::size_t>(m)].second);
        b(row) = D(ci + di, cj + dj);
        scale = std::max(scale, std::abs(b(row)));
      }
    if (failed || scale == 0.0) continue;
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b / scale);

    // Newton on grad p = 0; the Hessian is rank-deficient at a cusp, hence the pseudo-inverse.
    Eigen::Vector2d w(static_cast<int>(rank[k].second) % nx - ci, static_cast<int>(rank[k].second) / nx - cj);
    for (int it = 0; it < 100; ++it) {
      const Eigen::Vector2d g(M.eval(c, w(0), w(1), 1, 0), M.eval(c, w(0), w(1), 0, 1));
      Eigen::Matrix2d H;
      H << M.eval(c, w(0), w(1), 2, 0), M.eval(c, w(0), w(1), 1, 1), M.eval(c, w(0), w(1), 1, 1),
          M.eval(c, w(0), w(1), 0, 2);
      const Eigen::Vector2d step = H.completeOrthogonalDecomposition().solve(g);
      w -= step;
      if (step.norm() < 1e-12 || w.cwiseAbs().maxCoeff() > r) break;
    }
    if (!(w.cwiseAbs().maxCoeff() <= r)) continue;
    const double value = M.eval(c, w(0), w(1));
    const Eigen::Vector2d g(M.eval(c, w(0), w(1), 1, 0), M.eval(c, w(0), w(1), 0, 1));
    if (!(std::abs(value) <= zero_tol) || !(g.norm() <= std::sqrt(zero_tol))) continue;

    CriticalPoint p;
    p.x = at(ci, cj).x + w(0) * hx;
    p.y = at(ci, cj).y + w(1) * hy;
    p.i = std::clamp(static_cast<int>(std::lround((p.x - x0) / hx)), 0, nx - 1);
    p.j = std::clamp(static_cast<int>(std::lround((p.y - y0) / hy)), 0, ny - 1);
    p.value = value;
    bool fresh = true;
    for (const CriticalPoint& o : out) fresh = fresh && (std::abs(o.x - p.x) > hx || std::abs(o.y - p.y) > hy);
    if (fresh) out.push_back(p);
  }
  return out;
}

}  // namespace spectral
