#include "spectral/epd.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/polynomial.hpp"

namespace spectral {

namespace {

// (1/2 pi i) \oint F dz over |z| = R, i.e. the mean of F(z) z over equispaced nodes.
template <class Fn>
Eigen::VectorXcd circle_mean(double R, int dim, Fn&& fn, const ContourOptions& opt) {
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(dim), val(dim);
  Eigen::VectorXd mag = Eigen::VectorXd::Zero(dim);
  auto add = [&](int k, int M) {
    const cplx z = std::polar(R, 2.0 * kPi * k / M);
    fn(z, val);
    val *= z;
    sum += val;
    mag += val.cwiseAbs();
  };
  int M = opt.min_nodes;
  for (int k = 0; k < M; ++k) add(k, M);
  Eigen::VectorXcd prev = sum / double(M);
  while (M < opt.max_nodes) {
    for (int k = 1; k < 2 * M; k += 2) add(k, 2 * M);
    M *= 2;
    const Eigen::VectorXcd cur = sum / double(M);
    const double scale = std::max(mag.maxCoeff() / M, 1e-300);
    const double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (diff <= opt.rel_tol * scale) return cur;
    prev = cur;
  }
  throw QuadratureFailure("epd: circle quadrature did not converge", prev(0), sum(0) / double(M));
}

double max_abs(const CVec& v) {
  double m = 0.0;
  for (cplx x : v) m = std::max(m, std::abs(x));
  return m;
}

// y0(z) y(z) on a circle well outside every root, with y ~ W' and y0 ~ z^q.
class Product {
 public:
  Product(const CVec& betas, const CVec& t, const Potential& W, double radius) : betas_(betas) {
    if (betas.empty() || betas.size() % 2 != 0) throw InvalidArgument("epd: need 2q >= 2 branch points");
    if (static_cast<int>(t.size()) > W.N()) throw InvalidArgument("epd: more than N deformation parameters");
    CVec tt = t;
    tt.resize(static_cast<std::size_t>(W.N()));
    P_ = build_curve(W, tt).P();
    roots_ = find_roots(P_);
    const double enclose = std::max(max_abs(betas), max_abs(roots_));
    if (radius > 0.0 && radius <= enclose) throw InvalidArgument("epd: contour radius does not enclose every root");
    R_ = radius > 0.0 ? radius : 2.0 + 2.0 * enclose;
    N_ = W.N();
  }

  double radius() const { return R_; }

  cplx operator()(cplx z) const {
    cplx ref = std::pow(z, N_), y0 = std::pow(z, static_cast<int>(betas_.size() / 2));
    for (cplx r : roots_) ref *= std::sqrt(1.0 - r / z);
    for (cplx b : betas_) y0 *= std::sqrt(1.0 - b / z);
    cplx y = std::sqrt(P_(z));
    if (std::abs(y + ref) < std::abs(y - ref)) y = -y;
    if (std::abs(y - ref) > 1e-3 * std::abs(y)) throw BranchError("epd: branch of y lost on the circle");
    return y0 * y;
  }

 private:
  CVec betas_, roots_;
  ComplexPoly P_;
  double R_ = 0.0;
  int N_ = 0;
};

}  // namespace

double epd_derivative_constant(int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= j - 0.5;
  return c;
}

cplx epd_value(const CVec& betas, const CVec& t, const Potential& W, const ContourOptions& opt) {
  const Product F(betas, t, W, opt.radius);
  return circle_mean(F.radius(), 1, [&](cplx z, Eigen::VectorXcd& out) { out(0) = F(z); }, opt)(0);
}

CVec epd_gradient(const CVec& betas, const CVec& t, const Potential& W, const ContourOptions& opt) {
  const Product F(betas, t, W, opt.radius);
  const int n = static_cast<int>(betas.size());
  const Eigen::VectorXcd g = circle_mean(
      F.radius(), n,
      [&](cplx z, Eigen::VectorXcd& out) {
        const cplx v = F(z);
        for (int i = 0; i < n; ++i) out(i) = -0.5 * v / (z - betas[static_cast<std::size_t>(i)]);
      },
      opt);
  return CVec(g.data(), g.data() + n);
}

cplx epd_derivative(const CVec& betas, const CVec& t, const Potential& W, int i, int k,
                    const ContourOptions& opt) {
  if (k < 1 || k > 8) throw InvalidArgument("epd_derivative: order must be in 1..8");
  if (i < 0 || i >= static_cast<int>(betas.size())) throw InvalidArgument("epd_derivative: index out of range");
  const Product F(betas, t, W, opt.radius);
  const cplx b = betas[static_cast<std::size_t>(i)];
  const cplx I = circle_mean(
      F.radius(), 1, [&](cplx z, Eigen::VectorXcd& out) { out(0) = F(z) / std::pow(z - b, k); }, opt)(0);
  return epd_derivative_constant(k) * I;
}

Eigen::MatrixXcd epd_hessian(const CVec& betas, const CVec& t, const Potential& W, const ContourOptions& opt) {
  const Product F(betas, t, W, opt.radius);
  const int n = static_cast<int>(betas.size());
  const Eigen::VectorXcd v = circle_mean(
      F.radius(), n * n,
      [&](cplx z, Eigen::VectorXcd& out) {
        const cplx f = F(z);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            out(i * n + j) = f / ((z - betas[static_cast<std::size_t>(i)]) * (z - betas[static_cast<std::size_t>(j)]));
      },
      opt);
  Eigen::MatrixXcd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = (i == j ? epd_derivative_constant(2) : 0.25) * v(i * n + j);
  return H;
}

namespace {

// Moments and their beta-Jacobian in one pass.
void moments(const Potential& W, const CVec& t_head, const CVec& betas, const ContourOptions& opt,
             Eigen::VectorXcd& F, Eigen::MatrixXcd* J) {
  const int n = static_cast<int>(betas.size());
  const int q = n / 2;
  const int N = W.N();
  if (n == 0 || n % 2 != 0) throw InvalidArgument("reduced_moments: need 2q >= 2 branch points");
  if (static_cast<int>(t_head.size()) != q) throw InvalidArgument("reduced_moments: need t_1..t_q");
  if (q > N) throw InvalidArgument("reduced_moments: q exceeds N");
  const ComplexPoly& Wp = W.Wp();
  double R = max_abs(betas);
  if (N >= 1) R = std::max(R, max_abs(find_roots(Wp)));
  if (opt.radius > 0.0 && opt.radius <= R) throw InvalidArgument("reduced_moments: contour radius does not enclose every root");
  R = opt.radius > 0.0 ? opt.radius : 2.0 + 2.0 * R;
  const int dim = J ? n + n * n : n;
  const Eigen::VectorXcd v = circle_mean(
      R, dim,
      [&](cplx z, Eigen::VectorXcd& out) {
        cplx y0 = std::pow(z, q);
        for (cplx b : betas) y0 *= std::sqrt(1.0 - b / z);
        const cplx wp = Wp(z);
        cplx f{};
        for (int j = 1; j <= q; ++j) f += t_head[static_cast<std::size_t>(j - 1)] * std::pow(z, N - j);
        const cplx base = (wp + 0.5 * f / wp) / y0;
        cplx zk = 1.0;
        for (int k = 0; k < n; ++k, zk *= z) {
          out(k) = zk * base;
          if (J)
            for (int i = 0; i < n; ++i) out(n + k * n + i) = 0.5 * zk * base / (z - betas[static_cast<std::size_t>(i)]);
        }
      },
      opt);
  F = v.head(n);
  if (J) {
    J->resize(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) (*J)(k, i) = v(n + k * n + i);
  }
}

}  // namespace

CVec reduced_moments(const Potential& W, const CVec& t_head, const CVec& betas, const ContourOptions& opt) {
  Eigen::VectorXcd F;
  moments(W, t_head, betas, opt, F, nullptr);
  return CVec(F.data(), F.data() + F.size());
}

ReducedSolution solve_reduced(const Potential& W, const CVec& t_head, const CVec& seed, const ReducedOptions& opt) {
  const int n = static_cast<int>(seed.size());
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      if (seed[static_cast<std::size_t>(i)] == seed[static_cast<std::size_t>(k)])
        throw InvalidArgument("solve_reduced: seed branch points must be distinct");

  ReducedSolution out;
  out.t_head = t_head;
  CVec b = seed;
  Eigen::VectorXcd F;
  Eigen::MatrixXcd J;
  std::vector<double> history;
  for (int it = 0; it < opt.max_iter; ++it) {
    moments(W, t_head, b, opt.contour, F, &J);
    const double fn = F.cwiseAbs().maxCoeff();
    history.push_back(fn);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
    if (fn <= 0.1 * opt.tol) {
      const CVec g = epd_gradient(b, t_head, W, opt.contour);
      out.gradient_norm = max_abs(g);
      if (out.gradient_norm <= opt.tol) {
        out.betas = b;
        out.iterations = it;
        return out;
      }
    }
    if (out.condition > opt.max_condition)
      throw SingularJacobian("solve_reduced: moment Jacobian is singular (degenerate critical point)", out.condition);
    const Eigen::VectorXcd step = svd.solve(F);
    // Halve the step until the moment residual decreases.
    double lam = 1.0;
    CVec trial(b.size());
    for (int h = 0; h < 30; ++h, lam *= 0.5) {
      for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - lam * step(i);
      Eigen::VectorXcd Ft;
      moments(W, t_head, trial, opt.contour, Ft, nullptr);
      if (Ft.cwiseAbs().maxCoeff() < fn || lam < 1e-6) break;
    }
    b = trial;
  }
  throw SolverFailure("solve_reduced: Newton did not converge", history);
}

std::vector<int> classify_singular(const ReducedSolution& sol, const Potential& W, double tol,
                                   const ContourOptions& opt) {
  const int n = static_cast<int>(sol.betas.size());
  std::vector<int> nv(static_cast<std::size_t>(n), 0);
  bool singular = false;
  for (int i = 0; i < n; ++i) {
    // Normalised derivatives d_k = |D_k / c_k|, the Taylor coefficients of the factorised
    // polynomial at beta_i at a genuine critical point.
    std::vector<double> d(9, 0.0);
    double ref = 0.0;
    for (int k = 2; k <= 8; ++k) {
      d[static_cast<std::size_t>(k)] =
          std::abs(epd_derivative(sol.betas, sol.t_head, W, i, k, opt) / epd_derivative_constant(k));
      ref = std::max(ref, d[static_cast<std::size_t>(k)]);
    }
    ref = std::max(ref, 1e-300);
    int first = -1;
    for (int k = 2; k <= 8; ++k) {
      const double r = d[static_cast<std::size_t>(k)] / ref;
      if (r >= 10.0 * tol) {
        first = k;
        break;
      }
      if (r >= tol) throw AmbiguousClassification("classify_singular: derivative order is ambiguous");
    }
    if (first < 0) throw AmbiguousClassification("classify_singular: no nonzero derivative up to order 8");
    nv[static_cast<std::size_t>(i)] = first - 2;
    if (first > 2) singular = true;
  }
  if (!singular) return {};
  return nv;
}

}  // namespace spectral
