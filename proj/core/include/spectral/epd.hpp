#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spectral/curve.hpp"

namespace spectral {

/// Trapezoidal rule on a circle, doubling the node count until two successive
/// estimates agree to rel_tol relative to the mean integrand size.
struct ContourOptions {
  int min_nodes = 64;
  int max_nodes = 1 << 15;
  double rel_tol = 1e-11;
  double radius = 0.0;  ///< circle radius; 0 picks 2 + 2 max(|beta|, |root|). Must enclose every root.
};

/// W(beta, t) = (1/2 pi i) \oint y0(z, beta) y(z, t) dz on a circle enclosing every root.
/// `t` may hold any prefix of t_1..t_N; missing entries are zero. The contour value
/// carries t_{q+1}/2 when t_{q+1} is supplied.
cplx epd_value(const CVec& betas, const CVec& t, const Potential& W, const ContourOptions& opt = {});

/// dW/d beta_i = -(1/2) (1/2 pi i) \oint y0 y / (z - beta_i) dz, all 2q components.
CVec epd_gradient(const CVec& betas, const CVec& t, const Potential& W, const ContourOptions& opt = {});

/// d^k W / d beta_i^k = c_k (1/2 pi i) \oint y0 y / (z - beta_i)^k dz, c_k = prod_{j<k} (j - 1/2).
/// 1 <= k <= 8.
cplx epd_derivative(const CVec& betas, const CVec& t, const Potential& W, int i, int k,
                    const ContourOptions& opt = {});

/// c_k above.
double epd_derivative_constant(int k);

/// Full beta-Hessian; the off-diagonal entries are (1/4)(1/2 pi i) \oint y0 y / ((z-b_i)(z-b_j)).
Eigen::MatrixXcd epd_hessian(const CVec& betas, const CVec& t, const Potential& W,
                             const ContourOptions& opt = {});

/// Left-hand sides of the 2q moment equations
/// (1/2 pi i) \oint z^k (W' + (1/2) sum_{j<=q} t_j z^{N-j} / W') / y0 dz, k = 0..2q-1.
CVec reduced_moments(const Potential& W, const CVec& t_head, const CVec& betas,
                     const ContourOptions& opt = {});

struct ReducedSolution {
  CVec betas;
  CVec t_head;
  double gradient_norm = 0.0;
  std::vector<int> singular_vector;  ///< filled by classify_singular, empty when regular
  int iterations = 0;
  double condition = 0.0;  ///< of the moment Jacobian at the solution
};

struct ReducedOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double max_condition = 1e13;
  ContourOptions contour{};
};

/// Newton on the moment equations from `seed` (2q distinct branch points) at fixed t_1..t_q.
/// Throws SingularJacobian near a degenerate critical point, SolverFailure otherwise.
ReducedSolution solve_reduced(const Potential& W, const CVec& t_head, const CVec& seed,
                              const ReducedOptions& opt = {});

/// Ratio test on |d^k W / d beta_i^k| / |c_k| for k = 2..8. n_i is the number of
/// leading vanishing orders beyond the gradient. Empty result for regular points.
/// Throws AmbiguousClassification when a value lands in [tol, 10 tol) of the scale.
std::vector<int> classify_singular(const ReducedSolution& sol, const Potential& W, double tol = 1e-6,
                                   const ContourOptions& opt = {});

}  // namespace spectral
