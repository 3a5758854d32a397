#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectral {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument or precondition violation (length mismatch, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations. Carries the last residuals.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Newton or linear solve hit a (numerically) singular matrix.
class SingularJacobian : public Error {
 public:
  SingularJacobian(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Adaptive quadrature did not reach its tolerance before the node cap.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, cplx coarse, cplx fine)
      : Error(what), coarse_(coarse), fine_(fine) {}
  cplx coarse() const noexcept { return coarse_; }
  cplx fine() const noexcept { return fine_; }

 private:
  cplx coarse_;
  cplx fine_;
};

/// Root clustering admits more than one multiplicity structure at the given tolerance.
class AmbiguousClustering : public Error {
 public:
  AmbiguousClustering(const std::string& what, std::vector<int> tight, std::vector<int> loose)
      : Error(what), tight_(std::move(tight)), loose_(std::move(loose)) {}
  /// Multiplicities when every over-wide cluster is split.
  const std::vector<int>& tight() const noexcept { return tight_; }
  /// Multiplicities of the single-linkage clustering.
  const std::vector<int>& loose() const noexcept { return loose_; }

 private:
  std::vector<int> tight_;
  std::vector<int> loose_;
};

/// A point sits on (or within tolerance of) a branch cut.
class OnCut : public Error {
 public:
  OnCut(const std::string& what, int cut) : Error(what), cut_(cut) {}
  int cut() const noexcept { return cut_; }

 private:
  int cut_;
};

/// Cut layout is unusable: overlapping segments, non-monotone reference path, bad pairing.
class CutConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Branch tracking failed: the chosen square-root branch does not square to the curve.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Roots that must stay apart came within tolerance (alpha/beta collision, Vandermonde singular).
class Degeneracy : public Error {
 public:
  Degeneracy(const std::string& what, double distance) : Error(what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

/// Derivative-order classification landed between the zero and nonzero thresholds.
class AmbiguousClassification : public Error {
 public:
  using Error::Error;
};

/// ODE integration failed (step-size underflow or blow-up at the initial point).
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double at) : Error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

}  // namespace spectral
