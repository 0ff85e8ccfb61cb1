#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "polaron/estimate.hpp"
#include "polaron/pointprocess.hpp"

namespace polaron {

/// K_ij = length of [s_i, t_i] intersected with [s_j, t_j]: the covariance of
/// one coordinate of the Brownian increments over the intervals.
Eigen::MatrixXd overlap_matrix(std::span<const Interval> intervals);

/// Covariance data of a marked configuration.
///
/// For one coordinate of a Brownian motion B and iid standard normals Z_i,
/// `covariance()` is C = I + D K D, the covariance of (u_i B_{s_i,t_i} + Z_i)_i
/// with D = diag(u), and `cross_covariance()` is b_i = u_i |[s_i,t_i] ∩ [0,T]|,
/// the covariance of those variables with B_{0,T}. Intervals may extend past
/// T: K uses full overlaps, b the clipped one.
///
/// C is factored once (Cholesky after symmetric diagonal equilibration, so
/// large marks do not cost precision) and every query reuses the factor.
class GaussianWorkspace {
 public:
  GaussianWorkspace(std::span<const Interval> intervals, std::span<const double> marks, double T);

  std::size_t size() const { return static_cast<std::size_t>(marks_.size()); }
  double horizon() const { return T_; }
  const Eigen::MatrixXd& overlap() const { return K_; }
  const Eigen::MatrixXd& covariance() const { return C_; }
  const Eigen::VectorXd& cross_covariance() const { return b_; }

  /// log det C.
  double log_det() const { return log_det_; }

  /// C^{-1} x.
  Eigen::VectorXd solve(const Eigen::VectorXd& x) const;

  /// (T - b' C^{-1} b) / T: squared L2 distance of B_{0,T} to the span of
  /// the marked variables, per unit time. When the subtraction cancels (value
  /// below 1e-6) the result is recomputed by sigma2_least_squares().
  double sigma2() const;

  /// The same quantity as a least-squares residual over the Brownian
  /// increments of the breakpoint grid; keeps its relative accuracy when
  /// sigma2 is tiny (huge marks covering [0, T]). O((m + n) n^2) with m <= 2n + 1 cells.
  double sigma2_least_squares() const;

  /// Same quantity as det([[C, b], [b', T]]) / det(C) / T, computed from LU
  /// factorizations of the bordered and the plain matrix.
  double sigma2_determinant_ratio() const;

  /// E[X_{0,T} X_{s_i,t_i}] for one coordinate under the reweighted Gaussian
  /// measure, i.e. a_i - (K D C^{-1} b)_i with a_i the clipped overlap.
  Eigen::VectorXd conditional_cross_moment() const;

  /// d sigma2 / d u_i = -(2 u_i / T) E[X_{0,T} X_{s_i,t_i}]^2.
  Eigen::VectorXd sigma2_gradient() const;

 private:
  std::vector<Interval> intervals_;
  Eigen::MatrixXd K_;
  Eigen::MatrixXd C_;
  Eigen::VectorXd b_;
  Eigen::VectorXd clipped_;
  Eigen::VectorXd marks_;
  Eigen::VectorXd scale_;  // C = S^{-1} C_eq S^{-1}, S = diag(1/sqrt(C_ii))
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
  double T_ = 1.0;
};

/// E_W[exp(-sum_i u_i^2 |X_{s_i,t_i}|^2 / 2)] in dimension d, equal to
/// det(C)^{-d/2}. Always in (0, 1].
double weight_normalizer(std::span<const Interval> intervals, std::span<const double> marks, int d);

/// Log of weight_normalizer.
double log_weight_normalizer(std::span<const Interval> intervals, std::span<const double> marks,
                             int d);

/// Log of weight_normalizer from a precomputed overlap matrix. Small
/// configurations (n <= 4) are factored without heap allocation, which is what
/// the tensor quadratures call in their inner loop.
double log_weight_normalizer(const Eigen::MatrixXd& overlap, std::span<const double> marks, int d);

/// (1/(dT)) E[|X_{0,T}|^2] under the Gaussian path measure reweighted by the
/// marked intervals. Throws std::invalid_argument if T <= 0.
double sigma2_exact(std::span<const Interval> intervals, std::span<const double> marks, double T);

/// Determinant-ratio route to sigma2_exact.
double sigma2_exact_determinant_ratio(std::span<const Interval> intervals,
                                      std::span<const double> marks, double T);

/// Closed form for pairwise disjoint intervals inside [0, T]:
/// 1 - sum(tau)/T + sum(tau / (tau u^2 + 1))/T.
/// Intervals may touch; any positive overlap or an interval outside [0, T]
/// throws std::invalid_argument.
double sigma2_disjoint(std::span<const Interval> intervals, std::span<const double> marks, double T);

std::vector<double> sigma2_grad_u(std::span<const Interval> intervals, std::span<const double> marks,
                                  double T);

/// Self-normalized importance-sampling estimate of sigma2: d-dimensional
/// Brownian increments are drawn on the breakpoint grid {0, s_i, t_i, T} and
/// weighted by exp(-sum u_i^2 |X_{s_i,t_i}|^2 / 2). The standard error is the
/// delta-method one. Adds a warning when the effective sample size is < 30.
/// Throws std::invalid_argument if n_samples < 1000.
EstimateResult sigma2_mc_oracle(std::span<const Interval> intervals, std::span<const double> marks,
                                double T, int d, std::size_t n_samples, std::uint64_t seed);

/// Squared norms of the Gram-Schmidt residuals of a Gaussian vector with the
/// given covariance, taken in index order: entry k is the squared L2 distance
/// of X_k to span{X_1, ..., X_{k-1}}. Their product is det(cov).
std::vector<double> gram_schmidt_residuals(const Eigen::MatrixXd& cov);

}  // namespace polaron
