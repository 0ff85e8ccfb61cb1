#include "polaron/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>

namespace polaron {
namespace {

double overlap_length(const Interval& a, const Interval& b) {
  return std::max(0.0, std::min(a.t, b.t) - std::max(a.s, b.s));
}

void check_marks(std::span<const Interval> intervals, std::span<const double> marks) {
  if (intervals.size() != marks.size()) {
    throw std::invalid_argument("one mark per interval required");
  }
  for (double u : marks) {
    if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("marks must be finite and >= 0");
  }
}

double lu_log_abs_det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const auto& packed = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log(std::abs(packed(i, i)));
  return acc;
}

}  // namespace

Eigen::MatrixXd overlap_matrix(std::span<const Interval> intervals) {
  const auto n = static_cast<Eigen::Index>(intervals.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = intervals[i].length();
    for (Eigen::Index j = 0; j < i; ++j) {
      K(i, j) = K(j, i) = overlap_length(intervals[i], intervals[j]);
    }
  }
  return K;
}

GaussianWorkspace::GaussianWorkspace(std::span<const Interval> intervals,
                                     std::span<const double> marks, double T)
    : T_(T) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
  check_marks(intervals, marks);
  intervals_.assign(intervals.begin(), intervals.end());
  const auto n = static_cast<Eigen::Index>(intervals.size());
  K_ = overlap_matrix(intervals);
  marks_ = Eigen::Map<const Eigen::VectorXd>(marks.data(), n);
  clipped_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    clipped_(i) = overlap_length(intervals[i], Interval{0.0, T});
  }
  b_ = marks_.cwiseProduct(clipped_);
  C_ = marks_.asDiagonal() * K_ * marks_.asDiagonal();
  C_.diagonal().array() += 1.0;

  scale_ = C_.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd equilibrated = scale_.asDiagonal() * C_ * scale_.asDiagonal();
  llt_.compute(equilibrated);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("covariance factorization failed");
  }
  const auto& L = llt_.matrixLLT();
  double ld = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ld += 2.0 * std::log(L(i, i)) + std::log(C_(i, i));
  log_det_ = ld;
}

Eigen::VectorXd GaussianWorkspace::solve(const Eigen::VectorXd& x) const {
  if (x.size() == 0) return x;
  return scale_.asDiagonal() * llt_.solve(scale_.asDiagonal() * x);
}

double GaussianWorkspace::sigma2() const {
  if (marks_.size() == 0) return 1.0;
  // b' C^{-1} b = |L^{-1} S b|^2
  const Eigen::VectorXd y = llt_.matrixL().solve(scale_.asDiagonal() * b_);
  const double schur = (T_ - y.squaredNorm()) / T_;
  // Below this the subtraction has cancelled more than six digits.
  if (schur > 1e-6) return schur;
  return sigma2_least_squares();
}

double GaussianWorkspace::sigma2_least_squares() const {
  // Write B_{0,T} and the marked variables through independent standard
  // normals: the Brownian increments over the cells of the breakpoint grid and
  // the unit noises. T sigma2 is the squared residual of projecting the
  // coefficient row of B_{0,T} onto the rows of the marked variables. A
  // Householder QR returns that residual directly, with no subtraction.
  std::vector<double> cuts{0.0, T_};
  for (const auto& iv : intervals_) {
    cuts.push_back(iv.s);
    cuts.push_back(iv.t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto m = static_cast<Eigen::Index>(cuts.size() - 1);
  const auto n = static_cast<Eigen::Index>(intervals_.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m + n, n);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m + n);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double lo = cuts[static_cast<std::size_t>(j)];
    const double hi = cuts[static_cast<std::size_t>(j) + 1];
    const double root = std::sqrt(hi - lo);
    if (lo >= 0.0 && hi <= T_) f(j) = root;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& iv = intervals_[static_cast<std::size_t>(i)];
      if (lo >= iv.s && hi <= iv.t) M(j, i) = marks_(i) * root;
    }
  }
  M.bottomRows(n).setIdentity();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  const Eigen::VectorXd rotated = qr.householderQ().adjoint() * f;
  return rotated.tail(m).squaredNorm() / T_;
}

double GaussianWorkspace::sigma2_determinant_ratio() const {
  const auto n = static_cast<Eigen::Index>(marks_.size());
  if (n == 0) return 1.0;
  // Equilibrate the bordered matrix with diag(S, 1/sqrt(T)); the scale factors
  // of the first n rows cancel in the ratio and the last one absorbs the 1/T.
  const double last = 1.0 / std::sqrt(T_);
  Eigen::MatrixXd C_eq = scale_.asDiagonal() * C_ * scale_.asDiagonal();
  Eigen::MatrixXd bordered(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = C_eq;
  const Eigen::VectorXd edge = scale_.cwiseProduct(b_) * last;
  bordered.topRightCorner(n, 1) = edge;
  bordered.bottomLeftCorner(1, n) = edge.transpose();
  bordered(n, n) = 1.0;
  return std::exp(lu_log_abs_det(bordered) - lu_log_abs_det(C_eq));
}

Eigen::VectorXd GaussianWorkspace::conditional_cross_moment() const {
  if (marks_.size() == 0) return {};
  const Eigen::VectorXd w = solve(b_);
  return clipped_ - K_ * marks_.cwiseProduct(w);
}

Eigen::VectorXd GaussianWorkspace::sigma2_gradient() const {
  if (marks_.size() == 0) return {};
  const Eigen::VectorXd m = conditional_cross_moment();
  return (-2.0 / T_) * marks_.cwiseProduct(m.cwiseAbs2());
}

double log_weight_normalizer(std::span<const Interval> intervals, std::span<const double> marks,
                             int d) {
  if (intervals.empty()) return 0.0;
  const GaussianWorkspace ws(intervals, marks, 1.0);
  return -0.5 * d * ws.log_det();
}

double log_weight_normalizer(const Eigen::MatrixXd& overlap, std::span<const double> marks, int d) {
  const auto n = overlap.rows();
  if (n != static_cast<Eigen::Index>(marks.size())) {
    throw std::invalid_argument("one mark per interval required");
  }
  if (n == 0) return 0.0;
  auto log_det = [&](auto& C) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) C(i, j) = marks[i] * overlap(i, j) * marks[j];
      C(i, i) += 1.0;
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += std::log(C(i, i));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) C(i, j) /= std::sqrt(C(i, i) * C(j, j));
      }
    }
    C.diagonal().setOnes();
    Eigen::LLT<std::remove_reference_t<decltype(C)>> llt(C);
    if (llt.info() != Eigen::Success) throw std::runtime_error("covariance factorization failed");
    for (Eigen::Index i = 0; i < n; ++i) acc += 2.0 * std::log(llt.matrixLLT()(i, i));
    return acc;
  };
  double ld = 0.0;
  if (n <= 4) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4> C(n, n);
    ld = log_det(C);
  } else {
    Eigen::MatrixXd C(n, n);
    ld = log_det(C);
  }
  return -0.5 * d * ld;
}

double weight_normalizer(std::span<const Interval> intervals, std::span<const double> marks, int d) {
  return std::exp(log_weight_normalizer(intervals, marks, d));
}

double sigma2_exact(std::span<const Interval> intervals, std::span<const double> marks, double T) {
  return GaussianWorkspace(intervals, marks, T).sigma2();
}

double sigma2_exact_determinant_ratio(std::span<const Interval> intervals,
                                      std::span<const double> marks, double T) {
  return GaussianWorkspace(intervals, marks, T).sigma2_determinant_ratio();
}

double sigma2_disjoint(std::span<const Interval> intervals, std::span<const double> marks, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
  check_marks(intervals, marks);
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.s < b.s; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].s < 0.0 || sorted[i].t > T) {
      throw std::invalid_argument("sigma2_disjoint: interval outside [0, T]");
    }
    if (i > 0 && sorted[i].s < sorted[i - 1].t) {
      throw std::invalid_argument("sigma2_disjoint: intervals overlap");
    }
  }
  double covered = 0.0;
  double retained = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const double tau = intervals[i].length();
    covered += tau;
    retained += tau / (tau * marks[i] * marks[i] + 1.0);
  }
  return 1.0 - covered / T + retained / T;
}

std::vector<double> sigma2_grad_u(std::span<const Interval> intervals, std::span<const double> marks,
                                  double T) {
  const Eigen::VectorXd g = GaussianWorkspace(intervals, marks, T).sigma2_gradient();
  return {g.data(), g.data() + g.size()};
}

EstimateResult sigma2_mc_oracle(std::span<const Interval> intervals, std::span<const double> marks,
                                double T, int d, std::size_t n_samples, std::uint64_t seed) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  if (n_samples < 1000) throw std::invalid_argument("sigma2_mc_oracle: need at least 1000 samples");
  check_marks(intervals, marks);

  std::vector<double> grid{0.0, T};
  for (const auto& iv : intervals) {
    grid.push_back(iv.s);
    grid.push_back(iv.t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  auto index_of = [&grid](double x) {
    return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
  };
  struct Window {
    std::size_t lo, hi;
    double u2;
  };
  std::vector<Window> windows;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    windows.push_back({index_of(intervals[i].s), index_of(intervals[i].t), marks[i] * marks[i]});
  }
  const std::size_t i0 = index_of(0.0);
  const std::size_t iT = index_of(T);
  std::vector<double> sd(grid.size(), 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) sd[k] = std::sqrt(grid[k] - grid[k - 1]);

  Rng rng = make_stream(seed, 0);
  std::vector<double> log_w(n_samples);
  std::vector<double> f(n_samples);
  std::vector<double> path(grid.size());
  for (std::size_t n = 0; n < n_samples; ++n) {
    double endpoint_sq = 0.0;
    double penalty = 0.0;
    for (int c = 0; c < d; ++c) {
      path[0] = 0.0;
      for (std::size_t k = 1; k < grid.size(); ++k) path[k] = path[k - 1] + sd[k] * standard_normal(rng);
      const double x = path[iT] - path[i0];
      endpoint_sq += x * x;
      for (const auto& w : windows) {
        const double y = path[w.hi] - path[w.lo];
        penalty += w.u2 * y * y;
      }
    }
    log_w[n] = -0.5 * penalty;
    f[n] = endpoint_sq / (d * T);
  }

  const double shift = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> weights(n_samples);
  double sum_w = 0.0;
  double sum_wf = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    weights[n] = std::exp(log_w[n] - shift);
    sum_w += weights[n];
    sum_wf += weights[n] * f[n];
  }
  const double estimate = sum_wf / sum_w;
  double var = 0.0;
  double sum_w2 = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double wn = weights[n] / sum_w;
    var += wn * wn * (f[n] - estimate) * (f[n] - estimate);
    sum_w2 += wn * wn;
  }
  EstimateResult r;
  r.value = estimate;
  r.std_error = std::sqrt(var);
  r.replicates = n_samples;
  r.seed = seed;
  const double ess = 1.0 / sum_w2;
  r.meta = {{"method", "importance-sampling"}, {"T", T}, {"d", d},
            {"n_samples", n_samples}, {"effective_sample_size", ess}};
  if (ess < 30.0) r.warnings.emplace_back("effective sample size below 30");
  return r;
}

std::vector<double> gram_schmidt_residuals(const Eigen::MatrixXd& cov) {
  const auto n = cov.rows();
  // Each vector is stored by its coefficients in the basis X_1..X_n; the L2
  // inner product of two such vectors is x' cov y.
  std::vector<Eigen::VectorXd> basis;
  std::vector<double> norms;
  std::vector<double> residuals;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, k);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (norms[j] <= 0.0) continue;
      const double proj = v.dot(cov * basis[j]) / norms[j];
      v -= proj * basis[j];
    }
    const double r = v.dot(cov * v);
    basis.push_back(v);
    norms.push_back(r);
    residuals.push_back(r);
  }
  return residuals;
}

}  // namespace polaron
