#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polaron/model.hpp"
#include "polaron/pointprocess.hpp"

namespace polaron {

/// Density of the continuous part of the mark measure,
/// 2^{(2-gamma)/2} / Gamma(gamma/2) * u^{gamma-1} on (0, inf). Together with
/// an atom of mass epsilon at 0 it represents the potential:
/// 1/|x|^gamma + epsilon = integral of exp(-u^2 |x|^2 / 2) over the measure.
double mark_density(double u, double gamma);

/// Layout of the transformed Gauss-Legendre rules over the mark axis.
///
/// The axis is split at `split`. On [0, split] the substitution
/// u = split * x^{1/gamma} absorbs u^{gamma-1}; on [split, inf) the
/// substitution u = split * v^{-q} with q = tail_exponent (or 1/(d - gamma)
/// when tail_exponent <= 0) turns the u^{gamma-1-d} decay into a bounded
/// integrand. Each of the two x/v ranges is cut into `panels` geometrically
/// graded panels (ratio `grading`, refined towards 0) carrying
/// `nodes_per_panel` Gauss-Legendre nodes.
struct QuadratureSpec {
  int nodes_per_panel = 16;
  int panels = 2;
  double grading = 0.15;
  double split = 1.0;
  double tail_exponent = 0.0;
  /// One-dimensional integrals double nodes_per_panel until two successive
  /// values agree within max(abs_tol, rel_tol * |value|).
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
};

/// Region of one mark coordinate.
enum class MarkRegion {
  All,    ///< [0, inf)
  Below,  ///< [0, threshold)
  Above,  ///< [threshold, inf)
};

/// Discrete approximation of the mark measure (density part plus the atom at
/// 0 when the region contains 0 and epsilon > 0) restricted to a region.
struct MarkRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

MarkRule mark_rule(const ModelParams& params, const QuadratureSpec& spec, MarkRegion region,
                   double threshold);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// E_W[1/|X_t|^gamma] + epsilon for d-dimensional Brownian motion, computed
/// as the mark integral of (1 + u^2 t)^{-d/2}. Throws std::invalid_argument
/// for t <= 0.
double expected_potential(double t, const ModelParams& params, const QuadratureSpec& spec = {});

/// Constant c with expected_potential(t) = c t^{-gamma/2} + epsilon,
/// i.e. E[1/|X_1|^gamma] for a standard d-dimensional Gaussian.
double potential_constant(double gamma, int d, const QuadratureSpec& spec = {});

/// Probability of mark C in the product kernel:
/// 2^{-gamma/2} (1 + 4C^2)^{-d/2} (1 - epsilon / expected_potential(2)).
double mark_probability(double C, const ModelParams& params);

/// E_W[prod_i (1/|X_{s_i,t_i}|^gamma + epsilon)] for at most three intervals,
/// by tensor quadrature over the mark measure of weight_normalizer.
/// Throws std::invalid_argument if the configuration has more than three
/// intervals.
double configuration_weight(std::span<const Interval> intervals, const ModelParams& params,
                            const QuadratureSpec& spec = {});

/// Constraint on another mark when conditioning in
/// conditional_mark_probability.
enum class MarkPattern {
  Free,   ///< not conditioned on
  Below,  ///< u_j < C
  Above,  ///< u_j >= C
};

/// Probability, under the mark kernel of the configuration (marks with law
/// proportional to weight_normalizer times the product mark measure), that
/// mark `index` is at least C given the pattern on the other marks.
/// `pattern[index]` is ignored. Requires at most three intervals and
/// interval `index` of length <= 2; throws std::invalid_argument otherwise.
double conditional_mark_probability(std::span<const Interval> intervals, std::size_t index,
                                    std::span<const MarkPattern> pattern, double C,
                                    const ModelParams& params, const QuadratureSpec& spec = {});

}  // namespace polaron
