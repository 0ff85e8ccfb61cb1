#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace polaron {

/// Monte Carlo point estimate with its standard error.
struct EstimateResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  /// Free-form metadata (alpha, T, C, method, ...), emitted verbatim.
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Sample mean and standard error of the mean of iid values.
EstimateResult mean_estimate(std::span<const double> values);

/// Batch-means estimate for a correlated series: the series is cut into
/// `batches` equal consecutive blocks (a short remainder at the front is
/// dropped) and the standard error is that of the block means.
EstimateResult batch_means_estimate(std::span<const double> series, std::size_t batches);

}  // namespace polaron
