#include "polaron/estimate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polaron {

nlohmann::json EstimateResult::to_json() const {
  nlohmann::json j = {{"value", value},
                      {"stderr", std_error},
                      {"replicates", replicates},
                      {"seed", seed},
                      {"meta", meta}};
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

EstimateResult mean_estimate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_estimate: no values");
  EstimateResult r;
  const double n = static_cast<double>(values.size());
  r.value = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.value) * (v - r.value);
  r.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  r.replicates = values.size();
  return r;
}

EstimateResult batch_means_estimate(std::span<const double> series, std::size_t batches) {
  if (batches < 2) throw std::invalid_argument("batch_means_estimate: need at least two batches");
  if (series.size() < batches) throw std::invalid_argument("batch_means_estimate: series too short");
  const std::size_t size = series.size() / batches;
  const std::size_t offset = series.size() - size * batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    auto first = series.begin() + static_cast<std::ptrdiff_t>(offset + b * size);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(size), 0.0) /
               static_cast<double>(size);
  }
  EstimateResult r = mean_estimate(means);
  r.replicates = series.size();
  r.meta["batches"] = batches;
  return r;
}

}  // namespace polaron
