#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "polaron/pointprocess.hpp"

namespace polaron {

/// [[s, t], ...]
nlohmann::json to_json(const IntervalConfig& config);
/// [[s, t, u], ...]
nlohmann::json to_json(const MarkedConfig& config);

/// Accepts both [s, t] rows (marks default to 0) and [s, t, u] rows.
MarkedConfig marked_config_from_json(const nlohmann::json& j);
IntervalConfig interval_config_from_json(const nlohmann::json& j);

/// CSV with header "s,t,u". Unmarked configurations are written with u = 0.
void write_csv(std::ostream& out, const MarkedConfig& config);
void write_csv(std::ostream& out, const IntervalConfig& config);
MarkedConfig read_csv(std::istream& in);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace polaron
