#include "polaron/config_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polaron {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

nlohmann::json to_json(const IntervalConfig& config) {
  auto rows = nlohmann::json::array();
  for (const auto& iv : config) rows.push_back({iv.s, iv.t});
  return rows;
}

nlohmann::json to_json(const MarkedConfig& config) {
  auto rows = nlohmann::json::array();
  const auto ivs = config.intervals();
  const auto marks = config.marks();
  for (std::size_t i = 0; i < config.size(); ++i) rows.push_back({ivs[i].s, ivs[i].t, marks[i]});
  return rows;
}

MarkedConfig marked_config_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("configuration JSON must be an array of rows");
  std::vector<std::pair<Interval, double>> rows;
  for (const auto& row : j) {
    if (!row.is_array() || (row.size() != 2 && row.size() != 3)) {
      throw std::invalid_argument("configuration rows must be [s, t] or [s, t, u]");
    }
    rows.push_back({{row[0].get<double>(), row[1].get<double>()},
                    row.size() == 3 ? row[2].get<double>() : 0.0});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.s < b.first.s || (a.first.s == b.first.s && a.first.t < b.first.t);
  });
  std::vector<Interval> ivs;
  std::vector<double> marks;
  for (const auto& [iv, u] : rows) {
    ivs.push_back(iv);
    marks.push_back(u);
  }
  return MarkedConfig(IntervalConfig(std::move(ivs)), std::move(marks));
}

IntervalConfig interval_config_from_json(const nlohmann::json& j) {
  return marked_config_from_json(j).config();
}

void write_csv(std::ostream& out, const MarkedConfig& config) {
  out << "s,t,u\n";
  const auto ivs = config.intervals();
  const auto marks = config.marks();
  for (std::size_t i = 0; i < config.size(); ++i) {
    out << format_double(ivs[i].s) << ',' << format_double(ivs[i].t) << ','
        << format_double(marks[i]) << '\n';
  }
}

void write_csv(std::ostream& out, const IntervalConfig& config) {
  write_csv(out, MarkedConfig(config, std::vector<double>(config.size(), 0.0)));
}

MarkedConfig read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "s,t,u") {
    throw std::invalid_argument("CSV configuration must start with header s,t,u");
  }
  auto rows = nlohmann::json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    auto row = nlohmann::json::array();
    while (std::getline(fields, cell, ',')) {
      double value = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || end != cell.data() + cell.size()) {
        throw std::invalid_argument("CSV configuration: cannot parse '" + cell + "'");
      }
      row.push_back(value);
    }
    rows.push_back(row);
  }
  return marked_config_from_json(rows);
}

}  // namespace polaron
