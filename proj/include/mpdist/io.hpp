#pragma once

// JSON serialization. Requires nlohmann/json (json.hpp) on the include path.

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mpdist/experiments.hpp"
#include "mpdist/persistence.hpp"

namespace mpdist {

/// {"degree": k, "bars": [[birth, death], ...]} with null for an infinite death.
inline nlohmann::json to_json(const Barcode& barcode) {
  nlohmann::json bars = nlohmann::json::array();
  for (const auto& b : barcode.canonical().bars) {
    bars.push_back({b.birth, b.infinite() ? nlohmann::json(nullptr) : nlohmann::json(b.death)});
  }
  return {{"degree", barcode.degree}, {"bars", bars}};
}

inline Barcode barcode_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("bars")) {
    throw std::invalid_argument("barcode JSON needs \"degree\" and \"bars\"");
  }
  Barcode out{j.at("degree").get<int>(), {}};
  for (const auto& bar : j.at("bars")) {
    if (!bar.is_array() || bar.size() != 2 || !bar[0].is_number()) {
      throw std::invalid_argument("barcode JSON: each bar is [birth, death|null]");
    }
    const double birth = bar[0].get<double>();
    double death = kInfinity;
    if (!bar[1].is_null()) {
      if (!bar[1].is_number()) throw std::invalid_argument("barcode JSON: death must be a number or null");
      death = bar[1].get<double>();
    }
    if (!std::isfinite(birth) || !(birth < death)) throw std::invalid_argument("barcode JSON: need finite birth < death");
    out.bars.push_back({birth, death});
  }
  return out;
}

inline Barcode read_barcode(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return barcode_from_json(nlohmann::json::parse(in));
}

inline nlohmann::json line_json(const std::optional<Line>& line) {
  if (!line) return nullptr;
  return {{"angle_deg", line->angle_deg()}, {"offset", line->offset()}};
}

inline nlohmann::json to_json(const MatchResult& m) {
  return {{"matching_distance", std::isinf(m.distance) ? nlohmann::json(nullptr) : nlohmann::json(m.distance)},
          {"infinite", m.infinite},
          {"lines", m.lines},
          {"argmax_line", line_json(m.argmax_line)},
          {"argmax_bottleneck", std::isinf(m.argmax_bottleneck) ? nlohmann::json(nullptr)
                                                                 : nlohmann::json(m.argmax_bottleneck)}};
}

inline nlohmann::json to_json(const SweepResult& sweep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : sweep.rows) {
    nlohmann::json row;
    for (std::size_t i = 0; i < sweep.param_names.size(); ++i) row[sweep.param_names[i]] = r.params[i];
    row["matching_distance"] = std::isinf(r.matching_distance) ? nlohmann::json(nullptr)
                                                               : nlohmann::json(r.matching_distance);
    row["argmax_line"] = line_json(r.argmax_line);
    row["seed"] = r.seed;
    row["grid_size"] = r.grid_size;
    row["degree"] = r.degree;
    rows.push_back(std::move(row));
  }
  return {{"rows", rows}};
}

}  // namespace mpdist
