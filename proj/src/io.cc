#include "sirshare/io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sirshare/errors.h"

namespace sirshare {

using nlohmann::json;

namespace {

const json& Require(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw MalformedInputError(std::string("instance is missing \"") + key + "\"");
  }
  return doc.at(key);
}

double RealAt(const json& value, const std::string& where) {
  if (!value.is_number()) throw MalformedInputError(where + " must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw MalformedInputError(where + " must be finite");
  return x;
}

std::vector<std::vector<double>> RealRows(const json& value, const char* key) {
  if (!value.is_array()) {
    throw MalformedInputError(std::string("\"") + key + "\" must be an array of arrays");
  }
  std::vector<std::vector<double>> rows;
  for (size_t r = 0; r < value.size(); ++r) {
    if (!value[r].is_array()) {
      throw MalformedInputError(std::string("\"") + key + "\" row " +
                                std::to_string(r + 1) + " is not an array");
    }
    std::vector<double> row;
    for (size_t c = 0; c < value[r].size(); ++c) {
      row.push_back(RealAt(value[r][c], std::string(key) + "[" + std::to_string(r + 1) +
                                            "][" + std::to_string(c + 1) + "]"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Regime ParseRegime(const std::string& text) {
  if (text == "finite") return Regime::kFinite;
  if (text == "zero") return Regime::kZeroLimit;
  if (text == "infinite") return Regime::kInfiniteLimit;
  throw MalformedInputError("regime must be \"finite\", \"zero\" or \"infinite\", got \"" +
                            text + "\"");
}

std::string Describe(const MetricViolation& v) {
  std::ostringstream out;
  out << ToString(v.kind) << " at (" << v.a + 1 << ", " << v.b + 1;
  if (v.kind == MetricViolation::Kind::kTriangle) out << ", " << v.c + 1;
  out << ") by " << FormatNumber(v.excess);
  return out.str();
}

}  // namespace

double Round12(double value) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::strtod(buffer, nullptr);
}

std::string FormatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value == 0.0 ? 0.0 : value);
  return buffer;
}

Instance InstanceFromJson(const json& doc) {
  if (!doc.is_object()) throw MalformedInputError("instance must be a JSON object");
  const json& n_value = Require(doc, "n");
  if (!n_value.is_number_integer() || n_value.get<long long>() < 1) {
    throw MalformedInputError("\"n\" must be a positive integer");
  }
  const int n = n_value.get<int>();

  const json& mode_value = Require(doc, "dropoff_mode");
  if (!mode_value.is_string()) throw MalformedInputError("\"dropoff_mode\" must be a string");
  DropoffMode mode;
  if (mode_value == "single") {
    mode = DropoffMode::kSingle;
  } else if (mode_value == "multi") {
    mode = DropoffMode::kMulti;
  } else {
    throw MalformedInputError("\"dropoff_mode\" must be \"single\" or \"multi\"");
  }

  const bool has_matrix = doc.contains("distance_matrix");
  const bool has_coords = doc.contains("coords");
  if (has_matrix == has_coords) {
    throw MalformedInputError(
        "give exactly one of \"distance_matrix\" and \"coords\"");
  }
  DistanceTable table;
  if (has_matrix) {
    table = DistanceTable::FromRows(RealRows(doc.at("distance_matrix"), "distance_matrix"));
  } else {
    table = FromEuclidean(RealRows(doc.at("coords"), "coords"));
  }

  const double alpha_op = RealAt(Require(doc, "alpha_op"), "\"alpha_op\"");
  const json& alpha_values = Require(doc, "alphas");
  if (!alpha_values.is_array() || static_cast<int>(alpha_values.size()) != n) {
    throw MalformedInputError("\"alphas\" must be an array of n = " + std::to_string(n) +
                              " numbers");
  }
  std::vector<double> alphas;
  for (size_t i = 0; i < alpha_values.size(); ++i) {
    alphas.push_back(RealAt(alpha_values[i], "alphas[" + std::to_string(i + 1) + "]"));
  }

  Regime regime = Regime::kFinite;
  if (doc.contains("regime")) {
    if (!doc.at("regime").is_string()) throw MalformedInputError("\"regime\" must be a string");
    regime = ParseRegime(doc.at("regime").get<std::string>());
  }

  const MetricReport report = ValidateMetric(table);
  for (const MetricViolation& v : report.violations) {
    if (v.kind != MetricViolation::Kind::kTriangle) {
      throw MalformedInputError("distance table is not a distance: " + Describe(v));
    }
  }
  bool metric_flag = report.metric_flag;
  if (doc.contains("metric_flag")) {
    if (!doc.at("metric_flag").is_boolean()) {
      throw MalformedInputError("\"metric_flag\" must be a boolean");
    }
    metric_flag = doc.at("metric_flag").get<bool>();
    if (metric_flag && !report.metric_flag) {
      throw MalformedInputError("metric_flag is true but the triangle inequality fails: " +
                                Describe(report.violations.front()));
    }
  }
  table.set_metric_flag(metric_flag);
  return Instance(std::move(table), mode, alpha_op, std::move(alphas), regime);
}

json InstanceToJson(const Instance& instance) {
  json doc;
  doc["n"] = instance.num_passengers();
  doc["dropoff_mode"] = ToString(instance.dropoff_mode());
  json matrix = json::array();
  for (const std::vector<double>& row : instance.points().Rows()) {
    matrix.push_back(RealsJson(row));
  }
  doc["distance_matrix"] = std::move(matrix);
  doc["alpha_op"] = Round12(instance.alpha_op());
  doc["alphas"] = RealsJson(instance.alphas());
  doc["regime"] = ToString(instance.regime());
  doc["metric_flag"] = instance.points().metric_flag();
  return doc;
}

Instance ReadInstance(std::istream& in, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw MalformedInputError(source_name + " is not valid JSON: " + e.what());
  }
  return InstanceFromJson(doc);
}

Instance LoadInstance(const std::string& path) {
  if (path == "-") return ReadInstance(std::cin, "standard input");
  std::ifstream in(path);
  if (!in) throw MalformedInputError("cannot open instance file " + path);
  return ReadInstance(in, path);
}

Route ParseRoute(const std::string& text, const Instance& instance) {
  const int n = instance.num_passengers();
  std::vector<RouteEvent> events;
  std::vector<int> pickups;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const size_t first = token.find_first_not_of(" \t");
    const size_t last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw MalformedInputError("empty token in route");
    token = token.substr(first, last - first + 1);
    const bool dropoff = token[0] == 'd' || token[0] == 'D';
    const std::string digits = dropoff ? token.substr(1) : token;
    size_t used = 0;
    int label = 0;
    try {
      label = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (digits.empty() || used != digits.size() || label < 1 || label > n) {
      throw MalformedInputError("route token \"" + token + "\" is not a passenger in 1.." +
                                std::to_string(n));
    }
    if (dropoff && instance.dropoff_mode() == DropoffMode::kSingle) {
      throw MalformedInputError(
          "single-dropoff routes list pickups only; the dropoff is implicit");
    }
    events.push_back({dropoff ? EventKind::kDropoff : EventKind::kPickup, label - 1});
    if (!dropoff) pickups.push_back(label - 1);
  }
  Route route = instance.dropoff_mode() == DropoffMode::kSingle
                    ? Route::SingleDropoff(pickups)
                    : Route(std::move(events));
  ValidateRoute(instance, route);
  return route;
}

std::string FormatRoute(const Route& route) {
  std::string text;
  // Dropoffs are implied only when they follow the pickup order exactly.
  const bool single = route == Route::SingleDropoff(route.PickupOrder());
  for (const RouteEvent& e : route.events()) {
    if (single && e.kind == EventKind::kDropoff) continue;
    if (!text.empty()) text += ",";
    if (e.kind == EventKind::kDropoff) text += "d";
    text += std::to_string(e.passenger + 1);
  }
  return text;
}

std::vector<double> ParseReals(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    const size_t tail = token.find_first_not_of(" \t", used);
    if (used == 0 || tail != std::string::npos || !std::isfinite(x)) {
      throw MalformedInputError("\"" + token + "\" is not a number");
    }
    values.push_back(x);
  }
  return values;
}

json RealsJson(const std::vector<double>& values) {
  json out = json::array();
  for (double x : values) out.push_back(Round12(x));
  return out;
}

json LowerTriangularJson(const std::vector<std::vector<double>>& rows) {
  json out = json::array();
  for (size_t s = 0; s < rows.size(); ++s) {
    std::vector<double> row(rows[s].begin(),
                            rows[s].begin() + std::min(rows[s].size(), s + 1));
    out.push_back(RealsJson(row));
  }
  return out;
}

json DisutilityJson(const DisutilityTrace& trace) {
  json out = json::array();
  for (const std::vector<double>& row : trace.du) out.push_back(RealsJson(row));
  return out;
}

json AllocationJson(const Allocation& allocation) {
  json vehicles = json::array();
  for (const std::vector<int>& vehicle : allocation.vehicles) {
    json v = json::array();
    for (int p : vehicle) v.push_back(p + 1);
    vehicles.push_back(std::move(v));
  }
  return {{"vehicles", std::move(vehicles)},
          {"total_miles", Round12(allocation.total_miles)}};
}

}  // namespace sirshare
