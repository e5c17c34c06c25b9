// Text and JSON formats: state specs, cost selectors and report
// serialization. Complex numbers are [re, im] pairs; matrices are four such
// pairs in row-major order.
#pragma once

#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwasser/suites.hpp"
#include "qwasser/transport.hpp"

namespace qwasser::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input; the message names the offending field.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& named_state_names() {
  static const std::vector<std::string> names = {"plus_z", "minus_z", "plus_x", "minus_x",
                                                 "plus_y", "minus_y", "maximally_mixed"};
  return names;
}

inline QubitState named_state(const std::string& name) {
  if (name == "plus_z") return named::plus_z();
  if (name == "minus_z") return named::minus_z();
  if (name == "plus_x") return named::plus_x();
  if (name == "minus_x") return named::minus_x();
  if (name == "plus_y") return named::plus_y();
  if (name == "minus_y") return named::minus_y();
  if (name == "maximally_mixed") return named::maximally_mixed();
  throw ParseError("unknown named state '" + name + "'");
}

inline double json_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field + ": expected a number");
  return j.get<double>();
}

inline Mat2 parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) throw ParseError(field + ": expected 4 complex entries in row-major order");
  Mat2 m;
  for (int k = 0; k < 4; ++k) {
    const json& e = j[k];
    const std::string f = field + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) throw ParseError(f + ": expected [re, im]");
    m(k / 2, k % 2) = Complex(json_number(e[0], f + "[0]"), json_number(e[1], f + "[1]"));
  }
  return m;
}

inline json matrix_to_json(const Mat2& m) {
  json out = json::array();
  for (int k = 0; k < 4; ++k) out.push_back({m(k / 2, k % 2).real(), m(k / 2, k % 2).imag()});
  return out;
}

inline QubitState state_from_json(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return named_state(j.get<std::string>());
    if (!j.is_object()) throw ParseError(field + ": expected a named state or an object");
    if (j.contains("named")) {
      if (!j["named"].is_string()) throw ParseError(field + ".named: expected a string");
      return named_state(j["named"].get<std::string>());
    }
    if (j.contains("bloch")) {
      const json& b = j["bloch"];
      if (!b.is_array() || b.size() != 3) throw ParseError(field + ".bloch: expected three reals");
      return state_from_bloch({json_number(b[0], field + ".bloch[0]"), json_number(b[1], field + ".bloch[1]"),
                               json_number(b[2], field + ".bloch[2]")});
    }
    if (j.contains("matrix")) return QubitState::from_matrix(parse_matrix(j["matrix"], field + ".matrix"));
  } catch (const DomainError& e) {
    throw ParseError(field + ": " + e.what());
  }
  throw ParseError(field + ": expected one of 'named', 'bloch', 'matrix'");
}

/// Accepts a named state, "bloch:x,y,z", or a JSON state object.
inline QubitState parse_state(const std::string& text, const std::string& field = "state") {
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(field + ": invalid JSON: " + e.what());
    }
    return state_from_json(j, field);
  }
  if (text.rfind("bloch:", 0) == 0) {
    std::stringstream ss(text.substr(6));
    std::vector<double> v;
    std::string item;
    while (std::getline(ss, item, ',')) {
      char* end = nullptr;
      const double d = std::strtod(item.c_str(), &end);
      if (item.empty() || end != item.c_str() + item.size()) {
        throw ParseError(field + ": bloch component " + std::to_string(v.size()) + " '" + item + "' is not a number");
      }
      v.push_back(d);
    }
    if (v.size() != 3) throw ParseError(field + ": bloch: expects three comma-separated reals");
    try {
      return state_from_bloch({v[0], v[1], v[2]});
    } catch (const DomainError& e) {
      throw ParseError(field + ": " + e.what());
    }
  }
  return named_state(text);
}

inline CostOperator cost_from_generators_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ParseError(field + ": expected a nonempty list of 2x2 matrices");
  std::vector<Mat2> gens;
  for (std::size_t k = 0; k < j.size(); ++k) gens.push_back(parse_matrix(j[k], field + "[" + std::to_string(k) + "]"));
  try {
    return build_cost(GeneratorSet(std::move(gens)), "custom");
  } catch (const DomainError& e) {
    throw ParseError(field + ": " + e.what());
  }
}

/// "sym", "z", or "custom" together with a JSON generator list.
inline CostOperator parse_cost(const std::string& selector, const std::string& generators = {}) {
  if (selector == "sym") return sym_cost();
  if (selector == "z") return z_cost();
  if (selector == "custom") {
    if (generators.empty()) throw ParseError("--generators: required with --cost custom");
    json j;
    try {
      j = json::parse(generators);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("--generators: invalid JSON: ") + e.what());
    }
    return cost_from_generators_json(j, "--generators");
  }
  throw ParseError("--cost: expected sym, z or custom, got '" + selector + "'");
}

inline json to_json(const BlochVector& b) { return json::array({b.x, b.y, b.z}); }

inline json to_json(const SolverConfig& cfg) {
  return {{"tolerance", cfg.tolerance},
          {"max_iterations", cfg.max_iterations},
          {"barrier_initial", cfg.barrier_initial},
          {"barrier_growth", cfg.barrier_growth},
          {"newton_decrement_tol", cfg.newton_decrement_tol},
          {"self_distance_fast_path", cfg.self_distance_fast_path}};
}

inline json state_to_json(const QubitState& s) {
  return {{"bloch", to_json(s.bloch())}, {"matrix", matrix_to_json(s.matrix())}};
}

inline json to_json(const suites::CheckResult& c) {
  json w = json::object();
  for (const auto& [label, b] : c.witness) w[label] = to_json(b);
  json out = {{"name", c.name},         {"samples", c.samples}, {"max_deviation", c.max_deviation},
              {"tolerance", c.tolerance}, {"passed", c.passed},   {"note", c.note}};
  if (!c.witness.empty()) out["witness"] = w;
  return out;
}

inline json to_json(const suites::SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.name}, {"passed", r.passed()}, {"checks", checks}};
}

inline json run_report(const std::string& command, json config, json results) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", std::move(config)},
          {"results", std::move(results)}};
}

}  // namespace qwasser::io
