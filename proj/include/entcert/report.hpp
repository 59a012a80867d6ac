#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "entcert/classify.hpp"
#include "entcert/criteria.hpp"
#include "entcert/robustness.hpp"
#include "entcert/version.hpp"

namespace entcert {

inline nlohmann::json engine_header(double tol) {
  return {{"name", "entcert"},
          {"version", kVersion},
          {"tolerance", tol},
          {"algebra_tolerance", kAlgebraTol}};
}

inline nlohmann::json to_json(const CriterionVerdict& v) {
  nlohmann::json j{{"id", v.id},
                   {"scope", v.scope},
                   {"lhs", v.lhs},
                   {"violated", v.violated},
                   {"margin", v.margin}};
  if (std::isfinite(v.rhs)) j["rhs"] = v.rhs;
  if (std::isfinite(v.bound)) j["bound"] = v.bound;
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

inline nlohmann::json to_json(const ChainReport& r) {
  return {{"element_row", r.element_row},
          {"expressions", {r.expr1, r.expr2, r.expr3, r.expr4}},
          {"violated_lz2", r.violated_lz2},
          {"violated_fidelity", r.violated_fidelity},
          {"violated_new_biseparability", r.violated_new_bisep}};
}

inline nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json splits = nlohmann::json::array();
  for (const auto& entry : r.split_verdicts) {
    nlohmann::json e = to_json(entry.verdict);
    e["split"] = entry.split.to_string();
    e["level"] = entry.split.k();
    splits.push_back(std::move(e));
  }
  nlohmann::json levels = nlohmann::json::object();
  for (const auto& [k, v] : r.level_verdicts)
    levels[std::to_string(k)] = to_json(v);
  nlohmann::json j{{"n_qubits", r.n_qubits},
                   {"split_verdicts", splits},
                   {"level_verdicts", levels},
                   {"excluded", r.excluded_classes},
                   {"consistent", r.consistent_classes},
                   {"k_separable_entanglement_bracket", {r.k_lo, r.k_hi}},
                   {"m_partite_entanglement_bracket", {r.m_lo, r.m_hi}},
                   {"caveat", r.caveat}};
  return j;
}

inline nlohmann::json to_json(const ThresholdResult& t) {
  return {{"state", t.state_id},
          {"channel", t.channel},
          {"criterion", t.criterion},
          {"p0", t.p0},
          {"method", t.method},
          {"bracket_width", t.bracket_width},
          {"never_violated", t.never_violated},
          {"verified", t.verified}};
}

}  // namespace entcert
