#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "entcert/density.hpp"
#include "entcert/states.hpp"

namespace entcert {

// On-disk state description. Two kinds:
//   {"n_qubits": N, "kind": "dense", "entries": [[re, im], ...]}  (4^N pairs,
//   row-major)
//   {"n_qubits": N, "kind": "named", "name": "...", "params": {...}}
struct StateFile {
  int n_qubits = 0;
  std::string kind;  // dense | named
  std::string name;
  std::map<std::string, double> params;
  ComplexMatrix dense;

  static StateFile from_json(const nlohmann::json& j) {
    StateFile sf;
    if (!j.contains("kind") || !j.contains("n_qubits"))
      throw std::invalid_argument("state file: missing kind or n_qubits");
    sf.kind = j.at("kind").get<std::string>();
    sf.n_qubits = j.at("n_qubits").get<int>();
    if (sf.kind == "dense") {
      const auto& entries = j.at("entries");
      const std::size_t d = std::size_t{1} << sf.n_qubits;
      if (entries.size() != d * d)
        throw std::invalid_argument(
            "state file: dense entry count " +
            std::to_string(entries.size()) + " != 4^" +
            std::to_string(sf.n_qubits));
      sf.dense = ComplexMatrix(d, d);
      std::size_t i = 0;
      for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2)
          throw std::invalid_argument(
              "state file: entries must be [re, im] pairs");
        sf.dense(i / d, i % d) = cplx(e[0].get<double>(), e[1].get<double>());
        ++i;
      }
    } else if (sf.kind == "named") {
      sf.name = j.at("name").get<std::string>();
      if (j.contains("params"))
        for (const auto& [key, value] : j.at("params").items())
          sf.params[key] = value.get<double>();
    } else {
      throw std::invalid_argument("state file: unknown kind '" + sf.kind +
                                  "'");
    }
    return sf;
  }

  static StateFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
      throw std::invalid_argument("state file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_qubits;
    j["kind"] = kind;
    if (kind == "dense") {
      nlohmann::json entries = nlohmann::json::array();
      const std::size_t d = dense.rows();
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          entries.push_back({dense(r, c).real(), dense(r, c).imag()});
      j["entries"] = std::move(entries);
    } else {
      j["name"] = name;
      j["params"] = params;
    }
    return j;
  }

  DensityMatrix realize(double tol) const {
    if (kind == "dense") return validate_density(dense, n_qubits, tol);
    auto p = params;
    if (!p.count("n") && n_qubits > 0) p["n"] = double(n_qubits);
    DensityMatrix rho = named_state(name, p, tol);
    if (n_qubits > 0 && rho.n_qubits() != n_qubits)
      throw std::invalid_argument("state file: n_qubits does not match state");
    return rho;
  }
};

inline StateFile statefile_dense(const DensityMatrix& rho) {
  StateFile sf;
  sf.n_qubits = rho.n_qubits();
  sf.kind = "dense";
  sf.dense = rho.matrix();
  return sf;
}

}  // namespace entcert
