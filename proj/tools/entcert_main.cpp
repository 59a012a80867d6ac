// entcert: certify which partial-separability conditions an N-qubit state
// violates, compute noise-robustness thresholds, and plan measurement
// settings.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entcert/entcert.hpp"

namespace {

using namespace entcert;
using nlohmann::json;

// A state argument is either a JSON file path, "named:NAME", or a bare
// catalog name; key=value extras supply the parameters.
StateFile parse_state_arg(const std::string& spec,
                          const std::vector<std::string>& kv) {
  StateFile sf;
  std::string name = spec;
  if (name.rfind("named:", 0) == 0) name = name.substr(6);
  const bool looks_like_file =
      name.find('.') != std::string::npos || name.find('/') != std::string::npos;
  if (looks_like_file) {
    sf = StateFile::load(name);
  } else {
    sf.kind = "named";
    sf.name = name;
  }
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("expected key=value parameter, got '" + item +
                                 "'");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("parameter '" + item +
                                 "' does not carry a numeric value");
    }
    if (sf.kind != "named")
      throw CLI::ValidationError("parameters only apply to named states");
    sf.params[key] = value;
  }
  if (sf.kind == "named" && sf.params.count("n"))
    sf.n_qubits = int(sf.params.at("n"));
  return sf;
}

json state_summary(const StateFile& sf, const DensityMatrix& rho) {
  json j{{"kind", sf.kind}, {"n_qubits", rho.n_qubits()}};
  if (sf.kind == "named") {
    j["name"] = sf.name;
    j["params"] = sf.params;
  }
  return j;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output " + out_path);
    out << j.dump(2) << "\n";
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output " + out_path);
    out << text;
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_analyze(const std::string& state, const std::vector<std::string>& kv,
                int level, const std::string& splits, bool chain, int element,
                const std::string& out) {
  const double tol = default_tolerance();
  const StateFile sf = parse_state_arg(state, kv);
  const DensityMatrix rho = sf.realize(tol);
  const int n = rho.n_qubits();
  const auto exps = AntidiagExpectations::from_matrix_elements(rho);

  json verdicts = json::array();
  verdicts.push_back(to_json(fidelity_criterion(rho, tol)));
  const std::vector<LocalTriple> triples((std::size_t(n)));
  auto want_level = [&](int k) { return level == 0 || level == k; };
  for (int k = 2; k <= n; ++k) {
    if (!want_level(k)) continue;
    verdicts.push_back(to_json(lz_condition(rho, k, tol)));
    verdicts.push_back(to_json(mermin_quadratic(rho, k, triples, tol)));
    verdicts.push_back(to_json(mermin_linear(rho, k, triples, tol)));
    verdicts.push_back(to_json(ksep_condition(exps, k, tol)));
  }
  for (const auto& split : enumerate_splits(n, 2))
    verdicts.push_back(to_json(dc_condition(rho, split, tol)));
  if (!splits.empty()) {
    const int only = splits == "all" ? 0 : std::stoi(splits);
    for (int k = 2; k <= n; ++k) {
      if (!want_level(k) || (only != 0 && k != only)) continue;
      for (const auto& split : enumerate_splits(n, k))
        for (const auto& v : alpha_split_condition(exps, split, tol))
          verdicts.push_back(to_json(v));
    }
  }

  json j{{"engine", engine_header(tol)},
         {"state", state_summary(sf, rho)},
         {"verdicts", verdicts},
         {"classification", to_json(exclusion_scan(rho, exps, tol))}};
  if (n == 3) j["classification3"] = to_json(classify3(rho, exps, tol));
  if (chain) {
    std::size_t l = std::size_t(element);
    if (element <= 0) {
      double best = -1.0;
      for (std::size_t row = 1; row <= rho.dim() / 2; ++row)
        if (std::abs(rho.antidiagonal(row)) > best) {
          best = std::abs(rho.antidiagonal(row));
          l = row;
        }
    }
    j["chain"] = to_json(chain_check(rho, l, tol));
  }
  emit(j, out);
  return 0;
}

int run_robustness(const std::string& state, const std::vector<std::string>& kv,
                   const std::string& noise, const std::string& criterion,
                   const std::string& out) {
  const double tol = default_tolerance();
  const StateFile sf = parse_state_arg(state, kv);
  const DensityMatrix rho = sf.realize(tol);
  const NoiseKind kind = noise_kind_from_string(noise);
  const CriterionFamily fam = criterion_family_from_string(criterion);
  ThresholdResult res;
  if (kind == NoiseKind::white) {
    res = threshold_white(rho, fam, tol);
  } else {
    auto at = [&](double p) { return apply_channel(rho, {kind, p}); };
    res = threshold_channel(at, kind, fam, tol);
  }
  res.state_id = sf.kind == "named" ? sf.name : "dense";
  json j{{"engine", engine_header(tol)},
         {"state", state_summary(sf, rho)},
         {"threshold", to_json(res)}};
  emit(j, out);
  return 0;
}

int run_settings(const std::string& state, const std::vector<std::string>& kv,
                 const std::string& profile_arg, int target,
                 const std::string& out) {
  const double tol = default_tolerance();
  const StateFile sf = parse_state_arg(state, kv);
  const DensityMatrix rho = sf.realize(tol);
  const int n = rho.n_qubits();

  // Pick the target anti-diagonal element (largest modulus) unless given.
  std::size_t row = target > 0 ? std::size_t(target) : 1;
  if (target <= 0) {
    double best = -1.0;
    for (std::size_t j = 1; j <= rho.dim() / 2; ++j)
      if (std::abs(rho.antidiagonal(j)) > best) {
        best = std::abs(rho.antidiagonal(j));
        row = j;
      }
  }
  const cplx elem = rho.antidiagonal(std::min(row, rho.dim() + 1 - row));

  StateProfile profile;
  if (profile_arg == "real") profile = StateProfile::real_antidiagonal;
  else if (profile_arg == "imag") profile = StateProfile::imag_antidiagonal;
  else if (profile_arg == "general") profile = StateProfile::general_single;
  else if (profile_arg == "independent")
    profile = StateProfile::state_independent;
  else if (profile_arg == "auto") {
    if (sf.kind == "dense") {
      profile = StateProfile::state_independent;
    } else if (std::abs(elem.imag()) <= tol) {
      profile = StateProfile::real_antidiagonal;
    } else if (std::abs(elem.real()) <= tol) {
      profile = StateProfile::imag_antidiagonal;
    } else {
      profile = StateProfile::general_single;
    }
  } else {
    throw CLI::ValidationError("unknown profile " + profile_arg);
  }

  std::vector<MeasurementSetting> plan;
  if (profile == StateProfile::state_independent) {
    // All sigma_x / sigma_y product settings determine every X_x, Y_x.
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::string label;
      std::vector<ComplexMatrix> locals;
      for (int q = 0; q < n; ++q) {
        const bool y = bits & qubit_bit(n, q);
        label += y ? 'Y' : 'X';
        locals.push_back(y ? sigma_y() : sigma_x());
      }
      plan.push_back(MeasurementSetting::from_locals(label, std::move(locals)));
    }
  } else {
    if (profile == StateProfile::real_antidiagonal ||
        profile == StateProfile::general_single)
      for (int l = 1; l <= n; ++l)
        plan.push_back(rotate_setting(settings_real(n, l), row));
    if (profile == StateProfile::imag_antidiagonal ||
        profile == StateProfile::general_single)
      for (int l = 1; l <= n; ++l)
        plan.push_back(rotate_setting(settings_imag(n, l), row));
  }
  plan.push_back(MeasurementSetting::from_locals(
      "Z", std::vector<ComplexMatrix>(std::size_t(n), sigma_z())));

  json settings = json::array();
  for (const auto& s : plan) {
    json angles = json::array();
    for (const auto& [theta, phi] : s.bloch_angles())
      angles.push_back({{"theta", theta}, {"phi", phi}});
    settings.push_back({{"label", s.label}, {"bloch", angles}});
  }
  const char* profile_name =
      profile == StateProfile::real_antidiagonal    ? "real"
      : profile == StateProfile::imag_antidiagonal  ? "imag"
      : profile == StateProfile::general_single     ? "general"
                                                    : "independent";
  json j{{"engine", engine_header(tol)},
         {"state", state_summary(sf, rho)},
         {"profile", profile_name},
         {"target_row", row},
         {"count", settings.size()},
         {"settings", settings}};
  emit(j, out);
  return 0;
}

int run_classify(const std::string& state, const std::vector<std::string>& kv,
                 const std::string& out) {
  const double tol = default_tolerance();
  const StateFile sf = parse_state_arg(state, kv);
  const DensityMatrix rho = sf.realize(tol);
  const auto exps = AntidiagExpectations::from_matrix_elements(rho);
  json j{{"engine", engine_header(tol)},
         {"state", state_summary(sf, rho)},
         {"classification", to_json(exclusion_scan(rho, exps, tol))},
         {"dur_cirac", to_json(classify_dc(rho, tol))}};
  if (rho.n_qubits() == 3)
    j["classification3"] = to_json(classify3(rho, exps, tol));
  emit(j, out);
  return 0;
}

std::string solution_set_cell(const std::vector<int>& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(set[i]);
  }
  return s + "}";
}

int run_tables(const std::string& which, const std::string& out) {
  std::ostringstream csv;
  if (which == "tabel1" || which == "tabel2") {
    // Solution sets for the bipartite (tabel1) and tripartite (tabel2)
    // splits of four qubits, singleton-heavy splits first.
    std::vector<Split> cols;
    if (which == "tabel1") {
      cols = {Split::of(4, {{0}, {1, 2, 3}}), Split::of(4, {{1}, {0, 2, 3}}),
              Split::of(4, {{2}, {0, 1, 3}}), Split::of(4, {{3}, {0, 1, 2}}),
              Split::of(4, {{0, 1}, {2, 3}}), Split::of(4, {{0, 2}, {1, 3}}),
              Split::of(4, {{0, 3}, {1, 2}})};
    } else {
      cols = {Split::of(4, {{0}, {1}, {2, 3}}),
              Split::of(4, {{0, 1}, {2}, {3}}),
              Split::of(4, {{0}, {1, 2}, {3}}),
              Split::of(4, {{0, 2}, {1}, {3}}),
              Split::of(4, {{0, 3}, {1}, {2}}),
              Split::of(4, {{1, 3}, {0}, {2}})};
    }
    csv << "set";
    for (const auto& s : cols) csv << "," << s.to_string();
    csv << "\n";
    const std::size_t n_sets = solution_sets(cols.front()).size();
    std::vector<std::vector<std::string>> cells(n_sets);
    for (const auto& s : cols) {
      const auto sets = solution_sets(s);
      for (std::size_t i = 0; i < n_sets; ++i)
        cells[i].push_back(solution_set_cell(sets[i]));
    }
    for (std::size_t i = 0; i < n_sets; ++i) {
      csv << "z" << (i + 1);
      for (const auto& c : cells[i]) csv << "," << c;
      csv << "\n";
    }
  } else if (which == "ghz") {
    csv << "n,channel,criterion,p0,method\n";
    for (const auto& row : ghz_tables(2, 8))
      csv << row.n_qubits << "," << row.channel << "," << row.criterion << ","
          << fmt_double(row.p0) << "," << row.method << "\n";
  } else {
    throw CLI::ValidationError("unknown table id " + which);
  }
  emit_text(csv.str(), out);
  return 0;
}

int run_figures(const std::string& which, const std::string& out) {
  const auto rows = figure_data(which);
  std::ostringstream csv;
  csv << "n";
  for (const auto& [name, value] : rows.front().columns) csv << "," << name;
  csv << "\n";
  for (const auto& row : rows) {
    csv << row.n_qubits;
    for (const auto& [name, value] : row.columns)
      csv << "," << fmt_double(value);
    csv << "\n";
  }
  emit_text(csv.str(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "entcert: partial-separability certification for N-qubit states"};
  app.require_subcommand(1);

  std::string state, out, noise = "white", criterion = "full";
  std::string which, profile = "auto", splits;
  std::vector<std::string> kv;
  int level = 0, element = 0, target = 0;
  bool chain = false;

  auto add_state_opts = [&](CLI::App* cmd) {
    cmd->add_option("state", state,
                    "state: JSON file, named:NAME, or catalog name")
        ->required();
    cmd->add_option("params", kv, "named-state parameters as key=value");
    cmd->add_option("--out", out, "write the report to a file");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "evaluate separability criteria and classify");
  add_state_opts(analyze);
  analyze->add_option("--level", level, "restrict to one hierarchy level k");
  analyze->add_option("--splits", splits,
                      "evaluate split conditions: 'all' or one level k");
  analyze->add_flag("--chain", chain, "include the inequality chain report");
  analyze->add_option("--element", element,
                      "anti-diagonal row for --chain (default: largest)");

  CLI::App* robust = app.add_subcommand(
      "robustness", "noise-robustness threshold p0 for one criterion");
  add_state_opts(robust);
  robust->add_option("--noise", noise,
                     "white|colored|depolarize|dephase|dissipate");
  robust->add_option("--criterion", criterion, "full|some|all-splits");

  CLI::App* settings =
      app.add_subcommand("settings", "measurement-setting plan");
  add_state_opts(settings);
  settings->add_option("--profile", profile,
                       "auto|real|imag|general|independent");
  settings->add_option("--target", target,
                       "anti-diagonal row to target (1-based)");

  CLI::App* classify =
      app.add_subcommand("classify", "hierarchy exclusion report");
  add_state_opts(classify);

  CLI::App* tables = app.add_subcommand("tables", "CSV tables");
  tables->add_option("--which", which, "tabel1|tabel2|ghz")->required();
  tables->add_option("--out", out, "write CSV to a file");

  CLI::App* figures = app.add_subcommand("figures", "CSV figure data");
  figures->add_option("--which", which, "lhv-gap|ghz-noise")->required();
  figures->add_option("--out", out, "write CSV to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed())
      return run_analyze(state, kv, level, splits, chain, element, out);
    if (robust->parsed())
      return run_robustness(state, kv, noise, criterion, out);
    if (settings->parsed())
      return run_settings(state, kv, profile, target, out);
    if (classify->parsed()) return run_classify(state, kv, out);
    if (tables->parsed()) return run_tables(which, out);
    if (figures->parsed()) return run_figures(which, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
