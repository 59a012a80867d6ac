#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "entcert/criteria.hpp"

namespace entcert {

// Everything here reports exclusions. The criteria are necessary conditions
// for separability, so a class that is not excluded is merely consistent
// with the evidence; consistency is never membership.
struct SplitVerdictEntry {
  Split split;
  CriterionVerdict verdict;
};

struct ClassificationReport {
  int n_qubits = 0;
  std::vector<SplitVerdictEntry> split_verdicts;   // all evaluated splits
  std::map<int, CriterionVerdict> level_verdicts;  // ksep per level k
  std::vector<std::string> excluded_classes;
  std::vector<std::string> consistent_classes;
  // k-separable entanglement bracket: the state is at most k_hi-separable.
  int k_lo = 1;
  int k_hi = 0;
  // m-partite entanglement bracket ceil(N/k_hi) <= m <= N - k_lo + 1.
  int m_lo = 1;
  int m_hi = 0;
  bool dc_family_member = false;  // classify_dc only
  std::string caveat;
};

inline const char* kSubsystemCaveat =
    "Exclusions bound k-separability only; inferences about entanglement "
    "inside specific subsystems (irreducible m-partite entanglement, "
    "reduced-state arguments) need care beyond these criteria.";

// Three-qubit classification over the 10 classes of the extended
// separability hierarchy. Classes are excluded when a condition all their
// members must satisfy is violated.
inline ClassificationReport classify3(const DensityMatrix& rho,
                                      const AntidiagExpectations& e,
                                      double tol = kDefaultTol) {
  if (rho.n_qubits() != 3)
    throw std::invalid_argument("classify3: state must have 3 qubits");
  ClassificationReport rep;
  rep.n_qubits = 3;
  rep.caveat = kSubsystemCaveat;

  const Split sa = Split::of(3, {{0}, {1, 2}});
  const Split sb = Split::of(3, {{1}, {0, 2}});
  const Split sc = Split::of(3, {{2}, {0, 1}});
  const CriterionVerdict va = split_condition(e, sa, tol);
  const CriterionVerdict vb = split_condition(e, sb, tol);
  const CriterionVerdict vc = split_condition(e, sc, tol);
  rep.split_verdicts = {{sa, va}, {sb, vb}, {sc, vc}};

  const CriterionVerdict ks2 = ksep_condition(e, 2, tol);
  const CriterionVerdict ks3 = ksep_condition(e, 3, tol);
  rep.level_verdicts[2] = ks2;
  rep.level_verdicts[3] = ks3;
  const bool v2 = ks2.violated;
  // 3-separability with the preliminary bound 1/4 (linear scale 1/2) and
  // with the sharp bound 1/16 (linear scale 1/4).
  const bool v3_weak = ks3.lhs > std::min(ks3.rhs, 0.5) + tol;
  const bool v3_strong = ks3.violated;

  const bool a = va.violated, b = vb.violated, c = vc.violated;
  const std::map<std::string, bool> excluded{
      {"1", false},
      {"2.1", v2},
      {"2.2", a || v2},
      {"2.3", b || v2},
      {"2.4", c || v2},
      {"2.5", a || b || v2},
      {"2.6", a || c || v2},
      {"2.7", b || c || v2},
      {"2.8", a || b || c || v2 || v3_weak},
      {"3", a || b || c || v2 || v3_weak || v3_strong},
  };
  for (const auto& [label, ex] : excluded)
    (ex ? rep.excluded_classes : rep.consistent_classes).push_back(label);

  rep.k_hi = v3_strong ? (v2 ? 1 : 2) : 3;
  rep.m_lo = int(std::ceil(3.0 / rep.k_hi));
  rep.m_hi = 3 - rep.k_lo + 1;
  return rep;
}

// Split-by-split verdicts through the GHZ-diagonal projection. On family
// members the per-split verdict is exact in both directions.
inline ClassificationReport classify_dc(const DensityMatrix& rho,
                                        double tol = kDefaultTol) {
  ClassificationReport rep;
  rep.n_qubits = rho.n_qubits();
  const GHZDiagonalState s = dc_depolarize(rho);
  rep.dc_family_member =
      s.to_density(tol).matrix().max_abs_diff(rho.matrix()) <= 1e3 * tol;
  for (const auto& split : enumerate_splits(rho.n_qubits(), 2)) {
    SplitVerdictEntry entry{split, dc_condition(rho, split, tol)};
    rep.split_verdicts.push_back(std::move(entry));
  }
  for (const auto& entry : rep.split_verdicts) {
    const std::string name = entry.split.to_string();
    if (entry.verdict.violated)
      rep.excluded_classes.push_back("separable:" + name);
    else if (rep.dc_family_member)
      rep.consistent_classes.push_back("separable-exact:" + name);
    else
      rep.consistent_classes.push_back("separable:" + name);
  }
  rep.k_hi = rho.n_qubits();  // split verdicts do not bound k simpliciter
  rep.m_lo = 1;
  rep.m_hi = rho.n_qubits();
  rep.caveat =
      "Split verdicts are exact only for GHZ-diagonal family members; "
      "k-separability simpliciter stays bracketed either way.";
  return rep;
}

// Full scan: every split condition at every level plus the per-level
// k-separability conditions; derives the entanglement brackets.
inline ClassificationReport exclusion_scan(const DensityMatrix& rho,
                                           const AntidiagExpectations& e,
                                           double tol = kDefaultTol) {
  const int n = rho.n_qubits();
  ClassificationReport rep;
  rep.n_qubits = n;
  rep.caveat = kSubsystemCaveat;

  int first_violated_level = n + 1;
  for (int k = 2; k <= n; ++k) {
    for (const auto& split : enumerate_splits(n, k)) {
      SplitVerdictEntry entry{split, split_condition(e, split, tol)};
      if (entry.verdict.violated)
        rep.excluded_classes.push_back("separable:" + split.to_string());
      else
        rep.consistent_classes.push_back("separable:" + split.to_string());
      rep.split_verdicts.push_back(std::move(entry));
    }
    rep.level_verdicts[k] = ksep_condition(e, k, tol);
    if (rep.level_verdicts[k].violated) {
      first_violated_level = std::min(first_violated_level, k);
      rep.excluded_classes.push_back("k-separable:" + std::to_string(k));
    } else {
      rep.consistent_classes.push_back("k-separable:" + std::to_string(k));
    }
  }
  rep.k_lo = 1;
  rep.k_hi = first_violated_level - 1;
  rep.m_lo = int(std::ceil(double(n) / double(rep.k_hi)));
  rep.m_hi = n - rep.k_lo + 1;
  return rep;
}

}  // namespace entcert
