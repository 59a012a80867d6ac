#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "entcert/density.hpp"
#include "entcert/observables.hpp"
#include "entcert/splits.hpp"
#include "entcert/states.hpp"

namespace entcert {

// Evaluated sides of one separability inequality. A verdict never asserts
// membership: `violated` certifies inseparability, `!violated` only means
// the test was inconclusive.
struct CriterionVerdict {
  std::string id;
  std::string scope;  // split label or "k=.."
  double lhs = 0.0;
  double rhs = std::numeric_limits<double>::infinity();
  double bound = std::numeric_limits<double>::infinity();
  bool violated = false;
  double margin = 0.0;  // lhs - min(rhs, bound)
  std::map<std::string, double> detail;
};

inline CriterionVerdict make_verdict(std::string id, std::string scope,
                                     double lhs, double rhs, double bound,
                                     double tol) {
  CriterionVerdict v;
  v.id = std::move(id);
  v.scope = std::move(scope);
  v.lhs = lhs;
  v.rhs = rhs;
  v.bound = bound;
  v.margin = lhs - std::min(rhs, bound);
  v.violated = v.margin > tol;
  return v;
}

struct QuadExpectation {
  double ex = 0.0, ey = 0.0, ez = 0.0, ei = 0.0;
  double x2y2() const { return ex * ex + ey * ey; }
  double i2z2() const { return std::max(ei * ei - ez * ez, 0.0); }
};

// The per-x expectation values <X_x>, <Y_x>, <Z_x>, <I_x> that every
// inequality is built from. Two independent sources: trace against the
// materialized operator family, or direct density-matrix elements (valid
// for Pauli triples only).
class AntidiagExpectations {
 public:
  static AntidiagExpectations from_matrix_elements(const DensityMatrix& rho) {
    AntidiagExpectations e;
    e.n_qubits_ = rho.n_qubits();
    const int half = 1 << (e.n_qubits_ - 1);
    const std::size_t d = rho.dim();
    e.q_.resize(half);
    for (int x = 0; x < half; ++x) {
      const std::uint32_t b = antidiag_bits(e.n_qubits_, x);
      const std::size_t r = b, c = d - 1 - b;
      const cplx corner = rho.entry(r, c);
      QuadExpectation q;
      q.ex = 2.0 * corner.real();
      q.ey = -2.0 * corner.imag();
      q.ei = rho.entry(r, r).real() + rho.entry(c, c).real();
      q.ez = rho.entry(r, r).real() - rho.entry(c, c).real();
      e.q_[x] = q;
    }
    return e;
  }

  static AntidiagExpectations from_family(const DensityMatrix& rho,
                                          const OperatorFamily& fam,
                                          double tol = kDefaultTol) {
    if (fam.n_qubits() != rho.n_qubits())
      throw std::invalid_argument("expectations: family/state qubit mismatch");
    AntidiagExpectations e;
    e.n_qubits_ = rho.n_qubits();
    e.q_.resize(fam.count());
    for (int x = 0; x < fam.count(); ++x) {
      const auto& quad = fam.quad(x);
      QuadExpectation q;
      q.ex = expectation(rho, quad.x, tol);
      q.ey = expectation(rho, quad.y, tol);
      q.ez = expectation(rho, quad.z, tol);
      q.ei = expectation(rho, quad.i, tol);
      e.q_[x] = q;
    }
    return e;
  }

  int n_qubits() const { return n_qubits_; }
  int count() const { return static_cast<int>(q_.size()); }
  const QuadExpectation& at(int x) const { return q_.at(x); }

 private:
  int n_qubits_ = 0;
  std::vector<QuadExpectation> q_;
};

inline void require_pauli(const std::vector<LocalTriple>& triples) {
  const ComplexMatrix sx = sigma_x(), sy = sigma_y(), sz = sigma_z();
  for (const auto& t : triples) {
    if (t.x.max_abs_diff(sx) > kAlgebraTol ||
        t.y.max_abs_diff(sy) > kAlgebraTol ||
        t.z.max_abs_diff(sz) > kAlgebraTol)
      throw std::invalid_argument(
          "matrix-element form requires the Pauli triples; evaluate via the "
          "operator family instead");
  }
}

// ---------------------------------------------------------------------------
// (I) Anti-diagonal bound: max_j |rho_{j,jbar}| <= (1/2)^k for k-separable
// states. Violation excludes k-separability outright.
inline CriterionVerdict lz_condition(const DensityMatrix& rho, int k,
                                     double tol = kDefaultTol) {
  const std::size_t d = rho.dim();
  double lhs = 0.0;
  std::size_t best = 1;
  for (std::size_t j = 1; j <= d / 2; ++j) {
    const double v = std::abs(rho.antidiagonal(j));
    if (v > lhs) {
      lhs = v;
      best = j;
    }
  }
  auto v = make_verdict("lz", "k=" + std::to_string(k), lhs,
                        std::numeric_limits<double>::infinity(),
                        std::pow(0.5, k), tol);
  v.detail["element_row"] = double(best);
  // Bracketing gives the finest level the element value still admits.
  int k_est = 0;
  while (k_est < rho.n_qubits() && lhs <= std::pow(0.5, k_est + 1) + tol)
    ++k_est;
  v.detail["k_separable_at_most"] = double(k_est);
  return v;
}

// (II) Mermin-type bounds.
inline CriterionVerdict mermin_quadratic(const DensityMatrix& rho, int k,
                                         const std::vector<LocalTriple>& triples,
                                         double tol = kDefaultTol) {
  const auto [m, mp] = mermin_operator(triples);
  const double em = expectation(rho, m, tol);
  const double emp = expectation(rho, mp, tol);
  const int n = rho.n_qubits();
  const double bound = std::pow(2.0, n + 3) * std::pow(0.25, k);
  auto v = make_verdict("mermin_quadratic", "k=" + std::to_string(k),
                        em * em + emp * emp,
                        std::numeric_limits<double>::infinity(), bound, tol);
  v.detail["mermin"] = em;
  v.detail["mermin_prime"] = emp;
  return v;
}

inline CriterionVerdict mermin_linear(const DensityMatrix& rho, int k,
                                      const std::vector<LocalTriple>& triples,
                                      double tol = kDefaultTol) {
  const auto [m, mp] = mermin_operator(triples);
  const double em = expectation(rho, m, tol);
  const int n = rho.n_qubits();
  const double bound = std::pow(2.0, 0.5 * (n + 3)) * std::pow(0.5, k);
  auto v = make_verdict("mermin_linear", "k=" + std::to_string(k),
                        std::abs(em), std::numeric_limits<double>::infinity(),
                        bound, tol);
  (void)mp;
  return v;
}

// (III) Fidelity with respect to the generalized GHZ state.
inline double fidelity_ghz(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  return 0.5 * (rho.diagonal(1) + rho.diagonal(d)) +
         std::abs(rho.antidiagonal(1));
}

// Basis-independent form: 2|rho_{j,jbar}| <= sum_{i != j,jbar} rho_ii must
// hold for every j on biseparable states; the verdict reports the worst j.
inline CriterionVerdict fidelity_criterion(const DensityMatrix& rho,
                                           double tol = kDefaultTol) {
  const std::size_t d = rho.dim();
  double total = 0.0;
  for (std::size_t i = 1; i <= d; ++i) total += rho.diagonal(i);
  double best_margin = -std::numeric_limits<double>::infinity();
  double lhs = 0.0, rhs = 0.0;
  std::size_t best = 1;
  for (std::size_t j = 1; j <= d / 2; ++j) {
    const std::size_t jb = d + 1 - j;
    const double l = 2.0 * std::abs(rho.antidiagonal(j));
    const double r = total - rho.diagonal(j) - rho.diagonal(jb);
    if (l - r > best_margin) {
      best_margin = l - r;
      lhs = l;
      rhs = r;
      best = j;
    }
  }
  auto v = make_verdict("fidelity", "k=2", lhs, rhs,
                        std::numeric_limits<double>::infinity(), tol);
  v.detail["element_row"] = double(best);
  v.detail["fidelity"] = fidelity_ghz(rho);
  return v;
}

// (IV) Split condition on the GHZ-diagonal projection:
// |lambda0+ - lambda0-| <= 2 lambda_j. Exact both ways on family members.
inline CriterionVerdict dc_condition(const DensityMatrix& rho,
                                     const Split& split,
                                     double tol = kDefaultTol) {
  if (split.k() != 2)
    throw std::invalid_argument("dc_condition: split must be bipartite");
  if (split.n_qubits != rho.n_qubits())
    throw std::invalid_argument("dc_condition: qubit count mismatch");
  const GHZDiagonalState s = dc_depolarize(rho);
  const std::uint32_t j = bipartite_label_value(split);
  const double lhs = std::abs(s.lambda0_plus - s.lambda0_minus);
  const double rhs = 2.0 * s.lambda.at(j - 1);
  auto v = make_verdict("dc", split.to_string(), lhs, rhs,
                        std::numeric_limits<double>::infinity(), tol);
  v.detail["label"] = double(j);
  v.detail["element_row"] = double((std::size_t(j) << 1) + 1);
  return v;
}

// ---------------------------------------------------------------------------
// The split conditions: for each solution set z_i of the split,
//   max_{x in z_i} <X_x>^2+<Y_x>^2  <=  min_{x in z_i} <I_x>^2-<Z_x>^2
//   <= (1/4)^{k-1}.
inline std::vector<CriterionVerdict> alpha_split_condition(
    const AntidiagExpectations& e, const Split& split,
    double tol = kDefaultTol) {
  if (split.n_qubits != e.n_qubits())
    throw std::invalid_argument("alpha_split_condition: qubit mismatch");
  const double bound = std::pow(0.25, split.k() - 1);
  std::vector<CriterionVerdict> out;
  int i = 0;
  for (const auto& set : solution_sets(split)) {
    double lhs = 0.0;
    double rhs = std::numeric_limits<double>::infinity();
    for (int x : set) {
      lhs = std::max(lhs, e.at(x).x2y2());
      rhs = std::min(rhs, e.at(x).i2z2());
    }
    auto v = make_verdict("alpha_split", split.to_string(), lhs, rhs, bound,
                          tol);
    v.detail["set_index"] = double(i++);
    out.push_back(std::move(v));
  }
  return out;
}

// Single verdict for a split: the most violated of its solution sets.
inline CriterionVerdict split_condition(const AntidiagExpectations& e,
                                        const Split& split,
                                        double tol = kDefaultTol) {
  const auto all = alpha_split_condition(e, split, tol);
  const CriterionVerdict* best = &all.front();
  for (const auto& v : all)
    if (v.margin > best->margin) best = &v;
  return *best;
}

// ---------------------------------------------------------------------------
// k-separability simpliciter. Strong form: for every x,
//   sqrt(<X_x>^2+<Y_x>^2) <= sum over solution sets containing x (over all
//   k-partite splits) of min_{y in set, y != x} sqrt(<I_y>^2-<Z_y>^2),
// where the minimum over index tuples factorizes into per-set minima.
// The numeric bound (1/2)^{k-1} is the weak (anti-diagonal) form.
inline CriterionVerdict ksep_condition(const AntidiagExpectations& e, int k,
                                       double tol = kDefaultTol) {
  const int n = e.n_qubits();
  if (k < 2 || k > n)
    throw std::invalid_argument("ksep_condition: k out of range");
  const int half = 1 << (n - 1);
  std::vector<double> root_i2z2(half);
  for (int x = 0; x < half; ++x) root_i2z2[x] = std::sqrt(e.at(x).i2z2());

  std::vector<double> rhs(half, 0.0);
  for (const auto& split : enumerate_splits(n, k)) {
    for (const auto& set : solution_sets(split)) {
      for (int x : set) {
        double m = std::numeric_limits<double>::infinity();
        for (int y : set)
          if (y != x) m = std::min(m, root_i2z2[y]);
        rhs[x] += m;
      }
    }
  }

  const double bound = std::pow(0.5, k - 1);
  CriterionVerdict best;
  bool first = true;
  double max_lhs = 0.0;
  for (int x = 0; x < half; ++x) {
    const double lhs = std::sqrt(e.at(x).x2y2());
    max_lhs = std::max(max_lhs, lhs);
    auto v = make_verdict("ksep", "k=" + std::to_string(k), lhs, rhs[x],
                          bound, tol);
    v.detail["x"] = double(x);
    if (first || v.margin > best.margin) {
      best = std::move(v);
      first = false;
    }
  }
  best.detail["weak_bound_violated"] = (max_lhs > bound + tol) ? 1.0 : 0.0;
  if (best.violated) {
    best.detail["at_most_separable"] = double(k - 1);
    best.detail["m_at_least"] = std::ceil(double(n) / double(k));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Matrix-element evaluation of a split or level condition: identical verdict
// to the operator route, read directly from the density matrix. Only valid
// for the Pauli triples, whose z-basis the element formulas assume.
struct MatrixFormSpec {
  std::string id;  // "alpha_split" | "ksep"
  Split split;     // for alpha_split
  int k = 0;       // for ksep
};

inline CriterionVerdict matrix_form(const DensityMatrix& rho,
                                    const MatrixFormSpec& spec,
                                    const std::vector<LocalTriple>& triples,
                                    double tol = kDefaultTol) {
  require_pauli(triples);
  const auto e = AntidiagExpectations::from_matrix_elements(rho);
  if (spec.id == "alpha_split") return split_condition(e, spec.split, tol);
  if (spec.id == "ksep") return ksep_condition(e, spec.k, tol);
  throw std::invalid_argument("matrix_form: unknown criterion id " + spec.id);
}

// ---------------------------------------------------------------------------
// Chain of inequalities around one anti-diagonal element (1-based row l):
//   e1 = 4|rho_{l,lbar}| - (rho_ll + rho_lbar,lbar)
//   e2 = 2|rho_{l,lbar}|
//   e3 = sum_{n != l,lbar} sqrt(rho_nn rho_nbar,nbar)   (each pair twice)
//   e4 = sum_{i != l,lbar} rho_ii
// e1 <= e2 and e3 <= e4 hold for every state; e2 <= e3 is the
// biseparability condition and implies the fidelity (e2 <= e4) and
// anti-diagonal (e1 <= e4) conditions.
struct ChainReport {
  std::size_t element_row = 1;
  double expr1 = 0.0, expr2 = 0.0, expr3 = 0.0, expr4 = 0.0;
  bool violated_lz2 = false;        // e1 > e4
  bool violated_fidelity = false;   // e2 > e4
  bool violated_new_bisep = false;  // e2 > e3
};

inline ChainReport chain_check(const DensityMatrix& rho, std::size_t l,
                               double tol = kDefaultTol) {
  const std::size_t d = rho.dim();
  if (l < 1 || l > d)
    throw std::invalid_argument("chain_check: element index out of range");
  const std::size_t lb = d + 1 - l;
  ChainReport r;
  r.element_row = l;
  const double a = std::abs(rho.antidiagonal(std::min(l, lb)));
  r.expr1 = 4.0 * a - (rho.diagonal(l) + rho.diagonal(lb));
  r.expr2 = 2.0 * a;
  for (std::size_t n = 1; n <= d; ++n) {
    if (n == l || n == lb) continue;
    const std::size_t nb = d + 1 - n;
    r.expr3 += std::sqrt(std::max(rho.diagonal(n), 0.0) *
                         std::max(rho.diagonal(nb), 0.0));
    r.expr4 += rho.diagonal(n);
  }
  r.violated_lz2 = r.expr1 > r.expr4 + tol;
  r.violated_fidelity = r.expr2 > r.expr4 + tol;
  r.violated_new_bisep = r.expr2 > r.expr3 + tol;
  return r;
}

// ---------------------------------------------------------------------------
// Criterion families used by the robustness sweeps.
enum class CriterionFamily {
  full_entanglement,  // biseparability violated (k=2 strong form)
  all_splits,         // every bipartite split condition violated
  some_entanglement,  // full separability violated (k=N)
};

inline CriterionFamily criterion_family_from_string(const std::string& s) {
  if (s == "full") return CriterionFamily::full_entanglement;
  if (s == "all-splits" || s == "allsplits") return CriterionFamily::all_splits;
  if (s == "some") return CriterionFamily::some_entanglement;
  throw std::invalid_argument("unknown criterion family: " + s);
}

inline std::string to_string(CriterionFamily f) {
  switch (f) {
    case CriterionFamily::full_entanglement: return "full";
    case CriterionFamily::all_splits: return "all-splits";
    case CriterionFamily::some_entanglement: return "some";
  }
  return "?";
}

// Signed violation margin; positive means detected.
inline double criterion_margin(const AntidiagExpectations& e,
                               CriterionFamily f, double tol = kDefaultTol) {
  const int n = e.n_qubits();
  switch (f) {
    case CriterionFamily::full_entanglement:
      return ksep_condition(e, 2, tol).margin;
    case CriterionFamily::some_entanglement:
      return ksep_condition(e, n, tol).margin;
    case CriterionFamily::all_splits: {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& split : enumerate_splits(n, 2))
        worst = std::min(worst, split_condition(e, split, tol).margin);
      return worst;
    }
  }
  throw std::logic_error("criterion_margin: bad family");
}

inline double criterion_margin(const DensityMatrix& rho, CriterionFamily f,
                               double tol = kDefaultTol) {
  return criterion_margin(AntidiagExpectations::from_matrix_elements(rho), f,
                          tol);
}

}  // namespace entcert
