#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "entcert/classify.hpp"
#include "entcert/criteria.hpp"
#include "entcert/states.hpp"

namespace entcert {

struct ThresholdResult {
  std::string state_id;
  std::string channel;
  std::string criterion;
  double p0 = 0.0;
  std::string method;  // closed-form | bisection | equation
  double bracket_width = 0.0;
  bool never_violated = false;
  bool verified = false;
};

namespace detail {

// Threshold of a margin function that is positive (criterion violated) on
// [0, p0) and non-positive beyond. Monotonicity of the violation region is
// checked by sampling; a margin that recovers after dropping aborts.
// The root is the margin's sign change, not the verdict tolerance: margins
// that decay smoothly to zero (dephasing, colored noise) must still report
// their full threshold.
inline ThresholdResult bisect_threshold(
    const std::function<double(double)>& margin, double tol = 0.0,
    int iterations = 60, int monotonicity_samples = 64) {
  ThresholdResult res;
  res.method = "bisection";
  const double m0 = margin(0.0);
  if (m0 <= tol) {
    res.p0 = 0.0;
    res.never_violated = true;
    res.bracket_width = 0.0;
    res.verified = true;
    return res;
  }
  bool seen_satisfied = false;
  double last_violated = 0.0;
  double first_satisfied = 1.0;
  bool have_satisfied = false;
  for (int i = 1; i <= monotonicity_samples; ++i) {
    const double p = double(i) / double(monotonicity_samples);
    const bool violated = margin(p) > tol;
    if (violated) {
      if (seen_satisfied)
        throw std::runtime_error(
            "threshold: criterion margin is not monotone in p; refusing to "
            "report a first crossing");
      last_violated = p;
    } else {
      if (!seen_satisfied) first_satisfied = p;
      seen_satisfied = true;
      have_satisfied = true;
    }
  }
  if (!have_satisfied) {
    res.p0 = 1.0;
    res.bracket_width = 0.0;
    res.verified = margin(1.0 - 1e-6) > tol;
    return res;
  }
  double lo = last_violated, hi = first_satisfied;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) > tol)
      lo = mid;
    else
      hi = mid;
  }
  res.p0 = 0.5 * (lo + hi);
  res.bracket_width = std::max(hi - lo, 1e-10);
  const double eps = std::max(2.0 * res.bracket_width, 1e-6);
  const bool below_ok = res.p0 - eps <= 0.0 || margin(res.p0 - eps) > tol;
  const bool above_ok = res.p0 + eps >= 1.0 || margin(res.p0 + eps) <= tol;
  res.verified = below_ok && above_ok;
  return res;
}

// Closed-form white-noise threshold for states whose anti-diagonal pair
// diagonals are equal (rho_jj = rho_jbar,jbar); then every product square
// root is linear in p and the threshold equations collapse to linear ones.
inline bool flip_symmetric_diagonal(const DensityMatrix& rho, double tol) {
  const std::size_t d = rho.dim();
  for (std::size_t j = 1; j <= d / 2; ++j)
    if (std::abs(rho.diagonal(j) - rho.diagonal(d + 1 - j)) > tol)
      return false;
  return true;
}

inline double closed_white_full(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  const std::size_t pairs = d / 2;
  double best = 0.0;
  for (std::size_t l = 1; l <= pairs; ++l) {
    const double a = std::abs(rho.antidiagonal(l));
    double s = 0.0;
    for (std::size_t j = 1; j <= pairs; ++j)
      if (j != l) s += rho.diagonal(j);
    if (a <= s) continue;
    const double c = double(pairs - 1) / double(d);
    best = std::max(best, (a - s) / ((a - s) + c));
  }
  return best;
}

inline double closed_white_some(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  double a = 0.0;
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= d / 2; ++j) {
    a = std::max(a, std::abs(rho.antidiagonal(j)));
    r = std::min(r, rho.diagonal(j));
  }
  if (a <= r) return 0.0;
  return (a - r) / ((a - r) + 1.0 / double(d));
}

}  // namespace detail

// White-noise robustness of one criterion family for a given state.
inline ThresholdResult threshold_white(const DensityMatrix& rho,
                                       CriterionFamily family,
                                       double tol = kDefaultTol) {
  auto margin = [&](double p) {
    return criterion_margin(apply_channel(rho, {NoiseKind::white, p}), family,
                            tol);
  };
  // Closed form first, verified against the true margin; fall back otherwise.
  if (family != CriterionFamily::all_splits &&
      detail::flip_symmetric_diagonal(rho, tol)) {
    const double p0 = family == CriterionFamily::full_entanglement
                          ? detail::closed_white_full(rho)
                          : detail::closed_white_some(rho);
    const double eps = 1e-6;
    const bool below_ok = p0 - eps <= 0.0 || margin(p0 - eps) > 0.0;
    const bool above_ok = p0 + eps >= 1.0 || margin(p0 + eps) <= 0.0;
    if (below_ok && above_ok) {
      ThresholdResult res;
      res.channel = "white";
      res.criterion = to_string(family);
      res.p0 = p0;
      res.method = "closed-form";
      res.bracket_width = 0.0;
      res.never_violated = (p0 == 0.0);
      res.verified = true;
      return res;
    }
  }
  ThresholdResult res = detail::bisect_threshold(margin);
  res.channel = "white";
  res.criterion = to_string(family);
  return res;
}

// Robustness against a parameterized channel; the margin must be monotone
// in the channel strength (sampled at 64 points, error otherwise).
inline ThresholdResult threshold_channel(
    const std::function<DensityMatrix(double)>& state_at, NoiseKind kind,
    CriterionFamily family, double tol = kDefaultTol) {
  auto margin = [&](double p) {
    return criterion_margin(state_at(p), family, tol);
  };
  ThresholdResult res = detail::bisect_threshold(margin);
  res.channel = to_string(kind);
  res.criterion = to_string(family);
  return res;
}

// ---------------------------------------------------------------------------
// GHZ closed forms and the depolarization threshold equation.

inline double ghz_white_some_p0(int n) {
  return 1.0 / (1.0 + std::pow(2.0, 1 - n));
}
inline double ghz_white_full_p0(int n) {
  return 1.0 / (2.0 * (1.0 - std::pow(2.0, -n)));
}
inline double stabilizer_full_p0(int n) {
  return 1.0 / (3.0 - std::pow(2.0, 2 - n));
}
inline constexpr double stabilizer_some_p0() { return 2.0 / 3.0; }
inline double dur_bound_p0(int n) {
  const double t = std::pow(2.0, n);
  return t / (2.0 + 2.0 * n + t);
}

// (1-p)^N = (1-p/2)^alpha (p/2)^{N-alpha} + (1-p/2)^{N-alpha} (p/2)^alpha,
// the single-qubit depolarization threshold equation; alpha = floor(N/2)
// for the weakest diagonal pair (some entanglement), alpha = 1 for the
// strongest (inseparability under all splits).
inline double ghz_depolarize_equation_p0(int n, int alpha) {
  auto f = [&](double p) {
    const double a = 1.0 - 0.5 * p, b = 0.5 * p;
    return std::pow(1.0 - p, n) - (std::pow(a, alpha) * std::pow(b, n - alpha) +
                                   std::pow(a, n - alpha) * std::pow(b, alpha));
  };
  double lo = 0.0, hi = 1.0;  // f(0) = 1 > 0, f(1) <= 0
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Full (channel x criterion) threshold grid row for one qubit count.
struct GhzTableRow {
  int n_qubits;
  std::string channel;
  std::string criterion;
  double p0;
  std::string method;
};

inline std::vector<GhzTableRow> ghz_tables(int n_lo, int n_hi,
                                           double tol = kDefaultTol) {
  std::vector<GhzTableRow> rows;
  const std::vector<NoiseKind> kinds{NoiseKind::white, NoiseKind::colored,
                                     NoiseKind::depolarize, NoiseKind::dephase,
                                     NoiseKind::dissipate};
  const std::vector<CriterionFamily> fams{CriterionFamily::some_entanglement,
                                          CriterionFamily::all_splits,
                                          CriterionFamily::full_entanglement};
  for (int n = n_lo; n <= n_hi; ++n) {
    const DensityMatrix g = ghz(n).to_density(tol);
    for (const auto kind : kinds) {
      for (const auto fam : fams) {
        GhzTableRow row{n, to_string(kind), to_string(fam), 0.0, "bisection"};
        if (kind == NoiseKind::white) {
          row.p0 = fam == CriterionFamily::full_entanglement
                       ? ghz_white_full_p0(n)
                       : ghz_white_some_p0(n);
          row.method = "closed-form";
        } else if (kind == NoiseKind::depolarize &&
                   fam != CriterionFamily::full_entanglement) {
          const int alpha =
              fam == CriterionFamily::some_entanglement ? n / 2 : 1;
          row.p0 = ghz_depolarize_equation_p0(n, alpha);
          row.method = "equation";
        } else {
          auto at = [&](double p) {
            return apply_channel(g, {kind, p});
          };
          row.p0 = threshold_channel(at, kind, fam, tol).p0;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Figure data.

struct FigureRow {
  int n_qubits;
  std::vector<std::pair<std::string, double>> columns;
};

inline std::vector<FigureRow> figure_data(const std::string& which,
                                          int n_lo = 2, int n_hi = 8) {
  std::vector<FigureRow> rows;
  if (which == "lhv-gap") {
    // Maximum of <X_0>^2 + <Y_0>^2: entangled states reach 1, separable
    // states (1/4)^{N-1}, LHV models 2^{2-N} (from |<M>| <= 2).
    for (int n = n_lo; n <= n_hi; ++n) {
      FigureRow r{n,
                  {{"entangled_max", 1.0},
                   {"separable_max", std::pow(0.25, n - 1)},
                   {"lhv_max", std::pow(2.0, 2 - n)}}};
      rows.push_back(std::move(r));
    }
    return rows;
  }
  if (which == "ghz-noise") {
    for (int n = n_lo; n <= n_hi; ++n) {
      FigureRow r{n,
                  {{"p0_full", ghz_white_full_p0(n)},
                   {"p0_all_splits", ghz_white_some_p0(n)},
                   {"stabilizer_full", stabilizer_full_p0(n)},
                   {"stabilizer_some", stabilizer_some_p0()}}};
      rows.push_back(std::move(r));
    }
    return rows;
  }
  throw std::invalid_argument("unknown figure id: " + which);
}

// White-noise robustness of the full-separability condition for the bound
// entangled family; the closed form must agree with bisection.
inline ThresholdResult bound_state_robustness(int n_qubits,
                                              double tol = kDefaultTol) {
  if (n_qubits < 3)
    throw std::invalid_argument("bound_state_robustness: need N >= 3");
  const DensityMatrix rho = bound_dur_state(n_qubits, 0.0, tol);
  ThresholdResult res =
      threshold_white(rho, CriterionFamily::some_entanglement, tol);
  res.state_id = "bound_dur(n=" + std::to_string(n_qubits) + ")";
  const double closed = dur_bound_p0(n_qubits);
  if (std::abs(res.p0 - closed) > 1e-8)
    throw std::runtime_error(
        "bound_state_robustness: closed form and numeric threshold disagree");
  res.p0 = closed;
  res.method = "closed-form";
  return res;
}

}  // namespace entcert
