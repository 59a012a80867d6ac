#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "entcert/complex_matrix.hpp"
#include "entcert/density.hpp"
#include "entcert/observables.hpp"

namespace entcert {

// (|0...0> + e^{i alpha} |1...1>)/sqrt(2)
inline PureState ghz(int n_qubits, double alpha = 0.0) {
  if (n_qubits < 2) throw std::invalid_argument("ghz: need at least 2 qubits");
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<cplx> a(d, 0.0);
  a[0] = 1.0 / std::sqrt(2.0);
  a[d - 1] = std::exp(cplx(0.0, alpha)) / std::sqrt(2.0);
  return PureState(n_qubits, std::move(a));
}

// GHZ-basis state |psi_j^pm> = (|j 0> pm |j' 1>)/sqrt(2), j an (N-1)-bit
// string and j' its bitwise flip.
inline PureState ghz_basis(int n_qubits, std::uint32_t j, int sign) {
  const std::uint32_t half = std::uint32_t{1} << (n_qubits - 1);
  if (j >= half) throw std::invalid_argument("ghz_basis: j out of range");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("ghz_basis: sign must be +1 or -1");
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<cplx> a(d, 0.0);
  const std::size_t top = std::size_t(j) << 1;              // |j 0>
  const std::size_t bot = (std::size_t((half - 1) ^ j) << 1) | 1;  // |j' 1>
  a[top] = 1.0 / std::sqrt(2.0);
  a[bot] = sign / std::sqrt(2.0);
  return PureState(n_qubits, std::move(a));
}

// Diagonal member of the GHZ-basis family: weights lambda0^pm on
// |psi_0^pm| and lambda_j on the pair |psi_j^pm| for j = 1..2^{N-1}-1.
struct GHZDiagonalState {
  int n_qubits = 0;
  double lambda0_plus = 0.0;
  double lambda0_minus = 0.0;
  std::vector<double> lambda;  // index j-1 for j = 1..2^{N-1}-1

  double normalization_defect() const {
    double s = lambda0_plus + lambda0_minus;
    for (double l : lambda) s += 2.0 * l;
    return s - 1.0;
  }

  void validate(double tol = kDefaultTol) const {
    if (static_cast<int>(lambda.size()) != (1 << (n_qubits - 1)) - 1)
      throw std::invalid_argument("ghz-diagonal state: wrong lambda count");
    if (lambda0_plus < -tol || lambda0_minus < -tol)
      throw std::invalid_argument("ghz-diagonal state: negative weight");
    for (double l : lambda)
      if (l < -tol)
        throw std::invalid_argument("ghz-diagonal state: negative weight");
    if (std::abs(normalization_defect()) > tol)
      throw std::invalid_argument("ghz-diagonal state: weights do not sum to 1");
  }

  DensityMatrix to_density(double tol = kDefaultTol) const {
    validate(tol);
    const std::size_t d = std::size_t{1} << n_qubits;
    ComplexMatrix m(d, d);
    auto add_projector = [&](const PureState& s, double w) {
      if (w == 0.0) return;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          m(r, c) += w * s.amplitudes[r] * std::conj(s.amplitudes[c]);
    };
    add_projector(ghz_basis(n_qubits, 0, +1), lambda0_plus);
    add_projector(ghz_basis(n_qubits, 0, -1), lambda0_minus);
    for (std::uint32_t j = 1; j < (std::uint32_t{1} << (n_qubits - 1)); ++j) {
      add_projector(ghz_basis(n_qubits, j, +1), lambda[j - 1]);
      add_projector(ghz_basis(n_qubits, j, -1), lambda[j - 1]);
    }
    return DensityMatrix::trusted(std::move(m), n_qubits, tol);
  }
};

// Projection of a state onto the GHZ-diagonal family; the weights are the
// quantities the depolarization protocol leaves untouched.
inline GHZDiagonalState dc_depolarize(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  GHZDiagonalState s;
  s.n_qubits = n;
  auto overlap = [&](const PureState& psi) {
    cplx v = 0.0;
    const std::size_t d = rho.dim();
    for (std::size_t r = 0; r < d; ++r) {
      if (psi.amplitudes[r] == cplx(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < d; ++c)
        v += std::conj(psi.amplitudes[r]) * rho.entry(r, c) * psi.amplitudes[c];
    }
    return v.real();
  };
  s.lambda0_plus = overlap(ghz_basis(n, 0, +1));
  s.lambda0_minus = overlap(ghz_basis(n, 0, -1));
  for (std::uint32_t j = 1; j < (std::uint32_t{1} << (n - 1)); ++j) {
    const double lp = overlap(ghz_basis(n, j, +1));
    const double lm = overlap(ghz_basis(n, j, -1));
    s.lambda.push_back(0.5 * (lp + lm));
  }
  return s;
}

// Symmetric Dicke state |l,N>: equal superposition of all weight-l strings.
inline PureState dicke_state(int n_qubits, int l) {
  if (l < 0 || l > n_qubits)
    throw std::invalid_argument("dicke_state: excitation count out of range");
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<cplx> a(d, 0.0);
  std::size_t count = 0;
  for (std::size_t b = 0; b < d; ++b)
    if (std::size_t(__builtin_popcountll(b)) == std::size_t(l)) {
      a[b] = 1.0;
      ++count;
    }
  for (auto& v : a) v /= std::sqrt(double(count));
  return PureState(n_qubits, std::move(a));
}

namespace detail {

inline ComplexMatrix bell_projector(int which) {
  // 0: phi+, 1: phi-, 2: psi+, 3: psi-
  std::vector<cplx> v(4, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 0: v[0] = r; v[3] = r; break;
    case 1: v[0] = r; v[3] = -r; break;
    case 2: v[1] = r; v[2] = r; break;
    case 3: v[1] = r; v[2] = -r; break;
    default: throw std::invalid_argument("bell_projector: bad index");
  }
  ComplexMatrix m(4, 4);
  for (int r2 = 0; r2 < 4; ++r2)
    for (int c = 0; c < 4; ++c) m(r2, c) = v[r2] * std::conj(v[c]);
  return m;
}

}  // namespace detail

// Four-qubit singlet (|0011> + |1100> - (|01>+|10>)(|01>+|10>)/2)/sqrt(3).
inline PureState four_singlet_state() {
  std::vector<cplx> a(16, 0.0);
  const double r = 1.0 / std::sqrt(3.0);
  a[0b0011] = r;
  a[0b1100] = r;
  for (std::size_t b : {0b0101u, 0b0110u, 0b1001u, 0b1010u}) a[b] = -0.5 * r;
  return PureState(4, std::move(a));
}

// Smolin state: equal mixture of the four Bell pairs placed on (ab) and (cd).
inline DensityMatrix smolin_state(double tol = kDefaultTol) {
  ComplexMatrix m(16, 16);
  for (int j = 0; j < 4; ++j) {
    const ComplexMatrix p = detail::bell_projector(j);
    m += 0.25 * kron(p, p);
  }
  return DensityMatrix::trusted(std::move(m), 4, tol);
}

// Bound entangled family: GHZ projector plus the flip-paired single
// excitation projectors, normalized by N+1. PPT for every single qubit.
inline DensityMatrix bound_dur_state(int n_qubits, double alpha = 0.0,
                                     double tol = kDefaultTol) {
  if (n_qubits < 3)
    throw std::invalid_argument("bound_dur_state: need at least 3 qubits");
  const std::size_t d = std::size_t{1} << n_qubits;
  const DensityMatrix g = ghz(n_qubits, alpha).to_density(tol);
  ComplexMatrix m = g.matrix();
  for (int l = 0; l < n_qubits; ++l) {
    const std::size_t idx = qubit_bit(n_qubits, l);
    const std::size_t idxb = (d - 1) ^ idx;
    m(idx, idx) += 0.5;
    m(idxb, idxb) += 0.5;
  }
  m *= cplx(1.0 / double(n_qubits + 1), 0.0);
  return DensityMatrix::trusted(std::move(m), n_qubits, tol);
}

// Three-qubit bound entangled state: GHZ/3 plus four flat diagonal terms.
inline DensityMatrix bound_3q_state(double tol = kDefaultTol) {
  ComplexMatrix m = ghz(3).to_density(tol).matrix();
  m *= cplx(1.0 / 3.0, 0.0);
  for (std::size_t b : {0b001u, 0b010u, 0b101u, 0b110u}) m(b, b) += 1.0 / 6.0;
  return DensityMatrix::trusted(std::move(m), 3, tol);
}

// GHZ-like |theta> = cos(theta)|0...0> + sin(theta)|1...1>.
inline PureState theta_state(int n_qubits, double theta) {
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<cplx> a(d, 0.0);
  a[0] = std::cos(theta);
  a[d - 1] = std::sin(theta);
  return PureState(n_qubits, std::move(a));
}

// rho'_N: lambda0^pm on |psi_0^pm> plus lambda_j on the unnormalized sums
// (|psi_j^+> + |psi_j^->), which collapse onto |j 0>.
inline DensityMatrix rho_prime_state(int n_qubits, double lambda0_plus,
                                     double lambda0_minus,
                                     const std::vector<double>& lambda,
                                     double tol = kDefaultTol) {
  const std::uint32_t half = std::uint32_t{1} << (n_qubits - 1);
  if (lambda.size() != std::size_t(half - 1))
    throw std::invalid_argument("rho_prime_state: wrong lambda count");
  const std::size_t d = std::size_t{1} << n_qubits;
  ComplexMatrix m(d, d);
  auto add = [&](const std::vector<cplx>& v, double w) {
    if (w == 0.0) return;
    for (std::size_t r = 0; r < d; ++r) {
      if (v[r] == cplx(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < d; ++c)
        m(r, c) += w * v[r] * std::conj(v[c]);
    }
  };
  add(ghz_basis(n_qubits, 0, +1).amplitudes, lambda0_plus);
  add(ghz_basis(n_qubits, 0, -1).amplitudes, lambda0_minus);
  for (std::uint32_t j = 1; j < half; ++j) {
    const auto p = ghz_basis(n_qubits, j, +1).amplitudes;
    const auto q = ghz_basis(n_qubits, j, -1).amplitudes;
    std::vector<cplx> sum(d);
    for (std::size_t i = 0; i < d; ++i) sum[i] = p[i] + q[i];
    add(sum, lambda[j - 1]);
  }
  return DensityMatrix::trusted(std::move(m), n_qubits, tol);
}

// A pair of GHZ-diagonal three-qubit states, each separable under exactly
// one bipartite split, and their mixture alpha rho3_i + (1-alpha) rho3_ii
// (inseparable under every split yet biseparable by construction).
inline GHZDiagonalState rho3_i() {
  GHZDiagonalState s;
  s.n_qubits = 3;
  s.lambda0_plus = 0.5;
  s.lambda0_minus = 0.0;
  s.lambda = {0.0, 0.25, 0.0};  // lambda_01, lambda_10, lambda_11
  return s;
}

inline GHZDiagonalState rho3_ii() {
  GHZDiagonalState s;
  s.n_qubits = 3;
  s.lambda0_plus = 0.5;
  s.lambda0_minus = 0.0;
  s.lambda = {0.0, 0.0, 0.25};
  return s;
}

inline DensityMatrix rho3_mix(double alpha, double tol = kDefaultTol) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("rho3_mix: alpha out of [0,1]");
  GHZDiagonalState s;
  s.n_qubits = 3;
  s.lambda0_plus = 0.5;
  s.lambda0_minus = 0.0;
  s.lambda = {0.0, alpha * 0.25, (1.0 - alpha) * 0.25};
  return s.to_density(tol);
}

inline DensityMatrix white_noise_state(int n_qubits,
                                       double tol = kDefaultTol) {
  const std::size_t d = std::size_t{1} << n_qubits;
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0 / double(d);
  return DensityMatrix::trusted(std::move(m), n_qubits, tol);
}

enum class NoiseKind { white, colored, depolarize, dephase, dissipate };

struct NoiseChannel {
  NoiseKind kind;
  double p = 0.0;
};

inline NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "white") return NoiseKind::white;
  if (s == "colored") return NoiseKind::colored;
  if (s == "depolarize" || s == "depol") return NoiseKind::depolarize;
  if (s == "dephase") return NoiseKind::dephase;
  if (s == "dissipate" || s == "dissip") return NoiseKind::dissipate;
  throw std::invalid_argument("unknown noise kind: " + s);
}

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::white: return "white";
    case NoiseKind::colored: return "colored";
    case NoiseKind::depolarize: return "depolarize";
    case NoiseKind::dephase: return "dephase";
    case NoiseKind::dissipate: return "dissipate";
  }
  return "?";
}

namespace detail {

// Apply a single-qubit Kraus map to one qubit without forming full kron
// products: sum_K (K_q rho K_q^dagger) acting on the target bit.
inline ComplexMatrix apply_single_qubit_kraus(
    const ComplexMatrix& rho, int n_qubits, int qubit,
    const std::vector<ComplexMatrix>& kraus) {
  const std::size_t d = rho.rows();
  const std::size_t bit = qubit_bit(n_qubits, qubit);
  ComplexMatrix out(d, d);
  for (const auto& K : kraus) {
    // rows: r' = r with target bit a', source bit a; K(a', a)
    for (std::size_t r = 0; r < d; ++r) {
      const int ra = (r & bit) ? 1 : 0;
      for (std::size_t c = 0; c < d; ++c) {
        const int ca = (c & bit) ? 1 : 0;
        cplx acc = 0.0;
        for (int sa = 0; sa < 2; ++sa) {
          const cplx kr = K(ra, sa);
          if (kr == cplx(0.0, 0.0)) continue;
          const std::size_t rs = sa ? (r | bit) : (r & ~bit);
          for (int sc = 0; sc < 2; ++sc) {
            const cplx kc = K(ca, sc);
            if (kc == cplx(0.0, 0.0)) continue;
            const std::size_t cs = sc ? (c | bit) : (c & ~bit);
            acc += kr * std::conj(kc) * rho(rs, cs);
          }
        }
        out(r, c) += acc;
      }
    }
  }
  return out;
}

// Kraus strength calibrated so a GHZ input reproduces the closed-form
// decohered matrices exactly (diagonal mixing (1-p/2, p/2), coherence
// factor (1-p)^N); on other inputs this is the standard depolarizing
// channel with the same per-qubit degree.
inline std::vector<ComplexMatrix> depolarize_kraus(double p) {
  std::vector<ComplexMatrix> ks;
  ks.push_back(std::sqrt(1.0 - 0.75 * p) * ComplexMatrix::identity(2));
  ks.push_back(std::sqrt(0.25 * p) * sigma_x());
  ks.push_back(std::sqrt(0.25 * p) * sigma_y());
  ks.push_back(std::sqrt(0.25 * p) * sigma_z());
  return ks;
}

inline std::vector<ComplexMatrix> dephase_kraus(double p) {
  // Projector pair with weight p: coherences scale by exactly (1-p).
  std::vector<ComplexMatrix> ks;
  ks.push_back(std::sqrt(1.0 - p) * ComplexMatrix::identity(2));
  ComplexMatrix p0(2, 2), p1(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  ks.push_back(std::sqrt(p) * p0);
  ks.push_back(std::sqrt(p) * p1);
  return ks;
}

inline std::vector<ComplexMatrix> dissipate_kraus(double p) {
  // Amplitude damping toward |0>: coherences scale by (1-p)^{1/2}.
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  k1(0, 1) = std::sqrt(p);
  std::vector<ComplexMatrix> ks{k0, k1};
  return ks;
}

}  // namespace detail

inline DensityMatrix apply_channel(const DensityMatrix& rho,
                                   const NoiseChannel& ch) {
  if (ch.p < 0.0 || ch.p > 1.0)
    throw std::invalid_argument("apply_channel: strength p out of [0,1]");
  const int n = rho.n_qubits();
  const std::size_t d = rho.dim();
  switch (ch.kind) {
    case NoiseKind::white: {
      ComplexMatrix m = rho.matrix();
      m *= cplx(1.0 - ch.p, 0.0);
      for (std::size_t i = 0; i < d; ++i) m(i, i) += ch.p / double(d);
      return DensityMatrix::trusted(std::move(m), n, rho.tol());
    }
    case NoiseKind::colored: {
      ComplexMatrix m = rho.matrix();
      m *= cplx(1.0 - ch.p, 0.0);
      m(0, 0) += 0.5 * ch.p;
      m(d - 1, d - 1) += 0.5 * ch.p;
      return DensityMatrix::trusted(std::move(m), n, rho.tol());
    }
    case NoiseKind::depolarize:
    case NoiseKind::dephase:
    case NoiseKind::dissipate: {
      std::vector<ComplexMatrix> ks;
      if (ch.kind == NoiseKind::depolarize)
        ks = detail::depolarize_kraus(ch.p);
      else if (ch.kind == NoiseKind::dephase)
        ks = detail::dephase_kraus(ch.p);
      else
        ks = detail::dissipate_kraus(ch.p);
      ComplexMatrix m = rho.matrix();
      for (int q = 0; q < n; ++q)
        m = detail::apply_single_qubit_kraus(m, n, q, ks);
      return DensityMatrix::trusted(std::move(m), n, rho.tol());
    }
  }
  throw std::logic_error("apply_channel: bad kind");
}

// Conjugation by exp(-i angle sigma_x / 2) on every qubit.
inline DensityMatrix x_rotate_all(const DensityMatrix& rho, double angle) {
  ComplexMatrix u(2, 2);
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = cplx(0.0, -s);
  u(1, 0) = cplx(0.0, -s);
  ComplexMatrix U = ComplexMatrix::identity(1);
  for (int q = 0; q < rho.n_qubits(); ++q) U = kron(U, u);
  ComplexMatrix m = U * rho.matrix() * U.adjoint();
  return DensityMatrix::trusted(std::move(m), rho.n_qubits(), rho.tol());
}

// Named-state catalog used by the CLI. Unknown parameter keys are errors.
inline DensityMatrix named_state(const std::string& name,
                                 std::map<std::string, double> params,
                                 double tol = kDefaultTol) {
  auto take = [&](const std::string& key, double fallback,
                  bool required = false) {
    auto it = params.find(key);
    if (it == params.end()) {
      if (required)
        throw std::invalid_argument("named state '" + name +
                                    "' requires parameter " + key);
      return fallback;
    }
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto done = [&] {
    if (!params.empty())
      throw std::invalid_argument("named state '" + name +
                                  "': unknown parameter '" +
                                  params.begin()->first + "'");
  };

  if (name == "ghz") {
    const int n = int(take("n", 0, true));
    const double alpha = take("alpha", 0.0);
    done();
    return ghz(n, alpha).to_density(tol);
  }
  if (name == "w") {
    const int n = int(take("n", 0, true));
    done();
    return dicke_state(n, 1).to_density(tol);
  }
  if (name == "dicke") {
    const int n = int(take("n", 0, true));
    const int l = int(take("l", 0, true));
    const double rot = take("rotated", 0.0);
    done();
    DensityMatrix out = dicke_state(n, l).to_density(tol);
    if (rot != 0.0) out = x_rotate_all(out, M_PI / 2.0);
    return out;
  }
  if (name == "four_singlet") {
    done();
    return four_singlet_state().to_density(tol);
  }
  if (name == "smolin") {
    done();
    return smolin_state(tol);
  }
  if (name == "bound_dur") {
    const int n = int(take("n", 0, true));
    const double alpha = take("alpha", 0.0);
    done();
    return bound_dur_state(n, alpha, tol);
  }
  if (name == "bound_3q") {
    done();
    return bound_3q_state(tol);
  }
  if (name == "theta") {
    const int n = int(take("n", 0, true));
    const double th = take("theta", 0.0, true);
    done();
    return theta_state(n, th).to_density(tol);
  }
  if (name == "rho_prime") {
    const int n = int(take("n", 0, true));
    const double l0p = take("l0p", 0.0, true);
    const double l0m = take("l0m", 0.0, true);
    done();
    const int half = 1 << (n - 1);
    const double rest = 1.0 - l0p - l0m;
    if (rest < -tol)
      throw std::invalid_argument("rho_prime: weights exceed 1");
    std::vector<double> lam(std::size_t(half - 1),
                            std::max(rest, 0.0) / (2.0 * double(half - 1)));
    return rho_prime_state(n, l0p, l0m, lam, tol);
  }
  if (name == "rho3_mix") {
    const double alpha = take("alpha", 0.0, true);
    done();
    return rho3_mix(alpha, tol);
  }
  if (name == "white") {
    const int n = int(take("n", 0, true));
    done();
    return white_noise_state(n, tol);
  }
  throw std::invalid_argument("unknown named state: " + name);
}

}  // namespace entcert
