#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entcert/complex_matrix.hpp"
#include "entcert/density.hpp"
#include "entcert/splits.hpp"

namespace entcert {

inline ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
inline ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}
inline ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// A triple of orthogonal single-qubit spin observables. Orthogonality here
// means pairwise anticommutation; each member squares to the identity.
struct LocalTriple {
  ComplexMatrix x, y, z;

  LocalTriple() : x(sigma_x()), y(sigma_y()), z(sigma_z()) {}
  LocalTriple(ComplexMatrix x_, ComplexMatrix y_, ComplexMatrix z_)
      : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
    validate();
  }

  // +1 for the Pauli orientation, -1 when the triple is mirrored.
  double orientation() const {
    const double v = (x * y * z).trace().imag() / 2.0;
    return v >= 0.0 ? 1.0 : -1.0;
  }

  void validate(double tol = kAlgebraTol) const {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    const ComplexMatrix* ms[3] = {&x, &y, &z};
    for (const auto* m : ms) {
      if (m->rows() != 2 || m->cols() != 2)
        throw std::invalid_argument("local triple: observables must be 2x2");
      if (!m->is_hermitian(1e4 * tol))
        throw std::invalid_argument("local triple: observable not Hermitian");
      if (std::abs(m->trace()) > 1e4 * tol)
        throw std::invalid_argument("local triple: observable not traceless");
      if ((*m * *m).max_abs_diff(eye) > 1e4 * tol)
        throw std::invalid_argument(
            "local triple: observable does not square to identity");
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const ComplexMatrix anti = *ms[i] * *ms[j] + *ms[j] * *ms[i];
        if (anti.max_abs() > 1e4 * tol)
          throw std::invalid_argument("local triple: observables " +
                                      std::to_string(i) + "," +
                                      std::to_string(j) +
                                      " do not anticommute");
      }
    const double mag = std::abs((x * y * z).trace().imag() / 2.0);
    if (std::abs(mag - 1.0) > 1e4 * tol)
      throw std::invalid_argument("local triple: degenerate orientation");
  }
};

inline LocalTriple pauli_triple() { return LocalTriple(); }

struct OperatorQuad {
  ComplexMatrix x, y, z, i;
};

// The 2^{N-1} quadruples {X_x, Y_x, Z_x, I_x} built recursively from the
// single-qubit triples; qubit 0 is the first tensor factor.
class OperatorFamily {
 public:
  // Triples must all carry the Pauli orientation (+1); the solution-set
  // bookkeeping assumes it. `enforce_orientation = false` builds the family
  // anyway so check_family can diagnose a bad triple set.
  static OperatorFamily build(const std::vector<LocalTriple>& triples,
                              bool enforce_orientation = true) {
    if (triples.size() < 2)
      throw std::invalid_argument("operator family: need at least 2 qubits");
    for (const auto& t : triples) {
      t.validate();
      if (enforce_orientation && t.orientation() != 1.0)
        throw std::invalid_argument(
            "operator family: triple orientation differs from the Pauli "
            "orientation; identical (+1) orientation is required on every "
            "qubit");
    }
    OperatorFamily fam;
    fam.n_qubits_ = static_cast<int>(triples.size());
    // Base: the single-qubit quadruple of the last qubit.
    const auto& last = triples.back();
    std::vector<OperatorQuad> cur;
    cur.push_back({last.x, last.y, last.z, ComplexMatrix::identity(2)});
    for (int q = fam.n_qubits_ - 2; q >= 0; --q) {
      const auto& t = triples[q];
      const ComplexMatrix eye = ComplexMatrix::identity(2);
      std::vector<OperatorQuad> next(cur.size() * 2);
      for (std::size_t m = 0; m < cur.size(); ++m) {
        const auto& f = cur[m];
        const ComplexMatrix xX = kron(t.x, f.x), yY = kron(t.y, f.y);
        const ComplexMatrix yX = kron(t.y, f.x), xY = kron(t.x, f.y);
        const ComplexMatrix zI = kron(t.z, f.i), iZ = kron(eye, f.z);
        const ComplexMatrix iI = kron(eye, f.i), zZ = kron(t.z, f.z);
        next[2 * m].x = 0.5 * (xX - yY);
        next[2 * m + 1].x = 0.5 * (xX + yY);
        next[2 * m].y = 0.5 * (yX + xY);
        next[2 * m + 1].y = 0.5 * (yX - xY);
        next[2 * m].z = 0.5 * (zI + iZ);
        next[2 * m + 1].z = 0.5 * (zI - iZ);
        next[2 * m].i = 0.5 * (iI + zZ);
        next[2 * m + 1].i = 0.5 * (iI - zZ);
      }
      cur = std::move(next);
    }
    fam.quads_ = std::move(cur);
    return fam;
  }

  static OperatorFamily pauli(int n_qubits) {
    return build(std::vector<LocalTriple>(n_qubits));
  }

  int n_qubits() const { return n_qubits_; }
  int count() const { return static_cast<int>(quads_.size()); }
  const OperatorQuad& quad(int x) const { return quads_.at(x); }

 private:
  int n_qubits_ = 0;
  std::vector<OperatorQuad> quads_;
};

struct FamilyCheckReport {
  double max_anticommutator = 0.0;   // over all pairs of X_x, Y_x
  double max_square_defect = 0.0;    // |O^2 - I_x| for O in {X,Y,Z,I}_x
  double max_commutator_defect = 0.0;  // |[X_x,Y_x] - 2i Z_x|
  double max_spin_excess = 0.0;      // <X>^2+<Y>^2+<Z>^2 - <I>^2 on samples
  double max_pure_product_gap = 0.0;  // |equality defect| on pure products
  bool anticommutation_ok = false;
  bool squares_ok = false;
  bool commutator_ok = false;
  bool spin_identity_ok = false;
  bool all_ok() const {
    return anticommutation_ok && squares_ok && commutator_ok &&
           spin_identity_ok;
  }
};

namespace detail {

inline PureState random_product_state(int n_qubits, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> amps{1.0};
  for (int q = 0; q < n_qubits; ++q) {
    const double th = std::acos(1.0 - 2.0 * u(rng));
    const double ph = 2.0 * M_PI * u(rng);
    const cplx a0 = std::cos(th / 2.0);
    const cplx a1 = std::exp(cplx(0.0, ph)) * std::sin(th / 2.0);
    std::vector<cplx> next(amps.size() * 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * a0;
      next[2 * i + 1] = amps[i] * a1;
    }
    amps = std::move(next);
  }
  return PureState(n_qubits, std::move(amps));
}

inline DensityMatrix random_mixed_state(int n_qubits, std::mt19937_64& rng) {
  const std::size_t d = std::size_t{1} << n_qubits;
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix G(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) G(r, c) = cplx(g(rng), g(rng));
  ComplexMatrix rho = G * G.adjoint();
  rho *= cplx(1.0 / rho.trace().real(), 0.0);
  return DensityMatrix::trusted(std::move(rho), n_qubits, kDefaultTol);
}

}  // namespace detail

inline FamilyCheckReport check_family(const OperatorFamily& fam,
                                      int n_samples = 40,
                                      std::uint64_t seed = 12345,
                                      double tol = kDefaultTol) {
  FamilyCheckReport rep;
  const int cnt = fam.count();
  std::vector<const ComplexMatrix*> xy;
  for (int x = 0; x < cnt; ++x) {
    xy.push_back(&fam.quad(x).x);
    xy.push_back(&fam.quad(x).y);
  }
  for (std::size_t a = 0; a < xy.size(); ++a)
    for (std::size_t b = a + 1; b < xy.size(); ++b) {
      const ComplexMatrix anti = *xy[a] * *xy[b] + *xy[b] * *xy[a];
      rep.max_anticommutator = std::max(rep.max_anticommutator, anti.max_abs());
    }
  for (int x = 0; x < cnt; ++x) {
    const auto& q = fam.quad(x);
    for (const auto* o : {&q.x, &q.y, &q.z, &q.i}) {
      rep.max_square_defect =
          std::max(rep.max_square_defect, (*o * *o).max_abs_diff(q.i));
    }
    const ComplexMatrix comm =
        q.x * q.y - q.y * q.x - cplx(0.0, 2.0) * q.z;
    rep.max_commutator_defect =
        std::max(rep.max_commutator_defect, comm.max_abs());
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    const DensityMatrix rho = detail::random_mixed_state(fam.n_qubits(), rng);
    for (int x = 0; x < cnt; ++x) {
      const auto& q = fam.quad(x);
      const double ex = expectation(rho, q.x, tol);
      const double ey = expectation(rho, q.y, tol);
      const double ez = expectation(rho, q.z, tol);
      const double ei = expectation(rho, q.i, tol);
      rep.max_spin_excess = std::max(
          rep.max_spin_excess, ex * ex + ey * ey + ez * ez - ei * ei);
    }
    const DensityMatrix prod =
        detail::random_product_state(fam.n_qubits(), rng).to_density();
    for (int x = 0; x < cnt; ++x) {
      const auto& q = fam.quad(x);
      const double ex = expectation(prod, q.x, tol);
      const double ey = expectation(prod, q.y, tol);
      const double ez = expectation(prod, q.z, tol);
      const double ei = expectation(prod, q.i, tol);
      rep.max_pure_product_gap =
          std::max(rep.max_pure_product_gap,
                   std::abs(ex * ex + ey * ey + ez * ez - ei * ei));
    }
  }
  rep.anticommutation_ok = rep.max_anticommutator <= tol;
  rep.squares_ok = rep.max_square_defect <= tol;
  rep.commutator_ok = rep.max_commutator_defect <= tol;
  rep.spin_identity_ok = rep.max_spin_excess <= tol;
  return rep;
}

// Mermin operator pair (M, M') for the given triples; M' is M with every
// X and Y interchanged. Base case is the two-qubit CHSH operator.
inline std::pair<ComplexMatrix, ComplexMatrix> mermin_operator(
    const std::vector<LocalTriple>& triples) {
  const int n = static_cast<int>(triples.size());
  if (n < 2)
    throw std::invalid_argument("mermin_operator: need at least 2 qubits");
  const auto& a = triples[0];
  const auto& b = triples[1];
  ComplexMatrix m = kron(a.x, b.x) + kron(a.x, b.y) + kron(a.y, b.x) -
                    kron(a.y, b.y);
  ComplexMatrix mp = kron(a.y, b.y) + kron(a.y, b.x) + kron(a.x, b.y) -
                     kron(a.x, b.x);
  for (int q = 2; q < n; ++q) {
    const auto& t = triples[q];
    const ComplexMatrix xpy = t.x + t.y;
    const ComplexMatrix xmy = t.x - t.y;
    ComplexMatrix m2 = 0.5 * kron(m, xpy) + 0.5 * kron(mp, xmy);
    ComplexMatrix mp2 = 0.5 * kron(mp, xpy) - 0.5 * kron(m, xmy);
    m = std::move(m2);
    mp = std::move(mp2);
  }
  return {m, mp};
}

inline std::pair<ComplexMatrix, ComplexMatrix> mermin_operator(int n_qubits) {
  return mermin_operator(std::vector<LocalTriple>(n_qubits));
}

// One local measurement setting: a product of single-qubit observables.
struct MeasurementSetting {
  std::string label;
  std::vector<ComplexMatrix> locals;
  ComplexMatrix product;

  static MeasurementSetting from_locals(std::string label,
                                        std::vector<ComplexMatrix> locals) {
    MeasurementSetting s;
    s.label = std::move(label);
    s.product = ComplexMatrix::identity(1);
    for (const auto& l : locals) s.product = kron(s.product, l);
    s.locals = std::move(locals);
    return s;
  }

  // Bloch angles (theta, phi) of each local observable n.sigma.
  std::vector<std::pair<double, double>> bloch_angles() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& l : locals) {
      const double nz = l(0, 0).real();
      const double nx = l(0, 1).real();
      const double ny = -l(0, 1).imag();
      const double theta = std::acos(std::clamp(nz, -1.0, 1.0));
      const double phi = (nx == 0.0 && ny == 0.0) ? 0.0 : std::atan2(ny, nx);
      out.emplace_back(theta, phi);
    }
    return out;
  }
};

// Settings M_l = (cos(l pi/N) sx + sin(l pi/N) sy)^(x)N for the real part of
// the far anti-diagonal element; the phase-shifted family covers the
// imaginary part.
inline MeasurementSetting settings_real(int n_qubits, int l) {
  if (l < 1 || l > n_qubits)
    throw std::invalid_argument("settings_real: l out of range");
  const double ang = double(l) * M_PI / double(n_qubits);
  const ComplexMatrix m = std::cos(ang) * sigma_x() + std::sin(ang) * sigma_y();
  return MeasurementSetting::from_locals(
      "M_" + std::to_string(l),
      std::vector<ComplexMatrix>(std::size_t(n_qubits), m));
}

inline MeasurementSetting settings_imag(int n_qubits, int l) {
  if (l < 1 || l > n_qubits)
    throw std::invalid_argument("settings_imag: l out of range");
  const double ang = (double(l) * M_PI + M_PI / 2.0) / double(n_qubits);
  const ComplexMatrix m = std::cos(ang) * sigma_x() + std::sin(ang) * sigma_y();
  return MeasurementSetting::from_locals(
      "Mt_" + std::to_string(l),
      std::vector<ComplexMatrix>(std::size_t(n_qubits), m));
}

// Conjugate a setting by U_j = prod sigma_{bit} with sigma_1 = sigma_x on
// the bits of j-1 (j is the 1-based row index of the target element); the
// rotated settings determine |rho_{j,jbar}|.
inline MeasurementSetting rotate_setting(const MeasurementSetting& s,
                                         std::size_t j) {
  const int n = static_cast<int>(s.locals.size());
  if (j < 1 || j > (std::size_t{1} << n))
    throw std::invalid_argument("rotate_setting: row index out of range");
  const std::uint32_t bits = std::uint32_t(j - 1);
  const ComplexMatrix sx = sigma_x();
  std::vector<ComplexMatrix> locals;
  for (int q = 0; q < n; ++q) {
    if (bits & qubit_bit(n, q))
      locals.push_back(sx * s.locals[q] * sx);
    else
      locals.push_back(s.locals[q]);
  }
  auto out = MeasurementSetting::from_locals(
      s.label + "@row" + std::to_string(j), std::move(locals));
  return out;
}

enum class StateProfile {
  real_antidiagonal,   // target elements all real: N+1 settings
  imag_antidiagonal,   // all imaginary: N+1
  general_single,      // one general complex element: 2N+1
  state_independent,   // every criterion, no target: 2^N+1
};

inline int settings_count(int n_qubits, StateProfile profile) {
  switch (profile) {
    case StateProfile::real_antidiagonal:
    case StateProfile::imag_antidiagonal:
      return n_qubits + 1;
    case StateProfile::general_single:
      return 2 * n_qubits + 1;
    case StateProfile::state_independent:
      return (1 << n_qubits) + 1;
  }
  throw std::logic_error("settings_count: bad profile");
}

}  // namespace entcert
