#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "entcert/complex_matrix.hpp"
#include "entcert/version.hpp"

namespace entcert {

// Basis convention: computational z-basis |00...0>, |00...1>, ..., |11...1>,
// qubit 0 is the most significant bit. Qubit q therefore lives on bit
// (N-1-q) of the basis index.
inline std::uint32_t qubit_bit(int n_qubits, int qubit) {
  return std::uint32_t{1} << (n_qubits - 1 - qubit);
}

class DensityMatrix {
 public:
  // Full validation: dimension, Hermiticity, unit trace, positivity.
  // Throws std::invalid_argument naming the failed invariant.
  static DensityMatrix validated(ComplexMatrix m, int n_qubits, double tol) {
    check_dims(m, n_qubits);
    if (!m.is_hermitian(tol))
      throw std::invalid_argument(
          "density matrix rejected: not Hermitian (defect " +
          std::to_string(m.hermiticity_defect()) + ")");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol)
      throw std::invalid_argument("density matrix rejected: trace " +
                                  std::to_string(tr) + " != 1");
    const auto ev = hermitian_eigenvalues(m, tol);
    if (ev.front() < -tol)
      throw std::invalid_argument(
          "density matrix rejected: negative eigenvalue " +
          std::to_string(ev.front()));
    return DensityMatrix(std::move(m), n_qubits, tol);
  }

  // Cheap construction for operators that preserve positivity by
  // construction (channels, unitary conjugation, convex mixing). Checks
  // everything except the eigenvalue sweep.
  static DensityMatrix trusted(ComplexMatrix m, int n_qubits, double tol) {
    check_dims(m, n_qubits);
    if (!m.is_hermitian(1e3 * tol))
      throw std::invalid_argument("density matrix rejected: not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > 1e3 * tol)
      throw std::invalid_argument("density matrix rejected: trace != 1");
    return DensityMatrix(std::move(m), n_qubits, tol);
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return m_.rows(); }
  double tol() const { return tol_; }
  const ComplexMatrix& matrix() const { return m_; }

  cplx entry(std::size_t r, std::size_t c) const { return m_(r, c); }
  // Anti-diagonal element rho_{j,jbar} with 1-based j, jbar = d+1-j.
  cplx antidiagonal(std::size_t j) const {
    return m_(j - 1, dim() - j);
  }
  double diagonal(std::size_t j) const { return m_(j - 1, j - 1).real(); }

 private:
  DensityMatrix(ComplexMatrix m, int n_qubits, double tol)
      : n_qubits_(n_qubits), m_(std::move(m)), tol_(tol) {}

  static void check_dims(const ComplexMatrix& m, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 12)
      throw std::invalid_argument("density matrix rejected: qubit count " +
                                  std::to_string(n_qubits) +
                                  " out of supported range");
    const std::size_t d = std::size_t{1} << n_qubits;
    if (m.rows() != d || m.cols() != d)
      throw std::invalid_argument(
          "density matrix rejected: dimension " + std::to_string(m.rows()) +
          "x" + std::to_string(m.cols()) + " != 2^" +
          std::to_string(n_qubits));
  }

  int n_qubits_;
  ComplexMatrix m_;
  double tol_;
};

inline DensityMatrix validate_density(const ComplexMatrix& m, int n_qubits,
                                      double tol = kDefaultTol) {
  return DensityMatrix::validated(m, n_qubits, tol);
}

struct PureState {
  int n_qubits = 0;
  std::vector<cplx> amplitudes;

  PureState() = default;
  PureState(int n, std::vector<cplx> a) : n_qubits(n), amplitudes(std::move(a)) {
    const std::size_t d = std::size_t{1} << n_qubits;
    if (amplitudes.size() != d)
      throw std::invalid_argument("pure state: wrong amplitude count");
    double norm2 = 0.0;
    for (const auto& v : amplitudes) norm2 += std::norm(v);
    if (std::abs(norm2 - 1.0) > kDefaultTol)
      throw std::invalid_argument("pure state: norm " + std::to_string(norm2) +
                                  " != 1");
  }

  DensityMatrix to_density(double tol = kDefaultTol) const {
    const std::size_t d = amplitudes.size();
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        m(r, c) = amplitudes[r] * std::conj(amplitudes[c]);
    return DensityMatrix::trusted(std::move(m), n_qubits, tol);
  }
};

// Re([Tr rho op]) with a check that the imaginary residue is noise.
inline double expectation(const DensityMatrix& rho, const ComplexMatrix& op,
                          double tol = kDefaultTol) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim())
    throw std::invalid_argument("expectation: operator dimension mismatch");
  if (!op.is_hermitian(tol))
    throw std::invalid_argument("expectation: operator not Hermitian");
  cplx t = 0.0;
  const std::size_t d = rho.dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) t += rho.entry(r, c) * op(c, r);
  if (std::abs(t.imag()) > 1e3 * tol)
    throw std::runtime_error("expectation: imaginary residue " +
                             std::to_string(t.imag()));
  return t.real();
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho,
                                       const std::vector<int>& subset) {
  const int n = rho.n_qubits();
  std::uint32_t mask = 0;
  for (int q : subset) {
    if (q < 0 || q >= n)
      throw std::invalid_argument("partial_transpose: qubit index " +
                                  std::to_string(q) + " out of range");
    mask |= qubit_bit(n, q);
  }
  const std::size_t d = rho.dim();
  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t rr = (r & ~mask) | (c & mask);
      const std::size_t cc = (c & ~mask) | (r & mask);
      out(rr, cc) = rho.entry(r, c);
    }
  return out;
}

inline bool is_ppt(const DensityMatrix& rho, const std::vector<int>& subset,
                   double tol = kDefaultTol) {
  const auto ev = hermitian_eigenvalues(partial_transpose(rho, subset), tol);
  return ev.front() >= -tol;
}

}  // namespace entcert
