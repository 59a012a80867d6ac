#include "catch_amalgamated.hpp"

#include "test_helpers.hpp"

using namespace entcert;
using Catch::Approx;

TEST_CASE("pauli triple basics", "[observables]") {
  const LocalTriple t = pauli_triple();
  REQUIRE_NOTHROW(t.validate());
  REQUIRE((t.x * t.y + t.y * t.x).max_abs() < 1e-15);
  REQUIRE((t.x * t.y).max_abs_diff(cplx(0.0, 1.0) * t.z) < 1e-15);
  REQUIRE(t.orientation() == 1.0);
  const LocalTriple flipped(t.x, cplx(-1.0, 0.0) * t.y, t.z);
  REQUIRE(flipped.orientation() == -1.0);
}

TEST_CASE("family base case matches the two-qubit definitions",
          "[observables]") {
  const auto fam = OperatorFamily::pauli(2);
  REQUIRE(fam.count() == 2);
  // X_0 = |00><11| + |11><00|
  ComplexMatrix x0(4, 4);
  x0(0, 3) = 1.0;
  x0(3, 0) = 1.0;
  REQUIRE(fam.quad(0).x.max_abs_diff(x0) < 1e-15);
  // direct recursion definitions
  const ComplexMatrix sx = sigma_x(), sy = sigma_y(), sz = sigma_z();
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  REQUIRE(fam.quad(1).x.max_abs_diff(0.5 * (kron(sx, sx) + kron(sy, sy))) <
          1e-15);
  REQUIRE(fam.quad(0).y.max_abs_diff(0.5 * (kron(sy, sx) + kron(sx, sy))) <
          1e-15);
  REQUIRE(fam.quad(1).z.max_abs_diff(0.5 * (kron(sz, eye) - kron(eye, sz))) <
          1e-15);
  REQUIRE(fam.quad(0).i.max_abs_diff(0.5 * (kron(eye, eye) + kron(sz, sz))) <
          1e-15);
}

TEST_CASE("family operators live on their anti-diagonal pair",
          "[observables]") {
  for (int n = 2; n <= 6; ++n) {
    const auto fam = OperatorFamily::pauli(n);
    const std::size_t d = std::size_t{1} << n;
    for (int x = 0; x < fam.count(); ++x) {
      const std::uint32_t b = antidiag_bits(n, x);
      const std::uint32_t bb = std::uint32_t(d - 1) ^ b;
      const auto& q = fam.quad(x);
      // X_x = |b><bb| + |bb><b|, Y_x = -i|b><bb| + i|bb><b|
      ComplexMatrix ex(d, d), ey(d, d), ez(d, d), ei(d, d);
      ex(b, bb) = 1.0;
      ex(bb, b) = 1.0;
      ey(b, bb) = cplx(0.0, -1.0);
      ey(bb, b) = cplx(0.0, 1.0);
      ez(b, b) = 1.0;
      ez(bb, bb) = -1.0;
      ei(b, b) = 1.0;
      ei(bb, bb) = 1.0;
      REQUIRE(q.x.max_abs_diff(ex) < 1e-14);
      REQUIRE(q.y.max_abs_diff(ey) < 1e-14);
      REQUIRE(q.z.max_abs_diff(ez) < 1e-14);
      REQUIRE(q.i.max_abs_diff(ei) < 1e-14);
    }
  }
}

TEST_CASE("I_0 is the corner projector pair for any N", "[observables]") {
  for (int n : {2, 3, 5}) {
    const auto fam = OperatorFamily::pauli(n);
    const std::size_t d = std::size_t{1} << n;
    ComplexMatrix expect(d, d);
    expect(0, 0) = 1.0;
    expect(d - 1, d - 1) = 1.0;
    REQUIRE(fam.quad(0).i.max_abs_diff(expect) < 1e-15);
  }
}

TEST_CASE("check_family passes for Pauli families", "[observables]") {
  for (int n = 2; n <= 5; ++n) {
    const auto rep = check_family(OperatorFamily::pauli(n), 10, 99 + n);
    INFO("n=" << n);
    REQUIRE(rep.all_ok());
    REQUIRE(rep.max_anticommutator < 1e-12);
    REQUIRE(rep.max_square_defect < 1e-12);
    REQUIRE(rep.max_commutator_defect < 1e-12);
    // pure product states saturate the spin identity
    REQUIRE(rep.max_pure_product_gap < 1e-10);
  }
}

TEST_CASE("flipped orientation breaks the commutator but not anticommutation",
          "[observables]") {
  const LocalTriple t;
  const LocalTriple flipped(t.x, cplx(-1.0, 0.0) * t.y, t.z);
  REQUIRE_THROWS_AS(OperatorFamily::build({t, flipped}),
                    std::invalid_argument);
  const auto fam = OperatorFamily::build({t, flipped}, false);
  const auto rep = check_family(fam, 5, 4);
  REQUIRE(rep.anticommutation_ok);
  REQUIRE_FALSE(rep.commutator_ok);
  REQUIRE_FALSE(rep.all_ok());
}

TEST_CASE("mermin operators for two and three qubits", "[observables]") {
  const ComplexMatrix sx = sigma_x(), sy = sigma_y();
  const auto [m2, m2p] = mermin_operator(2);
  const ComplexMatrix chsh = kron(sx, sx) + kron(sx, sy) + kron(sy, sx) -
                             kron(sy, sy);
  REQUIRE(m2.max_abs_diff(chsh) < 1e-15);

  const auto [m3, m3p] = mermin_operator(3);
  auto k3 = [&](const ComplexMatrix& a, const ComplexMatrix& b,
                const ComplexMatrix& c) { return kron(a, kron(b, c)); };
  const ComplexMatrix expected = k3(sx, sx, sy) + k3(sy, sx, sx) +
                                 k3(sx, sy, sx) - k3(sy, sy, sy);
  REQUIRE(m3.max_abs_diff(expected) < 1e-15);
  // M' is M with X and Y interchanged
  const ComplexMatrix expectedp = k3(sy, sy, sx) + k3(sx, sy, sy) +
                                  k3(sy, sx, sy) - k3(sx, sx, sx);
  REQUIRE(m3p.max_abs_diff(expectedp) < 1e-15);
}

TEST_CASE("mermin recursion matches the direct term expansion for N=4",
          "[observables]") {
  // Direct: expand 1/2 M3 (X+Y) + 1/2 M3' (X-Y) term by term.
  const ComplexMatrix sx = sigma_x(), sy = sigma_y();
  const auto [m3, m3p] = mermin_operator(3);
  const ComplexMatrix direct =
      0.5 * kron(m3, sx + sy) + 0.5 * kron(m3p, sx - sy);
  const auto [m4, m4p] = mermin_operator(4);
  REQUIRE(m4.max_abs_diff(direct) < 1e-14);
}

TEST_CASE("mermin identity 2^{N+1}(X0^2+Y0^2) = <M>^2 + <M'>^2",
          "[observables]") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 6; ++n) {
    const auto [m, mp] = mermin_operator(n);
    const auto fam = OperatorFamily::pauli(n);
    for (int trial = 0; trial < 25; ++trial) {
      const auto rho = testutil::random_mixed(n, rng);
      const double ex = expectation(rho, fam.quad(0).x);
      const double ey = expectation(rho, fam.quad(0).y);
      const double lhs = std::pow(2.0, n + 1) * (ex * ex + ey * ey);
      const double em = expectation(rho, m);
      const double emp = expectation(rho, mp);
      REQUIRE(lhs == Approx(em * em + emp * emp).margin(1e-9));
    }
  }
}

TEST_CASE("settings sum identities", "[observables]") {
  for (int n = 2; n <= 6; ++n) {
    const auto fam = OperatorFamily::pauli(n);
    const std::size_t d = std::size_t{1} << n;
    ComplexMatrix sum_real(d, d), sum_imag(d, d);
    for (int l = 1; l <= n; ++l) {
      const double sign = (l % 2 == 0) ? 1.0 : -1.0;
      sum_real += cplx(sign, 0.0) * settings_real(n, l).product;
      sum_imag += cplx(sign, 0.0) * settings_imag(n, l).product;
    }
    REQUIRE(sum_real.max_abs_diff(cplx(double(n), 0.0) * fam.quad(0).x) <
            1e-10);
    REQUIRE(sum_imag.max_abs_diff(cplx(double(n), 0.0) * fam.quad(0).y) <
            1e-10);
  }
}

TEST_CASE("single-qubit setting edge case", "[observables]") {
  const auto s = settings_real(1, 1);
  REQUIRE(s.product.max_abs_diff(cplx(-1.0, 0.0) * sigma_x()) < 1e-15);
  REQUIRE_THROWS_AS(settings_real(3, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(settings_real(3, 0), std::invalid_argument);
}

TEST_CASE("rotate_setting conjugates by sigma_x on the row bits",
          "[observables]") {
  const auto base = settings_real(4, 2);
  // j=1 is the identity rotation
  const auto id = rotate_setting(base, 1);
  REQUIRE(id.product.max_abs_diff(base.product) < 1e-15);
  // row 5 has bit pattern 0100: sigma_x on qubit 1 only
  const auto r5 = rotate_setting(base, 5);
  const ComplexMatrix sx = sigma_x();
  ComplexMatrix u = kron(kron(ComplexMatrix::identity(2), sx),
                         ComplexMatrix::identity(4));
  REQUIRE(r5.product.max_abs_diff(u * base.product * u.adjoint()) < 1e-14);
  REQUIRE_THROWS_AS(rotate_setting(base, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(rotate_setting(base, 17), std::invalid_argument);
}

TEST_CASE("rotated settings determine the targeted element", "[observables]") {
  // Summing the rotated settings gives the conjugated X_0, so the rotated
  // plan measures |rho_{j,jbar}|.
  const int n = 3;
  const std::size_t row = 3;  // bits 010
  const auto fam = OperatorFamily::pauli(n);
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix sum(d, d);
  for (int l = 1; l <= n; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    sum += cplx(sign, 0.0) * rotate_setting(settings_real(n, l), row).product;
  }
  const std::uint32_t bits = row - 1;
  ComplexMatrix u = ComplexMatrix::identity(1);
  for (int q = 0; q < n; ++q)
    u = kron(u, (bits & qubit_bit(n, q)) ? sigma_x()
                                         : ComplexMatrix::identity(2));
  const ComplexMatrix expect =
      cplx(double(n), 0.0) * (u * fam.quad(0).x * u.adjoint());
  REQUIRE(sum.max_abs_diff(expect) < 1e-10);
}

TEST_CASE("spin identity holds on a thousand random states per width",
          "[observables]") {
  // <X_x>^2 + <Y_x>^2 + <Z_x>^2 <= <I_x>^2 for every x; matrix-element
  // reads are exact for the Pauli family, so the sweep stays cheap.
  std::mt19937_64 rng(23);
  for (int n = 2; n <= 5; ++n) {
    double worst = -1.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto rho = testutil::random_mixed(n, rng);
      const auto e = AntidiagExpectations::from_matrix_elements(rho);
      for (int x = 0; x < e.count(); ++x) {
        const auto& q = e.at(x);
        worst = std::max(worst, q.ex * q.ex + q.ey * q.ey + q.ez * q.ez -
                                    q.ei * q.ei);
      }
    }
    REQUIRE(worst <= 1e-12);
  }
}

TEST_CASE("setting count per profile", "[observables]") {
  REQUIRE(settings_count(4, StateProfile::real_antidiagonal) == 5);
  REQUIRE(settings_count(4, StateProfile::imag_antidiagonal) == 5);
  REQUIRE(settings_count(4, StateProfile::general_single) == 9);
  REQUIRE(settings_count(4, StateProfile::state_independent) == 17);
}

TEST_CASE("bloch angles recover the setting observables", "[observables]") {
  const auto s = settings_real(3, 1);
  for (const auto& [theta, phi] : s.bloch_angles()) {
    REQUIRE(theta == Approx(M_PI / 2.0));
    REQUIRE(phi == Approx(M_PI / 3.0));
  }
}
