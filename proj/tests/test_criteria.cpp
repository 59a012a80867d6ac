#include "catch_amalgamated.hpp"

#include "test_helpers.hpp"

using namespace entcert;
using Catch::Approx;

TEST_CASE("anti-diagonal condition on ghz and white noise", "[criteria]") {
  for (int n : {3, 5}) {
    const auto g = ghz(n).to_density();
    const auto v = lz_condition(g, 2);
    REQUIRE(v.lhs == Approx(0.5));
    REQUIRE(v.bound == Approx(0.25));
    REQUIRE(v.violated);
    REQUIRE_FALSE(lz_condition(white_noise_state(n), 2).violated);
  }
  // GHZ + white noise at level k = N flips exactly at (1-p)/2 = 2^{-N}
  const int n = 3;
  const double p0 = 1.0 - std::pow(2.0, 1 - n);
  const auto g = ghz(n).to_density();
  REQUIRE(lz_condition(testutil::mix_white(g, p0 - 0.01), n).violated);
  REQUIRE_FALSE(lz_condition(testutil::mix_white(g, p0 + 0.01), n).violated);
}

TEST_CASE("mermin quadratic equals the corner anti-diagonal verdict",
          "[criteria]") {
  std::mt19937_64 rng(41);
  for (int n = 2; n <= 4; ++n) {
    const std::vector<LocalTriple> triples((std::size_t(n)));
    for (int trial = 0; trial < 40; ++trial) {
      const auto rho = testutil::random_mixed(n, rng);
      for (int k : {2, n}) {
        const auto mq = mermin_quadratic(rho, k, triples);
        const bool corner =
            std::abs(rho.antidiagonal(1)) > std::pow(0.5, k) + kDefaultTol;
        REQUIRE(mq.violated == corner);
      }
    }
  }
}

TEST_CASE("ghz3 mermin values", "[criteria]") {
  const auto rho = ghz(3).to_density();
  const auto v = mermin_quadratic(rho, 2, std::vector<LocalTriple>(3));
  REQUIRE(v.lhs == Approx(16.0).margin(1e-10));
  REQUIRE(v.violated);  // 16 > 64/16 = 4
  // the linear form peaks on the alpha = pi/2 phase of the GHZ state
  const auto rot = ghz(3, M_PI / 2.0).to_density();
  const auto lin = mermin_linear(rot, 3, std::vector<LocalTriple>(3));
  REQUIRE(lin.lhs == Approx(4.0).margin(1e-10));
  REQUIRE(lin.bound == Approx(std::pow(2.0, 3.0) * std::pow(0.5, 3)));
  REQUIRE(mermin_linear(rho, 3, std::vector<LocalTriple>(3)).lhs ==
          Approx(0.0).margin(1e-12));
}

TEST_CASE("kappa-singleton splits bound the mermin operator", "[criteria]") {
  // A state separable under {1},...,{kappa},{rest} obeys
  // |<M>| <= 2^{(N-2 kappa+1)/2}.
  std::mt19937_64 rng(42);
  const int n = 4;
  const std::vector<LocalTriple> triples((std::size_t(n)));
  for (int kappa : {1, 2}) {
    const double bound = std::pow(2.0, 0.5 * (n - 2 * kappa + 1));
    for (int trial = 0; trial < 30; ++trial) {
      ComplexMatrix m = ComplexMatrix::identity(1);
      for (int q = 0; q < kappa; ++q)
        m = kron(m, testutil::random_mixed(1, rng).matrix());
      m = kron(m, testutil::random_mixed(n - kappa, rng).matrix());
      const auto rho = DensityMatrix::trusted(m, n, kDefaultTol);
      const auto v = mermin_linear(rho, kappa + 1, triples);
      REQUIRE(v.lhs <= bound + 1e-9);
    }
  }
}

TEST_CASE("fidelity criterion basics", "[criteria]") {
  const auto g = ghz(4).to_density();
  REQUIRE(fidelity_ghz(g) == Approx(1.0));
  REQUIRE(fidelity_criterion(g).violated);

  ComplexMatrix zero(16, 16);
  zero(0, 0) = 1.0;
  const auto basis = validate_density(zero, 4);
  REQUIRE(fidelity_ghz(basis) == Approx(0.5));
  REQUIRE_FALSE(fidelity_criterion(basis).violated);

  // violation boundary for ghz + white noise at 1/(2(1-2^{-N}))
  const double p0 = ghz_white_full_p0(4);
  REQUIRE(fidelity_criterion(testutil::mix_white(g, p0 - 1e-3)).violated);
  REQUIRE_FALSE(fidelity_criterion(testutil::mix_white(g, p0 + 1e-3)).violated);
}

TEST_CASE("dur-cirac split condition on the family examples", "[criteria]") {
  const auto r1 = rho3_i().to_density();
  const Split a_bc = Split::of(3, {{0}, {1, 2}});
  const Split b_ac = Split::of(3, {{1}, {0, 2}});
  const Split c_ab = Split::of(3, {{2}, {0, 1}});
  REQUIRE_FALSE(dc_condition(r1, a_bc).violated);
  REQUIRE(dc_condition(r1, b_ac).violated);
  REQUIRE(dc_condition(r1, c_ab).violated);

  const auto r2 = rho3_ii().to_density();
  REQUIRE_FALSE(dc_condition(r2, c_ab).violated);
  REQUIRE(dc_condition(r2, a_bc).violated);
  REQUIRE(dc_condition(r2, b_ac).violated);

  const auto mix = rho3_mix(0.5);
  for (const auto& s : {a_bc, b_ac, c_ab})
    REQUIRE(dc_condition(mix, s).violated);

  for (const auto& s : {a_bc, b_ac, c_ab})
    REQUIRE_FALSE(dc_condition(white_noise_state(3), s).violated);
}

TEST_CASE("split condition examples", "[criteria]") {
  const auto b3 = bound_3q_state();
  const auto e3 = AntidiagExpectations::from_matrix_elements(b3);
  REQUIRE(split_condition(e3, Split::of(3, {{0}, {1, 2}})).violated);
  REQUIRE_FALSE(split_condition(e3, Split::of(3, {{1}, {0, 2}})).violated);
  REQUIRE_FALSE(split_condition(e3, Split::of(3, {{2}, {0, 1}})).violated);

  const auto sm = smolin_state();
  const auto es = AntidiagExpectations::from_matrix_elements(sm);
  for (const auto& split : enumerate_splits(4, 2)) {
    const bool one_vs_three =
        std::min(__builtin_popcountll(split.parts[0]),
                 __builtin_popcountll(split.parts[1])) == 1;
    INFO(split.to_string());
    REQUIRE(split_condition(es, split).violated == one_vs_three);
  }

  // pure product state: every side vanishes except the bound
  ComplexMatrix zeros(8, 8);
  zeros(0, 0) = 1.0;
  const auto prod = validate_density(zeros, 3);
  const auto ep = AntidiagExpectations::from_matrix_elements(prod);
  for (const auto& v : alpha_split_condition(ep, Split::of(3, {{0}, {1, 2}}))) {
    REQUIRE(v.lhs == 0.0);
    REQUIRE_FALSE(v.violated);
  }
}

TEST_CASE("ksep condition detects theta states and the bound family",
          "[criteria]") {
  for (int n : {3, 4, 6}) {
    const auto e = AntidiagExpectations::from_matrix_elements(
        theta_state(n, 0.3).to_density());
    REQUIRE(ksep_condition(e, 2).violated);
    const auto e0 = AntidiagExpectations::from_matrix_elements(
        theta_state(n, 0.0).to_density());
    REQUIRE_FALSE(ksep_condition(e0, 2).violated);
  }
  // bound_dur(4): levels 3 and 4 violated, level 2 not
  const auto e = AntidiagExpectations::from_matrix_elements(bound_dur_state(4));
  REQUIRE_FALSE(ksep_condition(e, 2).violated);
  REQUIRE(ksep_condition(e, 3).violated);
  REQUIRE(ksep_condition(e, 4).violated);
  REQUIRE(ksep_condition(e, 3).detail.at("at_most_separable") == 2.0);
  REQUIRE_THROWS_AS(ksep_condition(e, 1), std::invalid_argument);
}

TEST_CASE("per-set minima equal explicit tuple enumeration", "[criteria]") {
  // The tuple minimum in the k-separability condition factorizes because
  // the coordinates are picked independently; check against brute force
  // over all 3^6 tuples for N=4, k=3, x=0.
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = testutil::random_mixed(4, rng);
    const auto e = AntidiagExpectations::from_matrix_elements(rho);
    std::vector<std::vector<double>> choices;
    double shortcut = 0.0;
    for (const auto& split : enumerate_splits(4, 3))
      for (const auto& set : solution_sets(split)) {
        if (std::find(set.begin(), set.end(), 0) == set.end()) continue;
        std::vector<double> vals;
        double m = std::numeric_limits<double>::infinity();
        for (int y : set)
          if (y != 0) {
            vals.push_back(std::sqrt(e.at(y).i2z2()));
            m = std::min(m, vals.back());
          }
        choices.push_back(std::move(vals));
        shortcut += m;
      }
    REQUIRE(choices.size() == 6);
    double brute = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(choices.size(), 0);
    std::size_t tuples = 0;
    while (true) {
      double sum = 0.0;
      for (std::size_t i = 0; i < choices.size(); ++i)
        sum += choices[i][idx[i]];
      brute = std::min(brute, sum);
      ++tuples;
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    REQUIRE(tuples == 729);
    REQUIRE(brute == Approx(shortcut).margin(1e-12));
  }
}

TEST_CASE("matrix form is pauli-only", "[criteria]") {
  REQUIRE_NOTHROW(require_pauli(std::vector<LocalTriple>(3)));
  // a rotated but valid triple is not the Pauli set
  const double a = 0.3;
  const LocalTriple rot(std::cos(a) * sigma_x() + std::sin(a) * sigma_y(),
                        -std::sin(a) * sigma_x() + std::cos(a) * sigma_y(),
                        sigma_z());
  REQUIRE_NOTHROW(rot.validate());
  REQUIRE_THROWS_AS(require_pauli({rot}), std::invalid_argument);

  const auto rho = bound_3q_state();
  MatrixFormSpec spec;
  spec.id = "alpha_split";
  spec.split = Split::of(3, {{0}, {1, 2}});
  const auto v = matrix_form(rho, spec, std::vector<LocalTriple>(3));
  REQUIRE(v.violated);
  REQUIRE_THROWS_AS(matrix_form(rho, spec, {rot, rot, rot}),
                    std::invalid_argument);
  spec.id = "ksep";
  spec.k = 3;
  REQUIRE(matrix_form(rho, spec, std::vector<LocalTriple>(3)).violated);
  spec.id = "nosuch";
  REQUIRE_THROWS_AS(matrix_form(rho, spec, std::vector<LocalTriple>(3)),
                    std::invalid_argument);
}

TEST_CASE("operator and matrix-element paths agree", "[criteria]") {
  std::mt19937_64 rng(43);
  for (int n = 2; n <= 4; ++n) {
    const auto fam = OperatorFamily::pauli(n);
    for (int trial = 0; trial < 15; ++trial) {
      const auto rho = testutil::random_mixed(n, rng);
      const auto ea = AntidiagExpectations::from_matrix_elements(rho);
      const auto eb = AntidiagExpectations::from_family(rho, fam);
      for (int x = 0; x < ea.count(); ++x) {
        REQUIRE(ea.at(x).ex == Approx(eb.at(x).ex).margin(1e-10));
        REQUIRE(ea.at(x).ey == Approx(eb.at(x).ey).margin(1e-10));
        REQUIRE(ea.at(x).ez == Approx(eb.at(x).ez).margin(1e-10));
        REQUIRE(ea.at(x).ei == Approx(eb.at(x).ei).margin(1e-10));
      }
      for (int k = 2; k <= n; ++k)
        REQUIRE(ksep_condition(ea, k).margin ==
                Approx(ksep_condition(eb, k).margin).margin(1e-9));
    }
  }
}

TEST_CASE("chain inequalities", "[criteria]") {
  std::mt19937_64 rng(44);
  // the A-tagged comparisons hold for every state and element
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = testutil::random_mixed(3, rng);
    for (std::size_t l = 1; l <= 4; ++l) {
      const auto r = chain_check(rho, l);
      REQUIRE(r.expr1 <= r.expr2 + 1e-12);
      REQUIRE(r.expr3 <= r.expr4 + 1e-12);
    }
  }
  // GHZ violates all three
  const auto g = chain_check(ghz(4).to_density(), 1);
  REQUIRE(g.violated_lz2);
  REQUIRE(g.violated_fidelity);
  REQUIRE(g.violated_new_bisep);
  // rho' family: the new biseparability condition fires for any imbalance,
  // the fidelity condition only once the imbalance beats the lambda sum
  const auto small = rho_prime_state(3, 0.3, 0.25, {0.15, 0.05, 0.025});
  const auto rs = chain_check(small, 1);
  REQUIRE(rs.violated_new_bisep);
  REQUIRE_FALSE(rs.violated_fidelity);
  const auto large = rho_prime_state(3, 0.8, 0.0, {0.05, 0.03, 0.02});
  const auto rl = chain_check(large, 1);
  REQUIRE(rl.violated_new_bisep);
  REQUIRE(rl.violated_fidelity);
  REQUIRE_THROWS_AS(chain_check(small, 9), std::invalid_argument);
}

TEST_CASE("implication order on random states", "[criteria]") {
  std::mt19937_64 rng(45);
  for (int n = 3; n <= 4; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto rho = testutil::random_mixed(n, rng);
      const auto e = AntidiagExpectations::from_matrix_elements(rho);
      const bool lz = lz_condition(rho, 2).violated;
      const bool fid = fidelity_criterion(rho).violated;
      const bool nb = ksep_condition(e, 2).violated;
      if (lz) REQUIRE(fid);
      if (fid) REQUIRE(nb);
    }
  }
}

TEST_CASE("verdicts satisfied at level k hold at every lower level",
          "[criteria]") {
  std::mt19937_64 rng(46);
  const int n = 4;
  for (int trial = 0; trial < 60; ++trial) {
    const auto rho = testutil::random_mixed(n, rng);
    const auto e = AntidiagExpectations::from_matrix_elements(rho);
    std::vector<bool> sat;
    for (int k = 2; k <= n; ++k) sat.push_back(!ksep_condition(e, k).violated);
    for (int k = n; k >= 2; --k)
      if (sat[k - 2])
        for (int l = 2; l < k; ++l) REQUIRE(sat[l - 2]);
    // same monotonicity for the anti-diagonal bound
    for (int k = n; k >= 3; --k)
      if (!lz_condition(rho, k).violated)
        REQUIRE_FALSE(lz_condition(rho, k - 1).violated);
  }
}

TEST_CASE("split condition implies the dur-cirac condition on the family",
          "[criteria]") {
  // exhaustive lambda grid for N=3
  const int steps = 6;
  int checked = 0;
  for (int c0 = 0; c0 <= steps; ++c0)
    for (int c1 = 0; c1 + c0 <= steps; ++c1)
      for (int c2 = 0; c2 + c1 + c0 <= steps; ++c2)
        for (int c3 = 0; c3 + c2 + c1 + c0 <= steps; ++c3) {
          GHZDiagonalState s;
          s.n_qubits = 3;
          s.lambda0_plus = double(c0) / steps;
          s.lambda0_minus = double(c1) / steps;
          const double l1 = double(c2) / (2.0 * steps);
          const double l2 = double(c3) / (2.0 * steps);
          const double rest =
              1.0 - s.lambda0_plus - s.lambda0_minus - 2 * l1 - 2 * l2;
          if (rest < -1e-12) continue;
          s.lambda = {l1, l2, std::max(rest, 0.0) / 2.0};
          const auto rho = s.to_density();
          const auto e = AntidiagExpectations::from_matrix_elements(rho);
          for (const auto& split : enumerate_splits(3, 2)) {
            if (!split_condition(e, split).violated) {
              REQUIRE_FALSE(dc_condition(rho, split).violated);
              ++checked;
            }
          }
        }
  REQUIRE(checked > 100);

  // exhaustive coarse grid for N=4: integer weights a + b + sum d_j = S
  // with lambda0+ = a/S, lambda0- = b/S, lambda_j = d_j/(2S)
  const int S = 4;
  std::vector<int> d(7, 0);
  int visited = 0;
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j == 7) {
      for (int a = 0; a <= left; ++a) {
        GHZDiagonalState s;
        s.n_qubits = 4;
        s.lambda0_plus = double(a) / S;
        s.lambda0_minus = double(left - a) / S;
        s.lambda.assign(7, 0.0);
        for (int t = 0; t < 7; ++t) s.lambda[t] = double(d[t]) / (2.0 * S);
        const auto rho = s.to_density();
        const auto e = AntidiagExpectations::from_matrix_elements(rho);
        for (const auto& split : enumerate_splits(4, 2))
          if (!split_condition(e, split).violated)
            REQUIRE_FALSE(dc_condition(rho, split).violated);
        ++visited;
      }
      return;
    }
    for (int v = 0; v <= left; ++v) {
      d[j] = v;
      self(self, j + 1, left - v);
    }
    d[j] = 0;
  };
  rec(rec, 0, S);
  REQUIRE(visited == 495);
}

TEST_CASE("white noise satisfies everything with real slack", "[criteria]") {
  for (int n = 2; n <= 5; ++n) {
    const auto rho = white_noise_state(n);
    const auto e = AntidiagExpectations::from_matrix_elements(rho);
    const std::vector<LocalTriple> triples((std::size_t(n)));
    const double slack = -std::pow(0.25, n - 1) + 1e-9;
    REQUIRE(lz_condition(rho, 2).margin <= slack);
    REQUIRE(fidelity_criterion(rho).margin <= slack);
    for (int k = 2; k <= n; ++k) {
      REQUIRE(ksep_condition(e, k).margin <= slack);
      REQUIRE(mermin_quadratic(rho, k, triples).margin <= slack);
      REQUIRE(mermin_linear(rho, k, triples).margin <= slack);
    }
    for (const auto& split : enumerate_splits(n, 2)) {
      REQUIRE(split_condition(e, split).margin <= slack);
      REQUIRE(dc_condition(rho, split).margin <= slack);
    }
  }
}

TEST_CASE("rho' family is detected whenever the top weights differ",
          "[criteria]") {
  // The populated diagonals all sit on |j 0> rows, so their anti-diagonal
  // partners are empty and the biseparability sum collapses to zero.
  std::mt19937_64 rng(48);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {3, 4}) {
    const int half = 1 << (n - 1);
    for (int trial = 0; trial < 40; ++trial) {
      double l0p = u(rng), l0m = u(rng);
      std::vector<double> lam(std::size_t(half - 1));
      double sum = l0p + l0m;
      for (auto& l : lam) {
        l = u(rng);
        sum += 2.0 * l;
      }
      l0p /= sum;
      l0m /= sum;
      for (auto& l : lam) l /= sum;
      const auto rho = rho_prime_state(n, l0p, l0m, lam);
      const auto e = AntidiagExpectations::from_matrix_elements(rho);
      const bool detected = ksep_condition(e, 2).violated;
      REQUIRE(detected == (std::abs(l0p - l0m) > 2e-9));
      // the fidelity criterion needs the imbalance to beat the lambda sum
      double lamsum = 0.0;
      for (double l : lam) lamsum += 2.0 * l;
      if (std::abs(l0p - l0m) < lamsum - 1e-6)
        REQUIRE_FALSE(fidelity_criterion(rho).violated);
      if (std::abs(l0p - l0m) > lamsum + 1e-6)
        REQUIRE(fidelity_criterion(rho).violated);
    }
  }
}
