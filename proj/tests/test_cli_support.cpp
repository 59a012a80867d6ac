#include "catch_amalgamated.hpp"

#include <cstdlib>

#include "test_helpers.hpp"

using namespace entcert;
using nlohmann::json;

TEST_CASE("dense state file round-trips bit-exactly", "[cli]") {
  std::mt19937_64 rng(61);
  const auto rho = testutil::random_mixed(2, rng);
  const StateFile sf = statefile_dense(rho);
  const json j = sf.to_json();
  const StateFile back = StateFile::from_json(j);
  REQUIRE(back.kind == "dense");
  REQUIRE(back.n_qubits == 2);
  REQUIRE(back.dense.max_abs_diff(rho.matrix()) == 0.0);
  // and a second hop through the serialized text
  const StateFile again = StateFile::from_json(json::parse(j.dump()));
  REQUIRE(again.dense.max_abs_diff(rho.matrix()) == 0.0);
}

TEST_CASE("named state files realize through the catalog", "[cli]") {
  json j{{"kind", "named"},
         {"n_qubits", 3},
         {"name", "ghz"},
         {"params", {{"n", 3}}}};
  const auto sf = StateFile::from_json(j);
  const auto rho = sf.realize(kDefaultTol);
  REQUIRE(rho.n_qubits() == 3);
  REQUIRE(std::abs(rho.antidiagonal(1)) == Catch::Approx(0.5));

  json bad = j;
  bad["params"]["junk"] = 1.0;
  REQUIRE_THROWS_AS(StateFile::from_json(bad).realize(kDefaultTol),
                    std::invalid_argument);

  json mismatch = j;
  mismatch["n_qubits"] = 4;
  REQUIRE_THROWS_AS(StateFile::from_json(mismatch).realize(kDefaultTol),
                    std::invalid_argument);
}

TEST_CASE("dense state files are validated on realize", "[cli]") {
  StateFile sf;
  sf.kind = "dense";
  sf.n_qubits = 1;
  sf.dense = ComplexMatrix::identity(2);  // trace 2
  REQUIRE_THROWS_WITH(sf.realize(kDefaultTol),
                      Catch::Matchers::ContainsSubstring("trace"));
  json missing{{"kind", "dense"}, {"n_qubits", 1}, {"entries", {{1.0, 0.0}}}};
  REQUIRE_THROWS_WITH(StateFile::from_json(missing),
                      Catch::Matchers::ContainsSubstring("entry count"));
}

TEST_CASE("engine header carries version and tolerances", "[cli]") {
  const json h = engine_header(1e-9);
  REQUIRE(h.at("name") == "entcert");
  REQUIRE(h.at("version") == kVersion);
  REQUIRE(h.at("tolerance") == 1e-9);
  REQUIRE(h.at("algebra_tolerance") == kAlgebraTol);
}

TEST_CASE("verdict and threshold json carry the evaluated sides", "[cli]") {
  const auto g = ghz(3).to_density();
  const auto v = lz_condition(g, 2);
  const json jv = to_json(v);
  REQUIRE(jv.at("id") == "lz");
  REQUIRE(jv.at("lhs") == v.lhs);
  REQUIRE(jv.at("violated") == true);
  REQUIRE(jv.contains("bound"));
  // fidelity has no numeric bound: the key is omitted rather than null
  const json jf = to_json(fidelity_criterion(g));
  REQUIRE_FALSE(jf.contains("bound"));
  REQUIRE(jf.contains("rhs"));

  const auto t = threshold_white(g, CriterionFamily::full_entanglement);
  const json jt = to_json(t);
  REQUIRE(jt.at("p0") == t.p0);
  REQUIRE(jt.at("method") == "closed-form");
}

TEST_CASE("tolerance env override", "[cli]") {
  REQUIRE(default_tolerance() == kDefaultTol);
  setenv("ENTCERT_TOL", "1e-7", 1);
  REQUIRE(default_tolerance() == 1e-7);
  setenv("ENTCERT_TOL", "garbage", 1);
  REQUIRE(default_tolerance() == kDefaultTol);
  unsetenv("ENTCERT_TOL");
  REQUIRE(default_tolerance() == kDefaultTol);
}
