#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cscpct/types.hpp"

using namespace cscpct;

TEST_CASE("signal rejects empty, non-finite and bad rates") {
  CHECK_THROWS_AS(Signal(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(Signal({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Signal({1.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_THROWS_AS(Signal({1.0}, 0.0), std::invalid_argument);
  const Signal s({1.0, 2.0, 3.0}, 500.0);
  CHECK(s.size() == 3);
  CHECK(s.sample_rate() == 500.0);
  CHECK(s[2] == 3.0);
}

TEST_CASE("dictionary shape and norm constraint") {
  CHECK_THROWS_AS(Dictionary(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Dictionary(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(Dictionary::from_atoms({{1.0, 0.0}, {1.0}}), std::invalid_argument);

  auto d = Dictionary::from_atoms({{0.6, 0.8}, {0.0, 0.5}});
  CHECK(d.n_atoms() == 2);
  CHECK(d.atom_length() == 2);
  CHECK(d.satisfies_norm_constraint());
  d.atom(1)[0] = 1.0;
  CHECK_FALSE(d.satisfies_norm_constraint());
}

TEST_CASE("activations l1 norm and zero test") {
  Activations z(2, 5);
  CHECK(z.is_zero());
  CHECK(z.l1_norm() == 0.0);
  z(0, 1) = -2.0;
  z(1, 4) = 0.5;
  CHECK_FALSE(z.is_zero());
  CHECK(z.l1_norm() == doctest::Approx(2.5));
  CHECK(z.map(1)[4] == 0.5);
}

TEST_CASE("mode names round-trip and are case-insensitive") {
  for (Mode m : {Mode::Joint, Mode::Init, Mode::None}) CHECK(parse_mode(to_string(m)) == m);
  CHECK(parse_mode("JOINT") == Mode::Joint);
  CHECK_THROWS_AS(parse_mode("vanilla"), std::invalid_argument);
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.lambda_frac = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.lambda_tv = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.sparse_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("total variation and helpers") {
  const std::vector<double> v{1.0, -2.0, 3.0};
  CHECK(total_variation(v) == 8.0);
  CHECK(max_abs(v) == 3.0);
  CHECK(squared_norm(v) == 14.0);
}
