#include <doctest.h>

#include <sstream>

#include "ppp/io.hpp"
#include "ppp/matrix.hpp"
#include "ppp/util.hpp"
#include "test_support.hpp"

using ppp::BigInt;
using ppp::BitVec;

namespace {

ppp::Instance inst_of(std::initializer_list<unsigned long> vals) {
  std::vector<BigInt> es;
  for (unsigned long v : vals) es.emplace_back(v);
  return ppp::Instance::from_entries(std::move(es));
}

}  // namespace

TEST_CASE("build on mirror [6,6]") {
  auto m = ppp::build_matrix(inst_of({6, 6}));
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 2);
  CHECK(m.primes == std::vector<BigInt>{2, 3});
  CHECK(m.at(0, 0) == 1);
  CHECK(m.at(0, 1) == 1);
  CHECK(m.at(1, 0) == 1);
  CHECK(m.at(1, 1) == 1);
}

TEST_CASE("build on [2,3,6]") {
  auto m = ppp::build_matrix(inst_of({2, 3, 6}));
  REQUIRE(m.rows == 3);
  REQUIRE(m.cols == 2);
  CHECK(m.primes == std::vector<BigInt>{2, 3});
  std::vector<std::int64_t> want{1, 0, 0, 1, 1, 1};
  CHECK(m.exps == want);
}

TEST_CASE("build on [8] and the exponent bound") {
  auto inst = inst_of({8});
  CHECK(inst.bit_bound() == 3);
  auto m = ppp::build_matrix(inst);
  REQUIRE(m.cols == 1);
  CHECK(m.primes[0] == 2);
  CHECK(m.at(0, 0) == 3);
  CHECK(m.at(0, 0) <= static_cast<std::int64_t>(inst.bit_bound()));
}

TEST_CASE("unit entries become flagged zero rows") {
  auto m = ppp::build_matrix(inst_of({1, 6, 1}));
  CHECK(m.rows == 3);
  CHECK(m.cols == 2);
  CHECK(m.unit_rows() == std::vector<std::size_t>{0, 2});
  CHECK(m.at(0, 0) == 0);
  CHECK(m.at(0, 1) == 0);
  CHECK(m.row_product(0) == 1);
}

TEST_CASE("duplicate entries stay distinct rows") {
  auto m = ppp::build_matrix(inst_of({4, 4}));
  CHECK(m.rows == 2);
  CHECK(m.at(0, 0) == 2);
  CHECK(m.at(1, 0) == 2);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(ppp::Instance::from_entries({}), std::invalid_argument);
  CHECK_THROWS_AS(ppp::Instance::from_entries({BigInt(0)}),
                  std::invalid_argument);
}

TEST_CASE("residual examples") {
  auto m66 = ppp::build_matrix(inst_of({6, 6}));
  CHECK(ppp::residual(m66, {1, 0}) == std::vector<std::int64_t>{0, 0});

  auto m = ppp::build_matrix(inst_of({2, 3, 6}));
  CHECK(ppp::residual(m, {1, 1, 0}) == std::vector<std::int64_t>{0, 0});
  CHECK(ppp::residual(m, {1, 0, 0}) == std::vector<std::int64_t>{0, -2});

  CHECK_THROWS_AS(ppp::residual(m, {1, 0}), std::invalid_argument);
}

TEST_CASE("column targets") {
  CHECK(ppp::column_targets(ppp::build_matrix(inst_of({6, 6}))) ==
        std::vector<double>{1.0, 1.0});
  CHECK(ppp::column_targets(ppp::build_matrix(inst_of({2, 3, 6}))) ==
        std::vector<double>{1.0, 1.0});
  // single element: target exists, yet no bipartition can reach it
  CHECK(ppp::column_targets(ppp::build_matrix(inst_of({4}))) ==
        std::vector<double>{1.0});
  CHECK(ppp::column_targets(ppp::build_matrix(inst_of({2, 4}))) ==
        std::vector<double>{1.5});
}

TEST_CASE("parity filter") {
  CHECK(ppp::parity_feasible(ppp::build_matrix(inst_of({2, 2}))));
  CHECK_FALSE(ppp::parity_feasible(ppp::build_matrix(inst_of({2, 3}))));
  CHECK(ppp::parity_feasible(ppp::build_matrix(inst_of({2, 3, 6}))));
}

TEST_CASE("verify_exact examples") {
  CHECK(ppp::verify_exact(inst_of({6, 6}), {1, 0}));
  CHECK(ppp::verify_exact(inst_of({2, 3, 6}), {1, 1, 0}));
  auto i235 = inst_of({2, 3, 5});
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    CHECK_FALSE(ppp::verify_exact(i235, ppptest::bits_of(mask, 3)));
  }
  CHECK_THROWS_AS(ppp::verify_exact(i235, {1, 0}), std::invalid_argument);
}

TEST_CASE("residual-zero iff exact products, exhaustively") {
  ppp::Rng rng(101);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 1 + rng.below(8);
    auto inst = ppptest::random_instance(rng, n, 1, 10000);
    auto m = ppp::build_matrix(inst);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      BitVec x = ppptest::bits_of(mask, n);
      auto r = ppp::residual(m, x);
      bool zero = std::all_of(r.begin(), r.end(),
                              [](std::int64_t v) { return v == 0; });
      CHECK(zero == ppp::verify_exact(inst, x));
      CHECK(ppp::verify_exact(inst, x) == ppptest::subset_products_equal(inst, x));
    }
  }
}

TEST_CASE("exponent bound holds on random m-bit instances") {
  ppp::Rng rng(202);
  for (int t = 0; t < 100; ++t) {
    std::uint64_t m = 1 + rng.below(40);
    std::size_t n = 1 + rng.below(10);
    std::vector<BigInt> es;
    for (std::size_t i = 0; i < n; ++i) {
      es.emplace_back(static_cast<unsigned long>(rng.range(1, 1ULL << m)));
    }
    auto inst = ppp::Instance::from_entries(std::move(es));
    CHECK(inst.bit_bound() <= m);
    auto mat = ppp::build_matrix(inst);
    CHECK(mat.max_exponent() <= static_cast<std::int64_t>(inst.bit_bound()));
  }
}

TEST_CASE("rows reconstruct entries") {
  ppp::Rng rng(303);
  for (int t = 0; t < 50; ++t) {
    auto inst = ppptest::random_instance(rng, 1 + rng.below(12), 1, 1u << 30);
    auto m = ppp::build_matrix(inst);
    for (std::size_t i = 0; i < m.rows; ++i) {
      CHECK(m.row_product(i) == inst.entries[i]);
    }
    // no dead columns
    for (std::size_t k = 0; k < m.cols; ++k) {
      bool live = false;
      for (std::size_t i = 0; i < m.rows; ++i) live |= m.at(i, k) != 0;
      CHECK(live);
    }
  }
}

TEST_CASE("complement symmetry of residuals") {
  ppp::Rng rng(404);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 2 + rng.below(10);
    auto inst = ppptest::random_instance(rng, n, 1, 100000);
    auto m = ppp::build_matrix(inst);
    BitVec x = ppptest::bits_of(rng.next_u64(), n);
    BitVec xc(n);
    for (std::size_t i = 0; i < n; ++i) xc[i] = 1 - x[i];
    auto r = ppp::residual(m, x);
    auto rc = ppp::residual(m, xc);
    for (std::size_t k = 0; k < m.cols; ++k) CHECK(rc[k] == -r[k]);
  }
}

TEST_CASE("odd parity certifies infeasibility, exhaustively") {
  ppp::Rng rng(505);
  int seen = 0;
  while (seen < 20) {
    std::size_t n = 2 + rng.below(9);
    auto inst = ppptest::random_instance(rng, n, 2, 5000);
    auto m = ppp::build_matrix(inst);
    if (ppp::parity_feasible(m)) continue;
    ++seen;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      CHECK_FALSE(ppp::verify_exact(inst, ppptest::bits_of(mask, n)));
    }
  }
}

TEST_CASE("exact rank on known matrices") {
  CHECK(ppp::rank_exact(ppp::build_matrix(inst_of({6, 6, 6, 6}))) == 1);
  CHECK(ppp::rank_exact(ppp::build_matrix(inst_of({2, 3}))) == 2);
  CHECK(ppp::rank_exact(ppp::build_matrix(inst_of({2, 3, 6}))) == 2);
  CHECK(ppp::rank_exact(ppp::build_matrix(inst_of({2, 4, 8}))) == 1);
  CHECK(ppp::rank_exact(ppp::build_matrix(inst_of({1, 1}))) == 0);
}

TEST_CASE("candidate fields stay mutually consistent") {
  ppp::Rng rng(606);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + rng.below(10);
    auto inst = ppptest::random_instance(rng, n, 1, 5000);
    auto m = ppp::build_matrix(inst);
    BitVec x = ppptest::bits_of(rng.next_u64(), n);
    auto c = ppp::make_candidate(inst, m, x);
    bool zero = std::all_of(c.residual.begin(), c.residual.end(),
                            [](std::int64_t v) { return v == 0; });
    CHECK(c.exact == zero);
    CHECK(c.cardinality ==
          static_cast<std::size_t>(std::count(x.begin(), x.end(), 1)));
    CHECK(c.x == x);
  }
}

TEST_CASE("instance parsing") {
  std::istringstream ok("# comment\n\n6\n  10 \n\n# tail\n15\n");
  auto inst = ppp::parse_instance(ok);
  REQUIRE(inst.size() == 3);
  CHECK(inst.entries[0] == 6);
  CHECK(inst.entries[1] == 10);
  CHECK(inst.entries[2] == 15);

  std::istringstream bad("6\n6\nabc\n");
  try {
    ppp::parse_instance(bad);
    FAIL("expected ParseError");
  } catch (const ppp::ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }

  std::istringstream zero("0\n");
  CHECK_THROWS_AS(ppp::parse_instance(zero), ppp::ParseError);
  std::istringstream neg("-4\n");
  CHECK_THROWS_AS(ppp::parse_instance(neg), ppp::ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(ppp::parse_instance(empty), ppp::ParseError);
}

TEST_CASE("big entries parse and factor") {
  std::istringstream in("36893488147419103232\n2\n");  // 2^65, 2
  auto inst = ppp::parse_instance(in);
  auto m = ppp::build_matrix(inst);
  CHECK(m.cols == 1);
  CHECK(m.at(0, 0) == 65);
  CHECK(inst.bit_bound() == 65);
}
