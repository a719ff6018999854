#include <doctest.h>

#include <random>

#include "coarse/compose.hpp"
#include "coarse/minplus.hpp"
#include "coarse/spaces.hpp"
#include "support/oracles.hpp"

using namespace coarse;

namespace {

std::shared_ptr<const FiniteMetric> halfline(int n) {
  return std::make_shared<const FiniteMetric>(generate_space({SpaceKind::Halfline}, n));
}

DoubleMetric lambda_double(std::shared_ptr<const FiniteMetric> base, Dist lambda) {
  CatalogParams params;
  params.lambda = lambda;
  return make_catalog_double(std::move(base), CatalogKind::Lambda, params);
}

}  // namespace

TEST_CASE("single-point composition is a plain sum") {
  FiniteMetric pt;
  pt.n = 1;
  pt.dist = {0};
  const auto base = std::make_shared<const FiniteMetric>(pt);
  const auto a = assemble_double(base, {2});
  const auto b = assemble_double(base, {3});
  CHECK(compose(a, b).cross == std::vector<Dist>{5});
}

TEST_CASE("two-point composition matches the exhaustive minimum") {
  const auto base = std::make_shared<const FiniteMetric>(FiniteMetric{2, 1, {0, 2, 2, 0}, 0, {}});
  const auto a = assemble_double(base, {1, 3, 3, 1});
  const auto b = assemble_double(base, {2, 2, 2, 2});
  const auto ab = compose(a, b);
  CHECK(ab.cross == oracles::minplus_naive(a.cross, b.cross, 2));
  CHECK(ab.cross == std::vector<Dist>{3, 3, 3, 3});
}

TEST_CASE("unit law: the lambda-1 element shifts by exactly one quantum") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 10);
    const auto base = halfline(n);
    const auto e1 = lambda_double(base, 1);
    const auto d = oracles::teleport_double(base, gen());
    const auto left = compose(e1, d);
    const auto right = compose(d, e1);
    for (std::size_t idx = 0; idx < d.cross.size(); ++idx) {
      REQUIRE(left.cross[idx] == d.cross[idx] + 1);
      REQUIRE(right.cross[idx] == d.cross[idx] + 1);
    }
  }
}

TEST_CASE("triple products match the double-junction oracle") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 7);
    const auto base = halfline(n);
    const auto a = oracles::teleport_double(base, gen());
    const auto b = oracles::teleport_double(base, gen());
    const auto at = transpose(a);
    for (Dist penalty : {0, 1}) {
      const std::vector<DoubleMetric> chain{a, b, at};
      const auto product = compose_chain(chain, ComposeOptions{penalty});
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          REQUIRE(product.cross_at(i, j) == oracles::chain3_at(a, b, at, i, j, penalty));
        }
      }
    }
  }
}

TEST_CASE("a fold of one compose is compose") {
  const auto base = halfline(4);
  const auto a = oracles::teleport_double(base, 1);
  const auto b = oracles::teleport_double(base, 2);
  const std::vector<DoubleMetric> chain{a, b};
  CHECK(compose_chain(chain).cross == compose(a, b).cross);
  CHECK_THROWS_AS(compose_chain(std::span<const DoubleMetric>{chain.data(), 1}),
                  InvalidInputError);
}

TEST_CASE("associativity is exact at penalty 0") {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 12);
    const auto base = halfline(n);
    const auto a = oracles::teleport_double(base, gen());
    const auto b = oracles::teleport_double(base, gen());
    const auto c = oracles::teleport_double(base, gen());
    const auto left = compose(compose(a, b), c);
    const auto right = compose(a, compose(b, c));
    REQUIRE(left.cross == right.cross);
  }
}

TEST_CASE("composition is monotone") {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 8);
    const auto base = halfline(n);
    const auto a = oracles::teleport_double(base, gen());
    const auto b = oracles::teleport_double(base, gen());
    auto bigger = [&](const DoubleMetric& d, Dist off) {
      std::vector<Dist> cross = d.cross;
      for (auto& v : cross) v += off;
      return assemble_double(base, std::move(cross));
    };
    const auto a2 = bigger(a, 1 + static_cast<Dist>(gen() % 4));
    const auto b2 = bigger(b, static_cast<Dist>(gen() % 4));
    const auto lo = compose(a, b);
    const auto hi = compose(a2, b2);
    for (std::size_t idx = 0; idx < lo.cross.size(); ++idx) {
      REQUIRE(lo.cross[idx] <= hi.cross[idx]);
    }
  }
}

TEST_CASE("composition preserves validity (independent oracle)") {
  std::mt19937_64 gen(59);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 8);
    const auto base = halfline(n);
    const auto a = oracles::teleport_double(base, gen());
    const auto b = oracles::teleport_double(base, gen());
    const auto ab = compose(a, b);
    REQUIRE(oracles::assembled_is_metric(*base, ab.cross));
  }
}

TEST_CASE("cross floor adds under composition") {
  std::mt19937_64 gen(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = halfline(3 + static_cast<int>(gen() % 6));
    const auto a = oracles::teleport_double(base, gen());
    const auto b = oracles::teleport_double(base, gen());
    auto floor_of = [](const DoubleMetric& d) {
      Dist m = d.cross[0];
      for (Dist v : d.cross) m = std::min(m, v);
      return m;
    };
    REQUIRE(floor_of(compose(a, b)) >= floor_of(a) + floor_of(b));
  }
}

TEST_CASE("pseudoinverse inequality D D* D >= D") {
  std::mt19937_64 gen(67);
  for (int trial = 0; trial < 100; ++trial) {
    const auto base = halfline(2 + static_cast<int>(gen() % 10));
    const auto d = oracles::teleport_double(base, gen());
    const std::vector<DoubleMetric> chain{d, transpose(d), d};
    const auto ddd = compose_chain(chain);
    for (std::size_t idx = 0; idx < d.cross.size(); ++idx) {
      REQUIRE(ddd.cross[idx] >= d.cross[idx]);
    }
  }
}

TEST_CASE("junction penalty is added once per compose") {
  const auto base = halfline(5);
  const auto a = oracles::teleport_double(base, 71);
  const auto b = oracles::teleport_double(base, 73);
  const auto plain = oracles::minplus_naive(a.cross, b.cross, 5);
  const auto with_penalty = compose(a, b, ComposeOptions{1});
  for (std::size_t idx = 0; idx < plain.size(); ++idx) {
    REQUIRE(with_penalty.cross[idx] == plain[idx] + 1);
  }
  CHECK_THROWS_AS(compose(a, b, ComposeOptions{-1}), InvalidInputError);
}

TEST_CASE("mismatched bases are rejected") {
  const auto a = oracles::teleport_double(halfline(4), 1);
  const auto b = oracles::teleport_double(
      std::make_shared<const FiniteMetric>(generate_space({SpaceKind::Line}, 4)), 1);
  CHECK_THROWS_AS(compose(a, b), IncompatibleOperandsError);
}

TEST_CASE("serial and parallel kernels agree bit-exactly") {
  std::mt19937_64 gen(79);
  for (int n : {1, 2, 17, 64, 129}) {
    std::vector<Dist> a(static_cast<std::size_t>(n) * n), b(a.size());
    for (auto& v : a) v = 1 + static_cast<Dist>(gen() % 1000);
    for (auto& v : b) v = 1 + static_cast<Dist>(gen() % 1000);
    std::vector<Dist> serial(a.size()), parallel(a.size());
    minplus_serial(a.data(), b.data(), serial.data(), n);
    for (int threads : {1, 2, 3, 4}) {
      minplus_parallel(a.data(), b.data(), parallel.data(), n, threads);
      REQUIRE(serial == parallel);
    }
    REQUIRE(serial == oracles::minplus_naive(a, b, n));
  }
}

TEST_CASE("bench checksums are thread-count independent and deterministic") {
  const auto one = bench_minplus(64, 1, 7);
  const auto four = bench_minplus(64, 4, 7);
  CHECK(one.checksums_match);
  CHECK(four.checksums_match);
  CHECK(one.checksum_serial == four.checksum_serial);
  CHECK(one.checksum_parallel == four.checksum_parallel);

  const auto again = bench_minplus(64, 4, 7);
  CHECK(again.checksum_serial == four.checksum_serial);

  const auto tiny = bench_minplus(1, 1, 3);  // single sum
  CHECK(tiny.checksums_match);

  CHECK_THROWS_AS(bench_minplus(0, 1, 1), InvalidInputError);
  CHECK_THROWS_AS(bench_minplus(5000, 1, 1), InvalidInputError);
}
