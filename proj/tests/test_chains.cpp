#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "carpets/chains.hpp"
#include "carpets/errors.hpp"
#include "test_support.hpp"

using namespace carpets;
using namespace carpets::testing;

namespace {

/// Quadratic-time reference for the chain graph edges.
std::vector<std::vector<std::uint32_t>> brute_adjacency(
    const std::vector<GridCell>& cells, unsigned n, unsigned m, double delta) {
  std::vector<std::vector<std::uint32_t>> adj(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (cell_gap(cells[i], cells[j], n, m) <= delta) {
        adj[i].push_back(std::uint32_t(j));
        adj[j].push_back(std::uint32_t(i));
      }
    }
  }
  return adj;
}

/// Component labels by repeated sweeps, dense ids in first-seen order.
std::vector<std::uint32_t> brute_components(
    const std::vector<std::vector<std::uint32_t>>& adj) {
  std::vector<std::uint32_t> label(adj.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (std::size_t seed = 0; seed < adj.size(); ++seed) {
    if (label[seed] != UINT32_MAX) continue;
    std::vector<std::size_t> stack = {seed};
    label[seed] = next;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t w : adj[v]) {
        if (label[w] == UINT32_MAX) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

TEST_CASE("cell_gap geometry") {
  unsigned n = 4, m = 3;
  GridCell a{0, 0, 2};
  CHECK(cell_gap(a, a, n, m) == 0.0);
  CHECK(cell_gap(a, {1, 0, 2}, n, m) == 0.0);  // edge touch
  CHECK(cell_gap(a, {1, 1, 2}, n, m) == 0.0);  // corner touch
  // Two columns apart: one full cell width 4^-2 between them.
  CHECK(cell_gap(a, {2, 0, 2}, n, m) == doctest::Approx(1.0 / 16).epsilon(1e-12));
  // Diagonal gap: hypot of one cell width and two cell heights.
  CHECK(cell_gap(a, {2, 3, 2}, n, m) ==
        doctest::Approx(std::hypot(1.0 / 16, 2.0 / 9)).epsilon(1e-12));
  CHECK(cell_gap({2, 3, 2}, a, n, m) ==
        doctest::Approx(std::hypot(1.0 / 16, 2.0 / 9)).epsilon(1e-12));
  CHECK_THROWS_AS(cell_gap(a, {0, 0, 3}, n, m), CarpetError);
}

TEST_CASE("chain graph matches the quadratic reference") {
  std::mt19937_64 rng(4004);
  std::vector<double> deltas = {0.0, 0.003, 0.02, 0.1, 0.5};
  for (int trial = 0; trial < 10; ++trial) {
    BMCarpet carpet = random_bm(rng);
    unsigned level = carpet.cells.size() > 20 ? 1 : 2;
    for (double delta : deltas) {
      ChainGraph graph = build_chain_graph(carpet, level, delta);
      CHECK(std::is_sorted(graph.vertices.begin(), graph.vertices.end(),
                           [](const GridCell& a, const GridCell& b) {
                             return a.x != b.x ? a.x < b.x : a.y < b.y;
                           }));
      auto expect =
          brute_adjacency(graph.vertices, carpet.n, carpet.m, delta);
      REQUIRE(graph.adjacency.size() == expect.size());
      for (std::size_t i = 0; i < expect.size(); ++i) {
        std::sort(expect[i].begin(), expect[i].end());
        CHECK(graph.adjacency[i] == expect[i]);
      }
      CHECK(graph_components(graph) == brute_components(expect));
    }
  }
}

TEST_CASE("chain graph guards") {
  BMCarpet s1 = load_bm("s1.json");
  CHECK_THROWS_AS(build_chain_graph(s1, 0, 0.1), CarpetError);
  CHECK_THROWS_AS(build_chain_graph(s1, 3, -0.5), CarpetError);
  CHECK_THROWS_AS(build_chain_graph(s1, 9, 0.0, 100), CarpetError);
}

TEST_CASE("one component at huge delta, many at zero") {
  BMCarpet s1 = load_bm("s1.json");
  ChainGraph loose = build_chain_graph(s1, 2, 1.0);
  auto loose_labels = graph_components(loose);
  for (auto label : loose_labels) CHECK(label == 0);

  ChainGraph tight = build_chain_graph(s1, 2, 0.0);
  auto tight_labels = graph_components(tight);
  std::uint32_t classes = 0;
  for (auto label : tight_labels) classes = std::max(classes, label + 1);
  CHECK(classes > 1);
}

TEST_CASE("escape_test distinguishes short and long chains") {
  BMCarpet full = load_bm("grid43.json");
  // The full grid is one touching chain: it escapes any radius below its
  // diameter even at delta = 0.
  CHECK(escape_test(full, {0, 0, 2}, 0.3, 0.0));
  // No center lies farther than the diagonal, so radius 2 cannot be beaten.
  CHECK_FALSE(escape_test(full, {0, 0, 2}, 2.0, 0.0));

  BMCarpet s1 = load_bm("s1.json");
  // At delta = 0 the start's touching component stays near the start.
  CHECK_FALSE(escape_test(s1, {0, 2, 1}, 0.9, 0.0));
  // A generous delta chains across the whole square.
  CHECK(escape_test(s1, {0, 2, 1}, 0.9, 0.5));
}

TEST_CASE("escape_test guards") {
  BMCarpet s1 = load_bm("s1.json");
  CHECK_THROWS_AS(escape_test(s1, {0, 2, 0}, 0.5, 0.1), CarpetError);
  CHECK_THROWS_AS(escape_test(s1, {0, 2, 1}, -1.0, 0.1), CarpetError);
  CHECK_THROWS_AS(escape_test(s1, {0, 2, 1}, 0.5, -0.1), CarpetError);
  // (1, 1) is not a carpet cell.
  try {
    escape_test(s1, {1, 1, 1}, 0.5, 0.1);
    FAIL("expected a rejection");
  } catch (const CarpetError& e) {
    CHECK(e.code() == Err::OuterMissesCarpet);
  }
  // x beyond the level-1 grid.
  CHECK_THROWS_AS(escape_test(s1, {4, 0, 1}, 0.5, 0.1), CarpetError);
}

TEST_CASE("classification of the disconnected fixture") {
  BMCarpet s1 = load_bm("s1.json");
  DisconnectionReport report = classify_uniform_disconnection(s1, 3);
  CHECK(report.verdict == DisconnectionVerdict::UniformlyDisconnected);
  CHECK(report.violations.empty());
  CHECK_FALSE(report.witness_rows_full);
  CHECK_FALSE(report.witness_cols_full);
  REQUIRE(report.ladder.size() == 1);
  const LadderStat& rung = report.ladder[0];
  CHECK(rung.k_hat == 3);
  // radius = 2 n^2 m^-3 = 32/27; checked step radius / (4 m n^3) = radius/768.
  CHECK(rung.radius == doctest::Approx(32.0 / 27).epsilon(1e-12));
  CHECK(rung.delta_checked == doctest::Approx(32.0 / 27 / 768).epsilon(1e-12));
  CHECK(rung.exhaustive);
  CHECK(rung.cells_checked == 78125);  // 5^7 cells swept
  CHECK(rung.min_ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rung.max_ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.samples.size() == 8);
  std::size_t escaped = 0;
  for (const auto& sample : report.samples) {
    if (sample.no_escape_at_budget) {
      // A central start can see every cell within this rung's radius, so
      // even delta = radius finds nothing beyond it.
      CHECK(sample.ratio == 0.0);
      continue;
    }
    ++escaped;
    CHECK(sample.ratio >= 1.0);
    CHECK(sample.delta_star * sample.ratio ==
          doctest::Approx(sample.radius).epsilon(1e-12));
  }
  CHECK(escaped > 0);
}

TEST_CASE("classification is deterministic") {
  BMCarpet s1 = load_bm("s1.json");
  DisconnectionReport first = classify_uniform_disconnection(s1, 3);
  DisconnectionReport second = classify_uniform_disconnection(s1, 3);
  REQUIRE(first.samples.size() == second.samples.size());
  for (std::size_t i = 0; i < first.samples.size(); ++i) {
    CHECK(first.samples[i].start.x == second.samples[i].start.x);
    CHECK(first.samples[i].delta_star == second.samples[i].delta_star);
  }
}

TEST_CASE("full-axis carpets short-circuit to the minimal witness") {
  DisconnectionReport s2 = classify_uniform_disconnection(load_bm("s2.json"), 4);
  CHECK(s2.verdict == DisconnectionVerdict::MinimalWitness);
  CHECK(s2.witness_rows_full);
  CHECK_FALSE(s2.witness_cols_full);
  CHECK(s2.witness.cy_digits == std::vector<unsigned>{0, 1, 2});
  CHECK(s2.ladder.empty());

  DisconnectionReport full =
      classify_uniform_disconnection(load_bm("grid43.json"), 4);
  CHECK(full.verdict == DisconnectionVerdict::MinimalWitness);
  CHECK(full.witness_rows_full);
  CHECK(full.witness_cols_full);
}

TEST_CASE("classification guards") {
  CHECK_THROWS_AS(classify_uniform_disconnection(load_bm("sierpinski.json"), 4),
                  CarpetError);
  BMCarpet s1 = load_bm("s1.json");
  CHECK_THROWS_AS(classify_uniform_disconnection(s1, 2), CarpetError);
  CHECK_THROWS_AS(classify_uniform_disconnection(s1, 10), CarpetError);
}

TEST_CASE("word-level escape samples for the nonlinear family") {
  LGCarpet lg = load_lg("lg1.json");
  std::vector<EscapeSample> samples = lg_escape_samples(lg, 4);
  CHECK(samples.size() == 16);
  for (const auto& sample : samples) {
    CHECK(sample.radius == doctest::Approx(0.25).epsilon(1e-12));
    if (!sample.no_escape_at_budget) {
      CHECK(sample.delta_star > 0.0);
      CHECK(sample.ratio >= 1.0);
    }
  }

  std::vector<EscapeSample> again = lg_escape_samples(lg, 4);
  REQUIRE(again.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples[i].start.x == again[i].start.x);
    CHECK(samples[i].delta_star == again[i].delta_star);
  }

  CHECK_THROWS_AS(lg_escape_samples(lg, 0), CarpetError);
  CHECK_THROWS_AS(lg_escape_samples(lg, 21), CarpetError);
  CHECK_THROWS_AS(lg_escape_samples(lg, 12), CarpetError);  // 3^12 words
}
