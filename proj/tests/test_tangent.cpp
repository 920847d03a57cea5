#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "carpets/dimensions.hpp"
#include "carpets/errors.hpp"
#include "carpets/grid_count.hpp"
#include "carpets/moran.hpp"
#include "carpets/tangent.hpp"
#include "test_support.hpp"

using namespace carpets;
using namespace carpets::testing;

namespace {

/// Zoom window computed the slow way: filter every length-(k+r) cell word,
/// keep those pinned to the tangent column, and read the relative digits.
CellSet brute_zoom(const BMCarpet& carpet, unsigned k, unsigned r) {
  TangentSpec spec = tangent_digits(carpet);
  unsigned l = level_split(k, carpet.n, carpet.m);
  CellSet out;
  out.nx = 1;
  for (unsigned i = 0; i < k - l + r; ++i) out.nx *= carpet.n;
  out.ny = 1;
  for (unsigned i = 0; i < r; ++i) out.ny *= carpet.m;
  out.width = Rational(ipow(carpet.m, k), ipow(carpet.n, l));

  unsigned len = k + r;
  std::vector<std::size_t> idx(len, 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  while (true) {
    bool keep = true;
    for (unsigned i = 0; i < len && keep; ++i) {
      auto [x, y] = carpet.cells[idx[i]];
      if (i < l && x != spec.x_star) keep = false;
      if (i < k && y != spec.y_star) keep = false;
    }
    if (keep) {
      std::uint64_t cx = 0, cy = 0;
      for (unsigned i = l; i < len; ++i) cx = cx * carpet.n + carpet.cells[idx[i]].first;
      for (unsigned i = k; i < len; ++i) cy = cy * carpet.m + carpet.cells[idx[i]].second;
      cells.emplace_back(cx, cy);
    }
    unsigned pos = len;
    while (pos > 0 && ++idx[pos - 1] == carpet.cells.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  out.cells = std::move(cells);
  return out;
}

}  // namespace

TEST_CASE("tangent digits of the fixtures") {
  TangentSpec s1 = tangent_digits(load_bm("s1.json"));
  CHECK(s1.y_star == 2);
  CHECK(s1.x_star == 0);
  CHECK(s1.cx_digits == std::vector<unsigned>{0, 2, 3});
  CHECK(s1.cy_digits == std::vector<unsigned>{0, 2});
  CHECK(s1.a_prime.size() == 6);

  TangentSpec s2 = tangent_digits(load_bm("s2.json"));
  CHECK(s2.y_star == 0);
  CHECK(s2.x_star == 0);
  CHECK(s2.cx_digits == std::vector<unsigned>{0, 4});
  CHECK(s2.cy_digits == std::vector<unsigned>{0, 1, 2});
  CHECK(s2.a_prime.size() == 6);
}

TEST_CASE("the tangent carpet is uniform with the source's peak structure") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    BMCarpet source = random_bm(rng);
    TangentSpec spec = tangent_digits(source);
    RowStats stats = bm_row_stats(source);
    CHECK(spec.cx_digits.size() == stats.peak);
    CHECK(spec.cy_digits.size() == stats.occupied);
    BMCarpet tangent = tangent_carpet(spec, source.n, source.m);
    CHECK(tangent.cells.size() == std::size_t(stats.peak) * stats.occupied);
    DimensionReport report = dimension_report(tangent);
    CHECK((report.flags & kUniformFibers) != 0);
    CHECK(bm_minkowski(tangent) ==
          doctest::Approx(bm_assouad(source)).epsilon(1e-12));
  }
}

TEST_CASE("taking the tangent twice changes nothing") {
  for (const char* name : {"s1.json", "s2.json", "grid43.json"}) {
    BMCarpet source = load_bm(name);
    BMCarpet first = tangent_carpet(tangent_digits(source), source.n, source.m);
    BMCarpet second = tangent_carpet(tangent_digits(first), first.n, first.m);
    CHECK(first.cells == second.cells);
  }
}

TEST_CASE("zoom_window matches the brute-force word filter") {
  BMCarpet s1 = load_bm("s1.json");
  for (unsigned k : {1u, 2u, 3u}) {
    for (unsigned r : {1u, 2u}) {
      CellSet fast = zoom_window(s1, k, r);
      CellSet slow = brute_zoom(s1, k, r);
      CHECK(fast.nx == slow.nx);
      CHECK(fast.ny == slow.ny);
      CHECK(fast.width == slow.width);
      CHECK(fast.cells == slow.cells);
    }
  }
  BMCarpet s2 = load_bm("s2.json");
  CellSet fast = zoom_window(s2, 2, 2);
  CellSet slow = brute_zoom(s2, 2, 2);
  CHECK(fast.cells == slow.cells);
  CHECK(fast.width == Rational(9, 5));
}

TEST_CASE("zoom_window guards its inputs and budget") {
  BMCarpet s1 = load_bm("s1.json");
  CHECK_THROWS_AS(zoom_window(s1, 3, 0), CarpetError);
  CHECK_THROWS_AS(zoom_window(s1, 3, 3, 10), CarpetError);
}

TEST_CASE("product_cell_set enumerates the digit product") {
  BMCarpet s1 = load_bm("s1.json");
  TangentSpec spec = tangent_digits(s1);
  CellSet prod = product_cell_set(spec, s1.n, s1.m, 1, 2);
  CHECK(prod.nx == 64);  // 4^3
  CHECK(prod.ny == 9);   // 3^2
  CHECK(prod.width == Rational(1));
  CHECK(prod.cells.size() == 27 * 4);  // |cx|^3 * |cy|^2

  // Independent enumeration of the same product.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> expect;
  for (unsigned a : spec.cx_digits)
    for (unsigned b : spec.cx_digits)
      for (unsigned c : spec.cx_digits)
        for (unsigned d : spec.cy_digits)
          for (unsigned e : spec.cy_digits)
            expect.emplace_back((std::uint64_t(a) * 4 + b) * 4 + c,
                                std::uint64_t(d) * 3 + e);
  std::sort(expect.begin(), expect.end());
  CHECK(prod.cells == expect);
}

TEST_CASE("normalization only relabels the ambient width") {
  BMCarpet s1 = load_bm("s1.json");
  CellSet zoom = zoom_window(s1, 2, 2);
  CellSet flat = normalized(zoom);
  CHECK(flat.width == Rational(1));
  CHECK(flat.nx == zoom.nx);
  CHECK(flat.cells == zoom.cells);
}

TEST_CASE("hausdorff_distance on hand-checked configurations") {
  CellSet left;
  left.nx = 2;
  left.ny = 2;
  left.cells = {{0, 0}};
  CellSet right = left;
  right.cells = {{1, 0}};
  // Centers (0.25, 0.25) and (0.75, 0.25).
  CHECK(hausdorff_distance(left, right) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hausdorff_distance(left, left) == 0.0);

  CellSet both = left;
  both.cells = {{0, 0}, {1, 0}};
  // Directed distances differ; the symmetric value is their max.
  CHECK(hausdorff_distance(left, both) == doctest::Approx(0.5).epsilon(1e-12));

  CellSet empty_a, empty_b;
  CHECK(hausdorff_distance(empty_a, empty_b) == 0.0);
}

TEST_CASE("hausdorff_distance is symmetric on random sets") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    CellSet a, b;
    a.nx = b.nx = 32;
    a.ny = b.ny = 16;
    for (int i = 0; i < 40; ++i) {
      a.cells.emplace_back(rng() % 32, rng() % 16);
      b.cells.emplace_back(rng() % 32, rng() % 16);
    }
    auto tidy = [](CellSet& s) {
      std::sort(s.cells.begin(), s.cells.end());
      s.cells.erase(std::unique(s.cells.begin(), s.cells.end()),
                    s.cells.end());
    };
    tidy(a);
    tidy(b);
    CHECK(hausdorff_distance(a, b) ==
          doctest::Approx(hausdorff_distance(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("hausdorff_distance rejects mismatched frames") {
  CellSet a, b;
  a.nx = 4;
  b.nx = 8;
  a.cells = {{0, 0}};
  b.cells = {{0, 0}};
  CHECK_THROWS_AS(hausdorff_distance(a, b), CarpetError);
  b.nx = 4;
  b.width = Rational(2);
  CHECK_THROWS_AS(hausdorff_distance(a, b), CarpetError);
  b.width = Rational(1);
  b.cells.clear();
  try {
    hausdorff_distance(a, b);
    FAIL("expected a mismatch error");
  } catch (const CarpetError& e) {
    CHECK(e.code() == Err::AmbientMismatch);
  }
}

TEST_CASE("zoom windows converge to the product at rate m/n") {
  BMCarpet s2 = load_bm("s2.json");
  ConvergenceReport report = verify_tangent_convergence(s2, 8);
  CHECK(report.violations.empty());
  REQUIRE(report.rows.size() == 8);
  for (const auto& row : report.rows) {
    CHECK(row.distance <= row.bound + row.slack);
    CHECK(row.bound == doctest::Approx(2.0 * std::pow(0.6, row.k)));
  }
  CHECK(std::fabs(report.fitted_ratio - 0.6) < 0.1);

  BMCarpet s1 = load_bm("s1.json");
  ConvergenceReport tighter = verify_tangent_convergence(s1, 8);
  CHECK(tighter.violations.empty());
  CHECK(std::fabs(tighter.fitted_ratio - 0.75) < 0.1);
}

TEST_CASE("a product carpet is its own tangent at every scale") {
  BMCarpet s1 = load_bm("s1.json");
  BMCarpet product = tangent_carpet(tangent_digits(s1), s1.n, s1.m);
  ConvergenceReport report = verify_tangent_convergence(product, 6);
  CHECK(report.violations.empty());
  for (const auto& row : report.rows) {
    CHECK(row.distance <= row.slack + 1e-12);
  }
}

TEST_CASE("nonlinear tangent generators carry the fiber roots") {
  LGCarpet lg = load_lg("lg1.json");
  LGTangent tangent = lg_tangent(lg);
  CHECK(tangent.row_star == 1);
  CHECK(tangent.x_generators.size() == 2);
  CHECK(tangent.y_generators.size() == 2);

  MoranProblem horizontal;
  for (const auto& gen : tangent.x_generators) {
    horizontal.ratios.push_back(gen.ratio.value);
  }
  CHECK(moran_root(horizontal) ==
        doctest::Approx(lg_beta_x(lg).value).epsilon(1e-12));

  MoranProblem vertical;
  for (const auto& gen : tangent.y_generators) {
    vertical.ratios.push_back(gen.ratio.value);
  }
  CHECK(moran_root(vertical) == doctest::Approx(lg_beta_y(lg)).epsilon(1e-12));
}
