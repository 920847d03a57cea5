#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

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

/// Random length-k word of carpet cells.
std::vector<std::pair<unsigned, unsigned>> random_word(const BMCarpet& carpet,
                                                       unsigned k,
                                                       std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, carpet.cells.size() - 1);
  std::vector<std::pair<unsigned, unsigned>> word;
  for (unsigned i = 0; i < k; ++i) word.push_back(carpet.cells[pick(rng)]);
  return word;
}

ApproxSquare pinned_outer(const BMCarpet& carpet, unsigned k_outer) {
  TangentSpec spec = tangent_digits(carpet);
  ApproxSquare outer;
  outer.level = k_outer;
  outer.x_digits.assign(level_split(k_outer, carpet.n, carpet.m), spec.x_star);
  outer.y_digits.assign(k_outer, spec.y_star);
  return outer;
}

}  // namespace

TEST_CASE("level_split brackets m^k between consecutive powers of n") {
  std::vector<std::pair<unsigned, unsigned>> grids = {
      {4, 3}, {5, 3}, {12, 11}, {10, 2}, {9, 8}};
  for (auto [n, m] : grids) {
    unsigned previous = 0;
    for (unsigned k = 0; k <= 60; ++k) {
      unsigned l = level_split(k, n, m);
      BigInt mk = ipow(m, k);
      CHECK(ipow(n, l) <= mk);
      CHECK(mk < ipow(n, l + 1));
      CHECK(l >= previous);
      CHECK(l <= k);
      previous = l;
    }
  }
  CHECK(level_split(0, 4, 3) == 0);
  CHECK_THROWS_AS(level_split(3, 3, 3), CarpetError);
}

TEST_CASE("approx_square_from_word extracts digit prefixes") {
  BMCarpet s1 = load_bm("s1.json");
  ApproxSquare square =
      approx_square_from_word(s1, {{1, 0}, {2, 2}, {3, 0}});
  // k = 3 on a 4x3 grid: 4^2 = 16 <= 27 < 64, so l = 2.
  CHECK(square.level == 3);
  CHECK(square.x_digits == std::vector<unsigned>{1, 2});
  CHECK(square.y_digits == std::vector<unsigned>{0, 2, 0});

  CHECK_THROWS_AS(approx_square_from_word(s1, {{1, 1}}), CarpetError);
}

TEST_CASE("three counting routes agree on the fixtures") {
  for (const char* name : {"s1.json", "s2.json"}) {
    BMCarpet carpet = load_bm(name);
    for (unsigned k = 1; k <= 7; ++k) {
      BigInt closed = approx_square_count(carpet, k);
      CHECK(closed == approx_square_count_enumerated(carpet, k));
      CHECK(closed == approx_square_count_brute(carpet, k));
    }
  }
}

TEST_CASE("three counting routes agree on random carpets") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 25; ++trial) {
    BMCarpet carpet = random_bm(rng);
    for (unsigned k = 1; k <= 4; ++k) {
      if (ipow(carpet.cells.size(), k) > BigInt(2'000'000)) break;
      BigInt closed = approx_square_count(carpet, k);
      CHECK(closed == approx_square_count_enumerated(carpet, k));
      CHECK(closed == approx_square_count_brute(carpet, k));
    }
  }
}

TEST_CASE("square counts match the closed-form goldens") {
  BMCarpet s1 = load_bm("s1.json");
  CHECK(approx_square_count(s1, 6) == BigInt(2500));
  CHECK(approx_square_count(s1, 12) == BigInt(15'625'000));
  BMCarpet s2 = load_bm("s2.json");
  CHECK(approx_square_count(s2, 6) == BigInt(5625));
  CHECK(approx_square_count(s2, 12) == BigInt(31'640'625));
}

TEST_CASE("covering routes agree and respect the two-scale bound") {
  std::mt19937_64 rng(2718);
  for (const char* name : {"s1.json", "s2.json"}) {
    BMCarpet carpet = load_bm(name);
    RowStats stats = bm_row_stats(carpet);
    for (int trial = 0; trial < 12; ++trial) {
      unsigned k_outer = 1 + unsigned(rng() % 3);
      unsigned k = k_outer + 1 + unsigned(rng() % 3);
      ApproxSquare outer =
          approx_square_from_word(carpet, random_word(carpet, k_outer, rng));
      BigInt count = covering_count(carpet, outer, k);
      CHECK(count == covering_count_enumerated(carpet, outer, k));
      CHECK(count == covering_count_brute(carpet, outer, k));
      unsigned l = level_split(k, carpet.n, carpet.m);
      unsigned lp = level_split(k_outer, carpet.n, carpet.m);
      BigInt bound = ipow(stats.peak, l - lp) * ipow(stats.occupied, k - k_outer);
      CHECK(count <= bound);
    }
  }
}

TEST_CASE("the pinned outer square dominates random outers") {
  std::mt19937_64 rng(99);
  for (const char* name : {"s1.json", "s2.json"}) {
    BMCarpet carpet = load_bm(name);
    unsigned k_outer = 3;
    unsigned k = 7;
    BigInt best = covering_count(carpet, pinned_outer(carpet, k_outer), k);
    for (int trial = 0; trial < 30; ++trial) {
      ApproxSquare outer =
          approx_square_from_word(carpet, random_word(carpet, k_outer, rng));
      CHECK(covering_count(carpet, outer, k) <= best);
    }
  }
}

TEST_CASE("covering the unit square reduces to the plain count") {
  BMCarpet s1 = load_bm("s1.json");
  ApproxSquare unit;  // level 0
  for (unsigned k = 1; k <= 6; ++k) {
    CHECK(covering_count(s1, unit, k) == approx_square_count(s1, k));
  }
}

TEST_CASE("counting guardrails") {
  BMCarpet s1 = load_bm("s1.json");
  CHECK_THROWS_AS(approx_square_count_enumerated(s1, 8, 10), CarpetError);
  CHECK_THROWS_AS(approx_square_count_brute(s1, 8, 100), CarpetError);
  CHECK_THROWS_AS(approx_square_count_brute(s1, 13), CarpetError);  // 3^13 > 10^6

  ApproxSquare hollow;  // row 1 of the carpet is empty
  hollow.level = 1;
  hollow.y_digits = {1};
  CHECK_THROWS_AS(covering_count(s1, hollow, 3), CarpetError);
  try {
    covering_count(s1, hollow, 3);
  } catch (const CarpetError& e) {
    CHECK(e.code() == Err::OuterMissesCarpet);
  }

  ApproxSquare outer = pinned_outer(s1, 3);
  CHECK_THROWS_AS(covering_count(s1, outer, 2), CarpetError);  // inner < outer
}

TEST_CASE("the counting audit passes on both fixtures") {
  for (const char* name : {"s1.json", "s2.json"}) {
    BMCarpet carpet = load_bm(name);
    CountReport report = verify_counting_lemma(carpet, 6);
    CHECK(report.violations.empty());
    CHECK(report.classes_checked > 0);
    for (const auto& row : report.rows) {
      CHECK(row.total_count == approx_square_count(carpet, row.k_inner));
    }
  }
}

TEST_CASE("estimators land on the frozen goldens and true dimensions") {
  BMCarpet s1 = load_bm("s1.json");
  double mink = minkowski_estimate(s1, 6, 12);
  CHECK(mink == doctest::Approx(1.28624985633).epsilon(1e-9));
  CHECK(std::fabs(mink - bm_minkowski(s1)) < 0.05);

  std::vector<ScalePair> gaps = {{16, 20}, {20, 25}, {21, 27}, {26, 33},
                                 {26, 34}, {30, 39}, {34, 44}};
  double assouad = assouad_estimate(s1, gaps);
  CHECK(assouad == doctest::Approx(1.48807261071).epsilon(1e-9));
  double dim_a = bm_assouad(s1);
  double log_t = std::log(3.0) / std::log(3.0);
  for (const auto& gap : gaps) {
    ApproxSquare outer = pinned_outer(s1, gap.k_outer);
    double exponent = log_big(covering_count(s1, outer, gap.k_inner)) /
                      ((gap.k_inner - gap.k_outer) * std::log(3.0));
    CHECK(exponent <= dim_a + log_t / (gap.k_inner - gap.k_outer) + 1e-12);
  }

  BMCarpet s2 = load_bm("s2.json");
  std::vector<ScalePair> gaps2 = {{11, 15}, {14, 19}, {15, 21}, {18, 25},
                                  {19, 27}, {22, 31}, {24, 34}};
  CHECK(assouad_estimate(s2, gaps2) ==
        doctest::Approx(1.47319731518).epsilon(1e-9));
  CHECK(minkowski_estimate(s2, 6, 12) ==
        doctest::Approx(1.3155177462).epsilon(1e-9));

  CHECK_THROWS_AS(minkowski_estimate(s1, 5, 5), CarpetError);
  CHECK_THROWS_AS(assouad_estimate(s1, {}), CarpetError);
  CHECK_THROWS_AS(assouad_estimate(s1, {{4, 4}}), CarpetError);
}

TEST_CASE("word-level tuple counting for the nonlinear family") {
  LGCarpet lg = load_lg("lg1.json");
  BigInt previous = 0;
  for (unsigned j = 3; j <= 9; ++j) {
    Scalar eps{Rational(1, ipow(BigInt(2), j))};
    CountReport report = lg_approx_squares(lg, {}, eps);
    CHECK(report.f_star_count > previous);
    CHECK(report.normalized_ratio > 0.05);
    CHECK(report.normalized_ratio < 20.0);
    previous = report.f_star_count;
  }

  // Deterministic: same epsilon, same count.
  Scalar eps{Rational(1, 64)};
  CHECK(lg_approx_squares(lg, {}, eps).f_star_count ==
        lg_approx_squares(lg, {}, eps).f_star_count);

  // A forced outer prefix can only shrink the tuple family.
  CountReport rooted = lg_approx_squares(lg, {{1, 0}}, eps);
  CHECK(rooted.f_star_count <= lg_approx_squares(lg, {}, eps).f_star_count);

  CHECK_THROWS_AS(lg_approx_squares(lg, {{5, 0}}, eps), CarpetError);
  CHECK_THROWS_AS(
      lg_approx_squares(lg, {}, Scalar{Rational(1, ipow(BigInt(2), 40))}, 1000),
      CarpetError);
}
