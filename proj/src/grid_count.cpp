#include "carpets/grid_count.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "carpets/errors.hpp"
#include "carpets/moran.hpp"

namespace carpets {

namespace {

void require_anisotropic(const BMCarpet& carpet) {
  if (carpet.n == carpet.m)
    fail(Err::SelfSimilarUnsupported,
         "approximate-square machinery needs n > m");
}

std::vector<std::vector<unsigned>> cells_by_row(const BMCarpet& carpet) {
  std::vector<std::vector<unsigned>> rows(carpet.m);
  for (auto [x, y] : carpet.cells) rows[y].push_back(x);
  return rows;
}

bool has_cell(const BMCarpet& carpet, unsigned x, unsigned y) {
  return std::binary_search(carpet.cells.begin(), carpet.cells.end(),
                            std::make_pair(x, y));
}

/// Digit-range, length, and meets-the-carpet checks for an outer square.
void check_outer(const BMCarpet& carpet, const ApproxSquare& outer,
                 const RowStats& stats) {
  unsigned lp = level_split(outer.level, carpet.n, carpet.m);
  if (outer.x_digits.size() != lp || outer.y_digits.size() != outer.level)
    fail(Err::ParseError, "outer square digit lengths do not match its level");
  for (unsigned x : outer.x_digits)
    if (x >= carpet.n) fail(Err::DigitOutOfRange, "outer x digit out of range");
  for (unsigned y : outer.y_digits)
    if (y >= carpet.m) fail(Err::DigitOutOfRange, "outer y digit out of range");
  for (unsigned i = 0; i < lp; ++i)
    if (!has_cell(carpet, outer.x_digits[i], outer.y_digits[i]))
      fail(Err::OuterMissesCarpet,
           "outer pair at position " + std::to_string(i + 1) +
               " is not a cell");
  for (unsigned i = lp; i < outer.level; ++i)
    if (stats.per_row[outer.y_digits[i]] == 0)
      fail(Err::OuterMissesCarpet,
           "outer row digit at position " + std::to_string(i + 1) +
               " is an empty row");
}

}  // namespace

unsigned level_split(unsigned k, unsigned n, unsigned m) {
  if (m < 2 || n <= m)
    fail(Err::BaseOrderViolation, "level split requires n > m >= 2");
  BigInt mk = ipow(m, k);
  BigInt nl = 1;
  unsigned l = 0;
  while (nl * n <= mk) {
    nl *= n;
    ++l;
  }
  return l;
}

ApproxSquare approx_square_from_word(
    const BMCarpet& carpet,
    const std::vector<std::pair<unsigned, unsigned>>& word) {
  require_anisotropic(carpet);
  for (auto [x, y] : word)
    if (!has_cell(carpet, x, y))
      fail(Err::OuterMissesCarpet, "word step is not a cell of the carpet");
  ApproxSquare square;
  square.level = static_cast<unsigned>(word.size());
  unsigned l = level_split(square.level, carpet.n, carpet.m);
  for (unsigned i = 0; i < l; ++i) square.x_digits.push_back(word[i].first);
  for (auto [x, y] : word) {
    (void)x;
    square.y_digits.push_back(y);
  }
  return square;
}

BigInt approx_square_count(const BMCarpet& carpet, unsigned k) {
  require_anisotropic(carpet);
  RowStats stats = bm_row_stats(carpet);
  unsigned l = level_split(k, carpet.n, carpet.m);
  return ipow(BigInt(stats.total), l) * ipow(BigInt(stats.occupied), k - l);
}

BigInt covering_count(const BMCarpet& carpet, const ApproxSquare& outer,
                      unsigned k) {
  require_anisotropic(carpet);
  if (k < outer.level)
    fail(Err::ParseError, "inner level must be at least the outer level");
  RowStats stats = bm_row_stats(carpet);
  check_outer(carpet, outer, stats);
  unsigned lp = level_split(outer.level, carpet.n, carpet.m);
  unsigned l = level_split(k, carpet.n, carpet.m);
  unsigned q = std::min(outer.level, l);

  BigInt result = 1;
  for (unsigned i = lp; i < q; ++i)
    result *= stats.per_row[outer.y_digits[i]];
  if (outer.level <= l)
    result *= ipow(BigInt(stats.total), l - outer.level) *
              ipow(BigInt(stats.occupied), k - l);
  else
    result *= ipow(BigInt(stats.occupied), k - outer.level);
  return result;
}

namespace {

/// Shared enumerator behind the *_enumerated counts: walks the per-position
/// choice tree (fixed-row pairs, then free pairs, then free rows) and counts
/// leaves, one leaf per approximate square.
BigInt enumerate_squares(const BMCarpet& carpet, const ApproxSquare& outer,
                         unsigned k, std::uint64_t budget) {
  require_anisotropic(carpet);
  if (k < outer.level)
    fail(Err::ParseError, "inner level must be at least the outer level");
  RowStats stats = bm_row_stats(carpet);
  check_outer(carpet, outer, stats);
  auto rows = cells_by_row(carpet);
  std::vector<unsigned> occupied;
  for (unsigned y = 0; y < carpet.m; ++y)
    if (stats.per_row[y] > 0) occupied.push_back(y);

  unsigned lp = level_split(outer.level, carpet.n, carpet.m);
  unsigned l = level_split(k, carpet.n, carpet.m);
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;

  std::function<void(unsigned)> walk = [&](unsigned pos) {
    if (++nodes > budget)
      fail(Err::BudgetExceeded, "square enumeration passed " +
                                    std::to_string(budget) + " nodes");
    if (pos == k) {
      ++leaves;
      return;
    }
    if (pos < l) {
      if (pos < outer.level) {
        // pair position with the row pinned by the outer square
        for (unsigned x : rows[outer.y_digits[pos]]) {
          (void)x;
          walk(pos + 1);
        }
      } else {
        for (std::size_t c = 0; c < carpet.cells.size(); ++c) walk(pos + 1);
      }
    } else {
      if (pos < outer.level) {
        walk(pos + 1);  // row pinned, occupancy already verified
      } else {
        for (unsigned y : occupied) {
          (void)y;
          walk(pos + 1);
        }
      }
    }
  };
  walk(lp);
  return BigInt(leaves);
}

/// Shared word-projection oracle: enumerate words of cells, project each to
/// its square key by integer arithmetic, count distinct keys.
BigInt project_words(const BMCarpet& carpet, const ApproxSquare& outer,
                     unsigned k, std::uint64_t budget) {
  require_anisotropic(carpet);
  if (k < outer.level)
    fail(Err::ParseError, "inner level must be at least the outer level");
  RowStats stats = bm_row_stats(carpet);
  check_outer(carpet, outer, stats);

  BigInt mk = ipow(carpet.m, k);
  if (mk > 1'000'000)
    fail(Err::BudgetExceeded, "word projection limited to m^k <= 10^6");
  unsigned lp = level_split(outer.level, carpet.n, carpet.m);
  unsigned l = level_split(k, carpet.n, carpet.m);

  BigInt words = 1;
  for (unsigned i = lp; i < outer.level; ++i)
    words *= stats.per_row[outer.y_digits[i]];
  words *= ipow(BigInt(carpet.cells.size()), k - outer.level);
  if (words > budget)
    fail(Err::BudgetExceeded,
         "word projection would enumerate " + words.str() + " words");

  auto rows = cells_by_row(carpet);
  std::uint64_t m_to_k = static_cast<std::uint64_t>(mk);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(words) * 2);

  // Horner accumulation: X over the first l x digits, Y over all k y digits.
  std::function<void(unsigned, std::uint64_t, std::uint64_t)> walk =
      [&](unsigned pos, std::uint64_t X, std::uint64_t Y) {
        if (pos == k) {
          seen.insert(X * m_to_k + Y);
          return;
        }
        auto step = [&](unsigned x, unsigned y) {
          std::uint64_t nX = pos < l ? X * carpet.n + x : X;
          walk(pos + 1, nX, Y * carpet.m + y);
        };
        if (pos < lp) {
          step(outer.x_digits[pos], outer.y_digits[pos]);
        } else if (pos < outer.level) {
          unsigned y = outer.y_digits[pos];
          for (unsigned x : rows[y]) step(x, y);
        } else {
          for (auto [x, y] : carpet.cells) step(x, y);
        }
      };
  walk(0, 0, 0);
  return BigInt(seen.size());
}

ApproxSquare unit_square() { return ApproxSquare{}; }

}  // namespace

BigInt approx_square_count_enumerated(const BMCarpet& carpet, unsigned k,
                                      std::uint64_t budget) {
  return enumerate_squares(carpet, unit_square(), k, budget);
}

BigInt approx_square_count_brute(const BMCarpet& carpet, unsigned k,
                                 std::uint64_t budget) {
  return project_words(carpet, unit_square(), k, budget);
}

BigInt covering_count_enumerated(const BMCarpet& carpet,
                                 const ApproxSquare& outer, unsigned k,
                                 std::uint64_t budget) {
  return enumerate_squares(carpet, outer, k, budget);
}

BigInt covering_count_brute(const BMCarpet& carpet, const ApproxSquare& outer,
                            unsigned k, std::uint64_t budget) {
  return project_words(carpet, outer, k, budget);
}

CountReport verify_counting_lemma(const BMCarpet& carpet, unsigned K) {
  require_anisotropic(carpet);
  RowStats stats = bm_row_stats(carpet);
  CountReport report;

  // Group occupied rows by entry count: a covering count depends only on
  // the multiset of t values of the outer's free row digits.
  std::vector<std::pair<unsigned, unsigned>> groups;  // (t value, row count)
  {
    std::vector<unsigned> values;
    for (unsigned t : stats.per_row)
      if (t > 0) values.push_back(t);
    std::sort(values.begin(), values.end());
    for (unsigned v : values) {
      if (!groups.empty() && groups.back().first == v)
        ++groups.back().second;
      else
        groups.emplace_back(v, 1);
    }
  }

  double log_n = std::log(double(carpet.n));
  double log_m = std::log(double(carpet.m));
  double log_t = std::log(double(stats.peak));
  double log_s = std::log(double(stats.occupied));

  auto factorial = [](unsigned v) {
    BigInt f = 1;
    for (unsigned i = 2; i <= v; ++i) f *= i;
    return f;
  };

  for (unsigned kp = 1; kp <= K; ++kp) {
    for (unsigned k = kp; k <= K; ++k) {
      unsigned lp = level_split(kp, carpet.n, carpet.m);
      unsigned l = level_split(k, carpet.n, carpet.m);
      unsigned q = std::min(kp, l);
      unsigned L = q - lp;  // free row digits that scale the count

      BigInt tail = kp <= l
                        ? ipow(BigInt(stats.total), l - kp) *
                              ipow(BigInt(stats.occupied), k - l)
                        : ipow(BigInt(stats.occupied), k - kp);
      BigInt bound = ipow(BigInt(stats.peak), l - lp) *
                     ipow(BigInt(stats.occupied), k - kp);
      double log_rhs =
          (k - kp) * (log_t / log_n + log_s / log_m) + log_t / log_m;
      // outers sharing a digit class: free pair prefix, then the row
      // digits beyond position q, which do not affect the count
      BigInt outer_base = ipow(BigInt(stats.total), lp) *
                          ipow(BigInt(stats.occupied), kp - q);

      BigInt total = 0;
      BigInt max_count = 0;
      std::vector<unsigned> pick(groups.size(), 0);

      std::function<void(std::size_t, unsigned)> compose =
          [&](std::size_t g, unsigned left) {
            if (g + 1 == groups.size()) {
              pick[g] = left;
            } else {
              for (unsigned take = 0; take <= left; ++take) {
                pick[g] = take;
                compose(g + 1, left - take);
              }
              return;
            }
            ++report.classes_checked;
            BigInt cover = tail;
            BigInt tuples = factorial(L);
            for (std::size_t i = 0; i < groups.size(); ++i) {
              cover *= ipow(BigInt(groups[i].first), pick[i]);
              tuples *= ipow(BigInt(groups[i].second), pick[i]);
              tuples /= factorial(pick[i]);
            }
            total += outer_base * tuples * cover;
            max_count = std::max(max_count, cover);
            if (cover > bound)
              report.violations.push_back(
                  "count above t^(l-l') s^(k-k') at k'=" + std::to_string(kp) +
                  " k=" + std::to_string(k));
            if (cover > 1 && log_big(cover) / log_m > log_rhs + 1e-9)
              report.violations.push_back("log-form bound broken at k'=" +
                                          std::to_string(kp) +
                                          " k=" + std::to_string(k));
          };
      if (groups.empty())
        fail(Err::EmptyDigitSet, "carpet has no occupied rows");
      compose(0, L);

      if (total != approx_square_count(carpet, k))
        report.violations.push_back(
            "covering counts over all outers do not sum to the square count "
            "at k'=" +
            std::to_string(kp) + " k=" + std::to_string(k));

      CountRow row;
      row.k_outer = kp;
      row.k_inner = k;
      row.max_count = max_count;
      row.total_count = total;
      row.exponent =
          k > kp ? log_big(max_count) / ((k - kp) * log_m) : 0.0;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

double minkowski_estimate(const BMCarpet& carpet, unsigned k_min,
                          unsigned k_max) {
  require_anisotropic(carpet);
  if (k_min >= k_max) fail(Err::ParseError, "estimator needs k_min < k_max");
  std::vector<double> xs, ys;
  for (unsigned k = k_min; k <= k_max; ++k) {
    xs.push_back(k * std::log(double(carpet.m)));
    ys.push_back(log_big(approx_square_count(carpet, k)));
  }
  return least_squares_slope(xs, ys);
}

double assouad_estimate(const BMCarpet& carpet,
                        const std::vector<ScalePair>& gaps) {
  require_anisotropic(carpet);
  if (gaps.empty()) fail(Err::ParseError, "no scale pairs given");
  RowStats stats = bm_row_stats(carpet);
  unsigned y_star = 0;
  while (stats.per_row[y_star] != stats.peak) ++y_star;
  unsigned x_star = carpet.n;
  for (auto [x, y] : carpet.cells)
    if (y == y_star) {
      x_star = std::min(x_star, x);
    }

  double best = 0.0;
  for (const auto& pair : gaps) {
    if (pair.k_inner <= pair.k_outer)
      fail(Err::ParseError, "scale pair needs k > k'");
    ApproxSquare outer;
    outer.level = pair.k_outer;
    unsigned lp = level_split(pair.k_outer, carpet.n, carpet.m);
    outer.x_digits.assign(lp, x_star);
    outer.y_digits.assign(pair.k_outer, y_star);
    BigInt count = covering_count(carpet, outer, pair.k_inner);
    double exponent = log_big(count) /
                      ((pair.k_inner - pair.k_outer) *
                       std::log(double(carpet.m)));
    best = std::max(best, exponent);
  }
  return best;
}

namespace {

struct LGEnumerator {
  const LGCarpet& carpet;
  const LGWord& outer;
  std::size_t l_outer = 0;
  bool exact = false;
  Rational eps_rat;
  double eps_val = 0.0;
  std::uint64_t tuple_budget = 0;
  std::uint64_t node_budget = 0;
  std::uint64_t tuples = 0;
  std::uint64_t nodes = 0;

  bool below(const Scalar& product) const {
    if (exact) return product.rat < eps_rat;
    return product.value < eps_val;
  }

  void bump() {
    if (++nodes > node_budget)
      fail(Err::BudgetExceeded, "tuple enumeration walked too many nodes");
  }

  void complete() {
    if (++tuples > tuple_budget)
      fail(Err::BudgetExceeded,
           "tuple count passed the cap of " + std::to_string(tuple_budget));
  }

  // One pair appended at `pos` (0-based); the j-word ends at the position
  // where the width product first drops below epsilon, the i-word where the
  // height product does. Width < height per map keeps the width product
  // crossing first, so the pair phase always precedes the row phase.
  void pair_step(std::size_t pos, const Scalar& pa, const Scalar& pb,
                 std::size_t row, std::size_t col) {
    bump();
    Scalar npa = scalar_mul(pa, carpet.rows[row].cols[col].width);
    Scalar npb = scalar_mul(pb, carpet.rows[row].height);
    if (below(npa)) {
      if (below(npb))
        complete();
      else
        row_phase(pos + 1, npb);
    } else {
      pair_phase(pos + 1, npa, npb);
    }
  }

  void pair_phase(std::size_t pos, const Scalar& pa, const Scalar& pb) {
    if (pos < l_outer) {
      pair_step(pos, pa, pb, outer[pos].first, outer[pos].second);
    } else if (pos < outer.size()) {
      std::size_t row = outer[pos].first;
      for (std::size_t col = 0; col < carpet.rows[row].cols.size(); ++col)
        pair_step(pos, pa, pb, row, col);
    } else {
      for (std::size_t row = 0; row < carpet.rows.size(); ++row)
        for (std::size_t col = 0; col < carpet.rows[row].cols.size(); ++col)
          pair_step(pos, pa, pb, row, col);
    }
  }

  void row_step(std::size_t pos, const Scalar& pb, std::size_t row) {
    bump();
    Scalar npb = scalar_mul(pb, carpet.rows[row].height);
    if (below(npb))
      complete();
    else
      row_phase(pos + 1, npb);
  }

  void row_phase(std::size_t pos, const Scalar& pb) {
    if (pos < outer.size()) {
      row_step(pos, pb, outer[pos].first);
    } else {
      for (std::size_t row = 0; row < carpet.rows.size(); ++row)
        row_step(pos, pb, row);
    }
  }
};

}  // namespace

CountReport lg_approx_squares(const LGCarpet& carpet, const LGWord& outer,
                              const Scalar& epsilon, std::uint64_t budget) {
  for (auto [row, col] : outer) {
    if (row >= carpet.rows.size() || col >= carpet.rows[row].cols.size())
      fail(Err::DigitOutOfRange, "outer word indexes a missing map");
  }
  bool exact = carpet.all_exact() && epsilon.exact;

  Scalar one(Rational(1));
  Scalar big_r = one;
  for (auto [row, col] : outer) {
    (void)col;
    big_r = scalar_mul(big_r, carpet.rows[row].height);
  }
  Scalar zero(Rational(0));
  if (!scalar_less(zero, epsilon) || !scalar_less(epsilon, big_r))
    fail(Err::ParseError,
         "epsilon must lie strictly between 0 and the outer word's height "
         "product");

  // Maximal prefix of the outer word whose width product still dominates
  // the outer height product: those column choices are forced.
  std::size_t l_outer = 0;
  {
    Scalar pa = one;
    for (std::size_t pos = 0; pos < outer.size(); ++pos) {
      pa = scalar_mul(pa, carpet.rows[outer[pos].first]
                              .cols[outer[pos].second]
                              .width);
      bool dominates = exact ? pa.rat >= big_r.rat : pa.value >= big_r.value;
      if (dominates)
        l_outer = pos + 1;
      else
        break;
    }
  }

  LGEnumerator walker{carpet, outer};
  walker.l_outer = l_outer;
  walker.exact = exact;
  if (exact) walker.eps_rat = epsilon.rat;
  walker.eps_val = epsilon.value;
  walker.tuple_budget = budget;
  walker.node_budget = budget * 20;
  walker.pair_phase(0, one, one);

  CountReport report;
  report.f_star_count = walker.tuples;
  report.classes_checked = walker.nodes;
  double beta = lg_beta_x(carpet).value + lg_beta_y(carpet);
  report.normalized_ratio =
      double(walker.tuples) /
      std::pow(big_r.value / epsilon.value, beta);
  return report;
}

}  // namespace carpets
