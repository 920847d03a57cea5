#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "carpets/carpet.hpp"
#include "carpets/numeric.hpp"

namespace carpets {

/// The unique l with n^l <= m^k < n^(l+1), found by exact big-integer
/// comparison (floating logarithms are never trusted near the boundary).
/// Requires n > m >= 2; k = 0 yields 0.
unsigned level_split(unsigned k, unsigned n, unsigned m);

/// An approximate square at level k: a column strip of width n^-l crossed
/// with a row strip of height m^-k, l = level_split(k). The empty square
/// (level 0) is the unit square.
struct ApproxSquare {
  unsigned level = 0;
  std::vector<unsigned> x_digits;  // length level_split(level), base n
  std::vector<unsigned> y_digits;  // length level, base m
};

/// Square of the level-k prefix of a word of cells.
ApproxSquare approx_square_from_word(
    const BMCarpet& carpet,
    const std::vector<std::pair<unsigned, unsigned>>& word);

/// Number of level-k approximate squares that meet the carpet: closed form
/// |A|^l * s^(k-l) (pair choice per position up to l, row choice after).
BigInt approx_square_count(const BMCarpet& carpet, unsigned k);

/// Same count by explicit depth-first enumeration of the digit tuples, one
/// leaf per square. Throws BudgetExceeded past `budget` visited nodes.
BigInt approx_square_count_enumerated(const BMCarpet& carpet, unsigned k,
                                      std::uint64_t budget = 50'000'000);

/// Same count by the fully independent route: enumerate all words in A^k,
/// project each to its square by integer arithmetic, deduplicate. Requires
/// m^k <= 10^6 (key packing) and |A|^k <= budget words.
BigInt approx_square_count_brute(const BMCarpet& carpet, unsigned k,
                                 std::uint64_t budget = 2'000'000);

/// Number of level-k approximate squares inside `outer` that meet the
/// carpet. Closed-form product over digit positions: rows fixed by the
/// outer contribute t_y, free pair positions |A|, free row positions s.
BigInt covering_count(const BMCarpet& carpet, const ApproxSquare& outer,
                      unsigned k);

BigInt covering_count_enumerated(const BMCarpet& carpet,
                                 const ApproxSquare& outer, unsigned k,
                                 std::uint64_t budget = 50'000'000);

BigInt covering_count_brute(const BMCarpet& carpet, const ApproxSquare& outer,
                            unsigned k, std::uint64_t budget = 2'000'000);

struct CountRow {
  unsigned k_outer = 0;
  unsigned k_inner = 0;
  BigInt max_count;    // largest covering count over outer squares
  BigInt total_count;  // sum over all outer squares at k_outer
  double exponent = 0.0;  // log_m(max_count) / (k_inner - k_outer)
};

struct CountReport {
  std::vector<CountRow> rows;
  std::vector<std::string> violations;  // expected empty
  std::uint64_t classes_checked = 0;
  BigInt f_star_count;            // LG enumeration only
  double normalized_ratio = 0.0;  // |F*| / (R/eps)^(beta_x+beta_y)
};

/// For every 1 <= k' <= k <= K and every outer square (grouped by the
/// multiset of its free row digits, which determines the count), checks
///   covering <= t^(l-l') * s^(k-k')
/// and the log form with additive slack log_m t, and that the covering
/// counts over all outers sum to approx_square_count(k). Violations are
/// returned as data, not thrown.
CountReport verify_counting_lemma(const BMCarpet& carpet, unsigned K);

/// Least-squares slope of log(square count) against k log m over
/// k = k_min..k_max: the box-counting dimension estimator.
double minkowski_estimate(const BMCarpet& carpet, unsigned k_min,
                          unsigned k_max);

struct ScalePair {
  unsigned k_outer = 0;
  unsigned k_inner = 0;
};

/// Two-scale covering exponent max over the given pairs,
///   log_m(N_k) / (k - k'),
/// with the maximizing outer square built directly: every free row digit in
/// an argmax-t row (the extremal configuration of the covering bound).
double assouad_estimate(const BMCarpet& carpet,
                        const std::vector<ScalePair>& gaps);

/// Word over a nonlinear carpet's maps: (row index, column index) pairs.
using LGWord = std::vector<std::pair<std::size_t, std::size_t>>;

/// Enumerates the variable-length digit tuples whose width and height
/// products straddle epsilon (j-word ends where the width product first
/// drops below epsilon, i-word where the height product does) extending the
/// outer word's forced prefix. Returns the tuple count and its ratio to
/// (R/epsilon)^(beta_x+beta_y), R = height product of the outer word.
/// Product comparisons are exact when the carpet and epsilon are rational.
CountReport lg_approx_squares(const LGCarpet& carpet, const LGWord& outer,
                              const Scalar& epsilon,
                              std::uint64_t budget = 1'000'000);

}  // namespace carpets
