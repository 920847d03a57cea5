#include "carpets/carpet.hpp"

#include <algorithm>
#include <string>

#include "carpets/errors.hpp"

namespace carpets {

void validate_bm(BMCarpet& carpet) {
  if (carpet.m < 2)
    fail(Err::BaseOrderViolation, "need m >= 2, got m=" + std::to_string(carpet.m));
  if (carpet.n < carpet.m)
    fail(Err::BaseOrderViolation, "need n >= m, got n=" + std::to_string(carpet.n) +
                                      " m=" + std::to_string(carpet.m));
  if (carpet.cells.empty()) fail(Err::EmptyDigitSet, "carpet has no cells");
  for (auto [x, y] : carpet.cells) {
    if (x >= carpet.n || y >= carpet.m)
      fail(Err::DigitOutOfRange, "cell (" + std::to_string(x) + "," +
                                     std::to_string(y) + ") outside " +
                                     std::to_string(carpet.n) + "x" +
                                     std::to_string(carpet.m) + " grid");
  }
  std::sort(carpet.cells.begin(), carpet.cells.end());
  auto dup = std::adjacent_find(carpet.cells.begin(), carpet.cells.end());
  if (dup != carpet.cells.end())
    fail(Err::DuplicateCell, "cell (" + std::to_string(dup->first) + "," +
                                 std::to_string(dup->second) + ") repeated");
}

RowStats bm_row_stats(const BMCarpet& carpet) {
  RowStats stats;
  stats.per_row.assign(carpet.m, 0);
  for (auto [x, y] : carpet.cells) {
    (void)x;
    ++stats.per_row[y];
  }
  for (unsigned t : stats.per_row) {
    if (t > 0) ++stats.occupied;
    stats.peak = std::max(stats.peak, t);
    stats.total += t;
  }
  return stats;
}

bool LGCarpet::all_exact() const {
  for (const auto& row : rows) {
    if (!row.height.exact || !row.offset.exact) return false;
    for (const auto& col : row.cols)
      if (!col.width.exact || !col.offset.exact) return false;
  }
  return true;
}

std::size_t LGCarpet::map_count() const {
  std::size_t count = 0;
  for (const auto& row : rows) count += row.cols.size();
  return count;
}

namespace {

Scalar scalar_one() { return Scalar(Rational(1)); }
Scalar scalar_zero() { return Scalar(Rational(0)); }

bool positive(const Scalar& s) { return scalar_less(scalar_zero(), s); }

}  // namespace

void validate_lg(LGCarpet& carpet) {
  if (carpet.rows.empty()) fail(Err::EmptyDigitSet, "carpet has no rows");

  for (std::size_t i = 0; i < carpet.rows.size(); ++i) {
    auto& row = carpet.rows[i];
    std::string tag = "row " + std::to_string(i);
    if (!positive(row.height))
      fail(Err::MassViolation, tag + ": height must be positive");
    if (!scalar_less(row.height, scalar_one()))
      fail(Err::MassViolation, tag + ": height must be strictly below 1");
    if (scalar_less(row.offset, scalar_zero()))
      fail(Err::OverlapViolation, tag + ": offset must be >= 0");
    if (row.cols.empty()) fail(Err::EmptyDigitSet, tag + " has no columns");
    for (std::size_t j = 0; j < row.cols.size(); ++j) {
      auto& col = row.cols[j];
      std::string ctag = tag + " col " + std::to_string(j);
      if (!positive(col.width))
        fail(Err::MassViolation, ctag + ": width must be positive");
      if (!scalar_less(col.width, row.height))
        fail(Err::WidthNotLessThanHeight,
             ctag + ": column width must be strictly below row height");
      if (scalar_less(col.offset, scalar_zero()))
        fail(Err::OverlapViolation, ctag + ": offset must be >= 0");
      Scalar right = scalar_add(col.offset, col.width);
      if (scalar_less(scalar_one(), right))
        fail(Err::OverlapViolation, ctag + ": extends past the unit interval");
    }
    std::sort(row.cols.begin(), row.cols.end(),
              [](const LGColumn& a, const LGColumn& b) {
                return scalar_less(a.offset, b.offset);
              });
    for (std::size_t j = 0; j + 1 < row.cols.size(); ++j) {
      Scalar right = scalar_add(row.cols[j].offset, row.cols[j].width);
      if (scalar_less(row.cols[j + 1].offset, right))
        fail(Err::OverlapViolation, tag + ": columns " + std::to_string(j) +
                                        " and " + std::to_string(j + 1) + " overlap");
    }
  }

  std::sort(carpet.rows.begin(), carpet.rows.end(),
            [](const LGRow& a, const LGRow& b) {
              return scalar_less(a.offset, b.offset);
            });
  Scalar mass = scalar_zero();
  for (std::size_t i = 0; i < carpet.rows.size(); ++i) {
    const auto& row = carpet.rows[i];
    Scalar top = scalar_add(row.offset, row.height);
    if (scalar_less(scalar_one(), top))
      fail(Err::OverlapViolation,
           "row " + std::to_string(i) + ": extends past the unit interval");
    if (i + 1 < carpet.rows.size() &&
        scalar_less(carpet.rows[i + 1].offset, top))
      fail(Err::OverlapViolation, "rows " + std::to_string(i) + " and " +
                                      std::to_string(i + 1) + " overlap");
    mass = scalar_add(mass, row.height);
  }
  if (scalar_less(scalar_one(), mass))
    fail(Err::MassViolation, "row heights sum past 1");
}

LGCarpet embed_bm_as_lg(const BMCarpet& carpet) {
  if (carpet.self_similar())
    fail(Err::SelfSimilarNotEmbeddable,
         "n == m gives equal contraction in both axes; embedding requires "
         "strictly anisotropic maps");
  Rational row_h(1, carpet.m);
  Rational col_w(1, carpet.n);
  RowStats stats = bm_row_stats(carpet);

  LGCarpet out;
  for (unsigned y = 0; y < carpet.m; ++y) {
    if (stats.per_row[y] == 0) continue;
    LGRow row;
    row.height = Scalar(row_h);
    row.offset = Scalar(Rational(y, carpet.m));
    for (auto [cx, cy] : carpet.cells) {
      if (cy != y) continue;
      LGColumn col;
      col.width = Scalar(col_w);
      col.offset = Scalar(Rational(cx, carpet.n));
      row.cols.push_back(col);
    }
    out.rows.push_back(std::move(row));
  }
  validate_lg(out);
  return out;
}

}  // namespace carpets
