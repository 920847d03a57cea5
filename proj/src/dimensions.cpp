#include "carpets/dimensions.hpp"

#include <algorithm>
#include <cmath>

#include "carpets/errors.hpp"
#include "carpets/numeric.hpp"

namespace carpets {

double bm_hausdorff(const BMCarpet& carpet) {
  RowStats stats = bm_row_stats(carpet);
  double theta = std::log(double(carpet.m)) / std::log(double(carpet.n));
  double sum = 0.0;
  for (unsigned t : stats.per_row)
    if (t > 0) sum += std::pow(double(t), theta);
  return std::log(sum) / std::log(double(carpet.m));
}

double bm_minkowski(const BMCarpet& carpet) {
  RowStats stats = bm_row_stats(carpet);
  return std::log(double(stats.occupied)) / std::log(double(carpet.m)) +
         std::log(double(stats.total) / double(stats.occupied)) /
             std::log(double(carpet.n));
}

double bm_assouad(const BMCarpet& carpet) {
  RowStats stats = bm_row_stats(carpet);
  if (carpet.self_similar())
    return std::log(double(stats.total)) / std::log(double(carpet.n));
  return std::log(double(stats.occupied)) / std::log(double(carpet.m)) +
         std::log(double(stats.peak)) / std::log(double(carpet.n));
}

ConformalAssouad bm_conformal_assouad(const BMCarpet& carpet) {
  if (carpet.self_similar())
    fail(Err::SelfSimilarUnsupported,
         "conformal classification is defined here only for n > m grids");
  RowStats stats = bm_row_stats(carpet);
  ConformalAssouad result;
  if (stats.peak < carpet.n && stats.occupied < carpet.m) {
    result.cls = ConformalClass::Zero;
    result.value = 0.0;
  } else {
    result.cls = ConformalClass::Minimal;
    result.value = bm_assouad(carpet);
  }
  return result;
}

double lg_assouad(const LGCarpet& carpet) {
  return lg_beta_x(carpet).value + lg_beta_y(carpet);
}

bool lg_full_width_row(const LGCarpet& carpet) {
  for (const auto& row : carpet.rows) {
    bool exact = true;
    for (const auto& col : row.cols) exact = exact && col.width.exact;
    if (exact) {
      Rational sum = 0;
      for (const auto& col : row.cols) sum += col.width.rat;
      if (sum == 1) return true;
    } else {
      double sum = 0.0;
      for (const auto& col : row.cols) sum += col.width.value;
      if (std::fabs(sum - 1.0) <= kExactTol) return true;
    }
  }
  return false;
}

bool lg_full_height(const LGCarpet& carpet) {
  bool exact = true;
  for (const auto& row : carpet.rows) exact = exact && row.height.exact;
  if (exact) {
    Rational sum = 0;
    for (const auto& row : carpet.rows) sum += row.height.rat;
    return sum == 1;
  }
  double sum = 0.0;
  for (const auto& row : carpet.rows) sum += row.height.value;
  return std::fabs(sum - 1.0) <= kExactTol;
}

ConformalAssouad lg_conformal_assouad(const LGCarpet& carpet) {
  ConformalAssouad result;
  // Column widths within a row never overlap and fit inside [0,1], so the
  // per-row Moran root reaches 1 only when that row's widths sum to 1;
  // likewise beta_y = 1 only when the heights sum to 1. Both are mass
  // tests, exact on rational inputs.
  if (lg_full_width_row(carpet) || lg_full_height(carpet)) {
    result.cls = ConformalClass::Minimal;
    result.value = lg_assouad(carpet);
  } else {
    result.cls = ConformalClass::Zero;
    result.value = 0.0;
  }
  return result;
}

namespace {

bool bm_touching(const BMCarpet& carpet) {
  // Closed level-1 pieces intersect when cells are adjacent in the grid,
  // including diagonally.
  for (std::size_t i = 0; i < carpet.cells.size(); ++i)
    for (std::size_t j = i + 1; j < carpet.cells.size(); ++j) {
      int dx = int(carpet.cells[i].first) - int(carpet.cells[j].first);
      int dy = int(carpet.cells[i].second) - int(carpet.cells[j].second);
      if (std::abs(dx) <= 1 && std::abs(dy) <= 1) return true;
    }
  return false;
}

bool lg_touching(const LGCarpet& carpet) {
  for (std::size_t i = 0; i + 1 < carpet.rows.size(); ++i) {
    Scalar top = scalar_add(carpet.rows[i].offset, carpet.rows[i].height);
    if (scalar_equal(top, carpet.rows[i + 1].offset)) return true;
  }
  for (const auto& row : carpet.rows)
    for (std::size_t j = 0; j + 1 < row.cols.size(); ++j) {
      Scalar right = scalar_add(row.cols[j].offset, row.cols[j].width);
      if (scalar_equal(right, row.cols[j + 1].offset)) return true;
    }
  return false;
}

}  // namespace

DimensionReport dimension_report(const BMCarpet& carpet) {
  DimensionReport report;
  report.family = Family::BM;
  report.has_hausdorff = true;
  report.hausdorff = bm_hausdorff(carpet);
  report.minkowski = bm_minkowski(carpet);
  report.assouad = bm_assouad(carpet);

  RowStats stats = bm_row_stats(carpet);
  bool uniform = true;
  for (unsigned t : stats.per_row)
    if (t > 0 && t != stats.peak) uniform = false;
  if (uniform) report.flags |= kUniformFibers;
  if (carpet.self_similar()) report.flags |= kSelfSimilar;
  if (bm_touching(carpet)) report.flags |= kTouchingCells;

  if (!carpet.self_similar()) {
    report.has_conformal = true;
    report.conformal = bm_conformal_assouad(carpet);
  }
  return report;
}

DimensionReport dimension_report(const LGCarpet& carpet) {
  DimensionReport report;
  report.family = Family::LG;
  report.has_hausdorff = false;
  report.beta_y = lg_beta_y(carpet);
  FiberRoot fx = lg_beta_x(carpet);
  report.beta_x = fx.value;
  report.assouad = report.beta_x + report.beta_y;
  report.minkowski = lg_minkowski_delta(carpet, report.beta_y);
  report.has_conformal = true;
  report.conformal = lg_conformal_assouad(carpet);

  bool degenerate = true;
  for (const auto& row : carpet.rows)
    if (row.cols.size() > 1) degenerate = false;
  if (degenerate) report.flags |= kDegenerateFiber;
  if (lg_touching(carpet)) report.flags |= kTouchingCells;
  return report;
}

}  // namespace carpets
