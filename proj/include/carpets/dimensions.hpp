#pragma once

#include <cmath>
#include <vector>

#include "carpets/carpet.hpp"
#include "carpets/moran.hpp"

namespace carpets {

/// dim_H = log_m( sum_y t_y^(log_n m) ), McMullen's closed form.
double bm_hausdorff(const BMCarpet& carpet);

/// dim_M = log_m s + log_n(|A|/s).
double bm_minkowski(const BMCarpet& carpet);

/// dim_A = log_m s + log_n t for n > m; log_n |A| in the self-similar case
/// n = m (where the carpet is Ahlfors regular).
double bm_assouad(const BMCarpet& carpet);

enum class ConformalClass { Zero, Minimal };

struct ConformalAssouad {
  ConformalClass cls = ConformalClass::Zero;
  double value = 0.0;  // equals the Assouad dimension in the Minimal branch
};

/// Dichotomy for n > m grids: dimension 0 exactly when t < n and s < m,
/// otherwise the carpet is minimal (conformal value = Assouad value).
/// The self-similar case n = m is out of the dichotomy's reach and throws
/// SelfSimilarUnsupported.
ConformalAssouad bm_conformal_assouad(const BMCarpet& carpet);

/// beta_x + beta_y.
double lg_assouad(const LGCarpet& carpet);

/// Zero exactly when beta_x < 1 and beta_y < 1; otherwise Minimal. The
/// beta = 1 branches are decided by the exact mass tests (column widths of
/// some row summing to 1, or row heights summing to 1), never by comparing
/// a solver output against 1.
ConformalAssouad lg_conformal_assouad(const LGCarpet& carpet);

/// True when some row's column widths sum to 1 (that row's fiber system
/// tiles [0,1], forcing beta_x = 1).
bool lg_full_width_row(const LGCarpet& carpet);

/// True when the row heights sum to 1 (beta_y = 1).
bool lg_full_height(const LGCarpet& carpet);

enum ReportFlag : unsigned {
  kUniformFibers = 1u << 0,    // every non-empty row holds the same count
  kSelfSimilar = 1u << 1,      // n = m
  kDegenerateFiber = 1u << 2,  // every row has a single column (beta_x = 0)
  kTouchingCells = 1u << 3,    // two pieces share boundary
};

enum class Family { BM, LG };

struct DimensionReport {
  Family family = Family::BM;
  bool has_hausdorff = false;
  double hausdorff = 0.0;
  double minkowski = 0.0;
  double assouad = 0.0;
  double beta_x = 0.0;  // LG only
  double beta_y = 0.0;  // LG only
  bool has_conformal = false;  // absent for self-similar grids
  ConformalAssouad conformal;
  unsigned flags = 0;
};

DimensionReport dimension_report(const BMCarpet& carpet);
DimensionReport dimension_report(const LGCarpet& carpet);

}  // namespace carpets
