#pragma once

#include <cstddef>
#include <vector>

#include "carpets/carpet.hpp"

namespace carpets {

/// Weighted Moran-type equation: find beta >= 0 with
///   sum_i weights[i] * ratios[i]^beta = target.
/// The left side is strictly decreasing in beta because every ratio lies in
/// (0,1), so the root is unique when it exists.
struct MoranProblem {
  std::vector<double> ratios;   // each strictly inside (0,1)
  std::vector<double> weights;  // empty means all ones; each > 0
  double target = 1.0;
};

/// Returns the unique root, with residual below kResidualTol. Root 0 is legal
/// (target equals the beta=0 value); target above the beta=0 value has no
/// nonnegative root and throws NoRoot.
double moran_root(const MoranProblem& problem);

/// Root of sum_i height_i^beta = 1 over the rows. Returns exactly 1.0 when
/// the heights sum to 1 (detected exactly on rational inputs), since the
/// conformal dichotomy branches on beta_y = 1.
double lg_beta_y(const LGCarpet& carpet);

struct FiberRoot {
  double value = 0.0;
  std::size_t row = 0;  // maximizing row, smallest index on ties
};

/// Per-row root of sum_j width_ij^beta = 1, maximized over rows. A row with
/// a single column has root 0; if every row does, the fiber direction is
/// degenerate and the result is 0.
FiberRoot lg_beta_x(const LGCarpet& carpet);

/// The unique delta >= beta_y with
///   sum_ij height_i^beta_y * width_ij^(delta - beta_y) = 1,
/// the box-counting exponent of the carpet. beta_y must come from
/// lg_beta_y(carpet).
double lg_minkowski_delta(const LGCarpet& carpet, double beta_y);

}  // namespace carpets
