#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "carpets/carpet.hpp"
#include "carpets/numeric.hpp"

namespace carpets {

/// Digit data of the product-carpet tangent: zooming along the column of a
/// fullest row turns the carpet into C_x x C_y, where C_x keeps the digits
/// sharing that row and C_y the occupied rows.
struct TangentSpec {
  unsigned y_star = 0;  // smallest row with the peak entry count
  unsigned x_star = 0;  // smallest column with (x_star, y_star) a cell
  std::vector<unsigned> cx_digits;  // {x : (x, y_star) is a cell}, sorted
  std::vector<unsigned> cy_digits;  // {y : row y non-empty}, sorted
  std::vector<std::pair<unsigned, unsigned>> a_prime;  // cx x cy product
};

TangentSpec tangent_digits(const BMCarpet& carpet);

/// The carpet with digit set cx x cy on the same grid. Its fibers are
/// uniform by construction, so its Minkowski dimension equals the Assouad
/// dimension of the source carpet.
BMCarpet tangent_carpet(const TangentSpec& spec, unsigned n, unsigned m);

/// Occupied cells of a discretized set on a uniform nx-by-ny grid over the
/// ambient rectangle [0, width] x [0, 1].
struct CellSet {
  std::uint64_t nx = 1;
  std::uint64_t ny = 1;
  Rational width = 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;  // sorted
};

/// Ambient relabeled to width 1: the horizontal squeeze x -> x/width.
CellSet normalized(const CellSet& set);

/// The level-k window around the tangent column (x digits locked to x_star
/// for l positions, y digits to y_star for k), rescaled by m^k and
/// discretized `resolution` construction steps deep. The grid has
/// n^(k-l+resolution) columns and m^resolution rows over ambient width
/// m^k n^-l, which lies in [1, n).
CellSet zoom_window(const BMCarpet& carpet, unsigned k, unsigned resolution,
                    std::uint64_t budget = 4'000'000);

/// The product set C_x x C_y discretized on the same grid a zoom window at
/// matching depth uses: window_digits + resolution base-n digits from
/// cx_digits horizontally, resolution base-m digits from cy_digits
/// vertically, ambient width 1.
CellSet product_cell_set(const TangentSpec& spec, unsigned n, unsigned m,
                         unsigned window_digits, unsigned resolution,
                         std::uint64_t budget = 8'000'000);

/// Symmetric Hausdorff distance between the cell-center point clouds.
/// Zero exactly when the sets are equal at matched level; grids and ambient
/// must match (AmbientMismatch otherwise).
double hausdorff_distance(const CellSet& a, const CellSet& b);

struct ConvergenceRow {
  unsigned k = 0;
  unsigned resolution = 0;
  double distance = 0.0;  // normalized window vs product grid
  double bound = 0.0;     // 2 (m/n)^k
  double slack = 0.0;     // 2 x grid cell diagonal
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double fitted_ratio = 0.0;  // geometric decay per step, from an OLS fit
  std::vector<std::string> violations;  // expected empty
};

/// For k = 1..k_max, measures the distance from the width-normalized zoom
/// window to the product grid and checks distance <= 2(m/n)^k + slack,
/// with the discretization depth chosen per k so the slack stays well under
/// the bound (within the cell budget).
ConvergenceReport verify_tangent_convergence(const BMCarpet& carpet,
                                             unsigned k_max);

/// A one-dimensional contraction x -> ratio * x + offset.
struct Contraction {
  Scalar ratio;
  Scalar offset;
};

struct LGTangent {
  std::size_t row_star = 0;               // row whose fiber root is maximal
  std::vector<Contraction> x_generators;  // that row's column maps
  std::vector<Contraction> y_generators;  // all row height maps
};

/// Generators of the two Cantor factors of the nonlinear carpet's tangent
/// product; their Moran roots are beta_x and beta_y.
LGTangent lg_tangent(const LGCarpet& carpet);

}  // namespace carpets
