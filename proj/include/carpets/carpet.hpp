#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "carpets/numeric.hpp"

namespace carpets {

/// Self-affine carpet on an n-by-m grid (columns-by-rows, n >= m >= 2),
/// determined by the set of retained cells. Cell (x, y) covers
/// [x/n, (x+1)/n] x [y/m, (y+1)/m].
struct BMCarpet {
  unsigned n = 0;  // horizontal subdivisions (wider direction)
  unsigned m = 0;  // vertical subdivisions
  std::vector<std::pair<unsigned, unsigned>> cells;  // (x, y) digits

  bool self_similar() const { return n == m; }
};

/// Validates grid bases, digit ranges, nonemptiness, and duplicate cells.
/// Sorts `cells` lexicographically so equal carpets compare equal.
void validate_bm(BMCarpet& carpet);

/// Per-row occupancy statistics.
struct RowStats {
  std::vector<unsigned> per_row;  // t_y = cells in row y, indexed 0..m-1
  unsigned occupied = 0;          // rows with t_y > 0
  unsigned peak = 0;              // max_y t_y
  unsigned total = 0;             // |cells|
};

RowStats bm_row_stats(const BMCarpet& carpet);

/// One column map inside a row of a nonlinear carpet: horizontal contraction
/// `width` placed at horizontal offset `offset`.
struct LGColumn {
  Scalar width;   // a, with 0 < a
  Scalar offset;  // c, with 0 <= c and c + a <= 1
};

/// One row: vertical contraction `height` at vertical offset `offset`,
/// carrying at least one column map. Columns contract strictly more in x
/// than the row does in y (width < height).
struct LGRow {
  Scalar height;  // b
  Scalar offset;  // d
  std::vector<LGColumn> cols;
};

struct LGCarpet {
  std::vector<LGRow> rows;

  bool all_exact() const;
  std::size_t map_count() const;
};

/// Validates positivity, width < height per row, non-overlap of rows within
/// [0,1] and of columns within each row, and total row mass <= 1. Sorts rows
/// by offset and columns by offset first, so input order never matters.
void validate_lg(LGCarpet& carpet);

/// Embeds a grid carpet with n > m as a nonlinear carpet: each occupied row
/// becomes a row of height 1/m, each cell a column of width 1/n. Rejects
/// n == m, whose maps are similarities rather than strict contractions in x.
LGCarpet embed_bm_as_lg(const BMCarpet& carpet);

}  // namespace carpets
