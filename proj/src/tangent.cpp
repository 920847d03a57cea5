#include "carpets/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <unordered_map>

#include "carpets/errors.hpp"
#include "carpets/grid_count.hpp"
#include "carpets/moran.hpp"

namespace carpets {

namespace {

std::uint64_t checked_pow64(unsigned base, unsigned exp) {
  BigInt value = ipow(base, exp);
  if (value > BigInt(std::numeric_limits<std::uint64_t>::max() / 4)) {
    fail(Err::BudgetExceeded, "grid index range exceeds 64-bit headroom");
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

TangentSpec tangent_digits(const BMCarpet& carpet) {
  RowStats stats = bm_row_stats(carpet);
  TangentSpec spec;
  spec.y_star = 0;
  for (unsigned y = 0; y < carpet.m; ++y) {
    if (stats.per_row[y] > stats.per_row[spec.y_star]) spec.y_star = y;
  }
  spec.x_star = carpet.n;
  for (const auto& cell : carpet.cells) {
    if (cell.second == spec.y_star) {
      spec.cx_digits.push_back(cell.first);
      spec.x_star = std::min(spec.x_star, cell.first);
    }
  }
  for (unsigned y = 0; y < carpet.m; ++y) {
    if (stats.per_row[y] > 0) spec.cy_digits.push_back(y);
  }
  std::sort(spec.cx_digits.begin(), spec.cx_digits.end());
  for (unsigned x : spec.cx_digits) {
    for (unsigned y : spec.cy_digits) spec.a_prime.emplace_back(x, y);
  }
  std::sort(spec.a_prime.begin(), spec.a_prime.end());
  return spec;
}

BMCarpet tangent_carpet(const TangentSpec& spec, unsigned n, unsigned m) {
  BMCarpet carpet;
  carpet.n = n;
  carpet.m = m;
  carpet.cells = spec.a_prime;
  validate_bm(carpet);
  return carpet;
}

CellSet normalized(const CellSet& set) {
  CellSet out = set;
  out.width = 1;
  return out;
}

CellSet zoom_window(const BMCarpet& carpet, unsigned k, unsigned resolution,
                    std::uint64_t budget) {
  if (resolution == 0) fail(Err::ParseError, "resolution must be positive");
  TangentSpec spec = tangent_digits(carpet);
  unsigned l = level_split(k, carpet.n, carpet.m);
  unsigned window_digits = k - l;

  BigInt cell_count = ipow(BigInt(spec.cx_digits.size()), window_digits) *
                      ipow(BigInt(carpet.cells.size()), resolution);
  if (cell_count > BigInt(budget)) {
    fail(Err::BudgetExceeded, "zoom window cell count exceeds budget");
  }

  CellSet out;
  out.nx = checked_pow64(carpet.n, window_digits + resolution);
  out.ny = checked_pow64(carpet.m, resolution);
  // Width of the level-k window after rescaling by m^k: m^k / n^l, in [1, n).
  out.width = Rational(ipow(carpet.m, k), ipow(carpet.n, l));
  out.cells.reserve(static_cast<std::size_t>(cell_count));

  // Free construction steps below the window: every digit pair allowed. The
  // x accumulator arrives holding the window digits and keeps shifting.
  std::function<void(unsigned, std::uint64_t, std::uint64_t)> copy_walk =
      [&](unsigned depth, std::uint64_t x_acc, std::uint64_t y_acc) {
        if (depth == resolution) {
          out.cells.emplace_back(x_acc, y_acc);
          return;
        }
        for (const auto& cell : carpet.cells) {
          copy_walk(depth + 1, x_acc * carpet.n + cell.first,
                    y_acc * carpet.m + cell.second);
        }
      };

  // Window positions: x digit free within the fullest row, y digit pinned.
  std::function<void(unsigned, std::uint64_t)> window_walk =
      [&](unsigned depth, std::uint64_t x_acc) {
        if (depth == window_digits) {
          copy_walk(0, x_acc, 0);
          return;
        }
        for (unsigned x : spec.cx_digits) {
          window_walk(depth + 1, x_acc * carpet.n + x);
        }
      };
  window_walk(0, 0);

  // The walk emits x-sorted blocks whose y order interleaves; canonical
  // form is fully sorted.
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

CellSet product_cell_set(const TangentSpec& spec, unsigned n, unsigned m,
                         unsigned window_digits, unsigned resolution,
                         std::uint64_t budget) {
  if (resolution == 0) fail(Err::ParseError, "resolution must be positive");
  unsigned x_depth = window_digits + resolution;
  BigInt cell_count = ipow(BigInt(spec.cx_digits.size()), x_depth) *
                      ipow(BigInt(spec.cy_digits.size()), resolution);
  if (cell_count > BigInt(budget)) {
    fail(Err::BudgetExceeded, "product cell count exceeds budget");
  }

  CellSet out;
  out.nx = checked_pow64(n, x_depth);
  out.ny = checked_pow64(m, resolution);
  out.width = 1;
  out.cells.reserve(static_cast<std::size_t>(cell_count));

  std::vector<std::uint64_t> xs;
  std::function<void(unsigned, std::uint64_t)> x_walk =
      [&](unsigned depth, std::uint64_t acc) {
        if (depth == x_depth) {
          xs.push_back(acc);
          return;
        }
        for (unsigned x : spec.cx_digits) x_walk(depth + 1, acc * n + x);
      };
  x_walk(0, 0);

  std::vector<std::uint64_t> ys;
  std::function<void(unsigned, std::uint64_t)> y_walk =
      [&](unsigned depth, std::uint64_t acc) {
        if (depth == resolution) {
          ys.push_back(acc);
          return;
        }
        for (unsigned y : spec.cy_digits) y_walk(depth + 1, acc * m + y);
      };
  y_walk(0, 0);

  for (std::uint64_t x : xs) {
    for (std::uint64_t y : ys) out.cells.emplace_back(x, y);
  }
  return out;
}

namespace {

struct BucketGrid {
  double h = 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

  static std::uint64_t key(std::int64_t ix, std::int64_t iy) {
    return static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL +
           static_cast<std::uint64_t>(iy);
  }

  void build(const std::vector<std::pair<double, double>>& pts, double size) {
    h = size;
    buckets.clear();
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
      auto ix = static_cast<std::int64_t>(std::floor(pts[i].first / h));
      auto iy = static_cast<std::int64_t>(std::floor(pts[i].second / h));
      buckets[key(ix, iy)].push_back(i);
    }
  }
};

double directed_distance(const std::vector<std::pair<double, double>>& from,
                         const std::vector<std::pair<double, double>>& to,
                         double seed_scale) {
  std::vector<std::uint32_t> pending(from.size());
  for (std::uint32_t i = 0; i < from.size(); ++i) pending[i] = i;

  BucketGrid grid;
  double h = std::max(seed_scale, 1e-12);
  double worst = 0.0;
  while (!pending.empty()) {
    grid.build(to, h);
    std::vector<std::uint32_t> unresolved;
    for (std::uint32_t idx : pending) {
      const auto& p = from[idx];
      auto ix = static_cast<std::int64_t>(std::floor(p.first / h));
      auto iy = static_cast<std::int64_t>(std::floor(p.second / h));
      double best = std::numeric_limits<double>::infinity();
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          auto it = grid.buckets.find(BucketGrid::key(ix + dx, iy + dy));
          if (it == grid.buckets.end()) continue;
          for (std::uint32_t j : it->second) {
            double ddx = p.first - to[j].first;
            double ddy = p.second - to[j].second;
            best = std::min(best, std::hypot(ddx, ddy));
          }
        }
      }
      // Every point within h lies in the scanned 3x3 block, so a candidate
      // at distance <= h is the true nearest neighbor.
      if (best <= h) {
        worst = std::max(worst, best);
      } else {
        unresolved.push_back(idx);
      }
    }
    pending.swap(unresolved);
    h *= 2.0;
    if (h > 1e9) fail(Err::ParseError, "hausdorff search failed to converge");
  }
  return worst;
}

std::vector<std::pair<double, double>> cell_centers(const CellSet& set) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(set.cells.size());
  double width = static_cast<double>(set.width);
  for (const auto& cell : set.cells) {
    pts.emplace_back(
        width * (static_cast<double>(cell.first) + 0.5) /
            static_cast<double>(set.nx),
        (static_cast<double>(cell.second) + 0.5) / static_cast<double>(set.ny));
  }
  return pts;
}

}  // namespace

double hausdorff_distance(const CellSet& a, const CellSet& b) {
  if (a.nx != b.nx || a.ny != b.ny || !(a.width == b.width)) {
    fail(Err::AmbientMismatch, "cell sets live on different grids");
  }
  if (a.cells.empty() || b.cells.empty()) {
    if (a.cells.empty() && b.cells.empty()) return 0.0;
    fail(Err::AmbientMismatch, "cannot compare against an empty cell set");
  }
  auto pa = cell_centers(a);
  auto pb = cell_centers(b);
  double width = static_cast<double>(a.width);
  double seed = std::hypot(width / static_cast<double>(a.nx),
                           1.0 / static_cast<double>(a.ny));
  return std::max(directed_distance(pa, pb, seed),
                  directed_distance(pb, pa, seed));
}

ConvergenceReport verify_tangent_convergence(const BMCarpet& carpet,
                                             unsigned k_max) {
  if (carpet.self_similar()) {
    fail(Err::SelfSimilarUnsupported,
         "window analysis needs the grid to be anisotropic");
  }
  TangentSpec spec = tangent_digits(carpet);
  double n = carpet.n;
  double m = carpet.m;
  ConvergenceReport report;

  for (unsigned k = 1; k <= k_max; ++k) {
    unsigned l = level_split(k, carpet.n, carpet.m);
    unsigned window_digits = k - l;
    double bound = 2.0 * std::pow(m / n, static_cast<int>(k));

    // Pick the depth so discretization error stays well below the bound,
    // then back off until both cell sets fit the enumeration budget.
    double wanted =
        std::log(std::sqrt(2.0) * std::pow(n / m, static_cast<int>(k)) / 0.15) /
        std::log(m);
    unsigned resolution =
        std::max(2u, static_cast<unsigned>(std::ceil(wanted)));
    auto fits = [&](unsigned r) {
      BigInt zoom_cells = ipow(BigInt(spec.cx_digits.size()), window_digits) *
                          ipow(BigInt(carpet.cells.size()), r);
      BigInt prod_cells =
          ipow(BigInt(spec.cx_digits.size()), window_digits + r) *
          ipow(BigInt(spec.cy_digits.size()), r);
      return zoom_cells <= BigInt(4'000'000) && prod_cells <= BigInt(8'000'000);
    };
    while (resolution > 2 && !fits(resolution)) --resolution;

    CellSet zoom = zoom_window(carpet, k, resolution);
    CellSet prod =
        product_cell_set(spec, carpet.n, carpet.m, window_digits, resolution);
    double distance = hausdorff_distance(normalized(zoom), prod);
    double slack =
        2.0 * std::hypot(1.0 / static_cast<double>(prod.nx),
                         1.0 / static_cast<double>(prod.ny));

    report.rows.push_back({k, resolution, distance, bound, slack});
    if (distance > bound + slack) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "window k=%u: distance %.6g exceeds bound %.6g + %.6g", k,
                    distance, bound, slack);
      report.violations.emplace_back(buf);
    }
  }

  std::vector<double> ks;
  std::vector<double> logs;
  for (const auto& row : report.rows) {
    if (row.distance > 1e-15) {
      ks.push_back(static_cast<double>(row.k));
      logs.push_back(std::log(row.distance));
    }
  }
  if (ks.size() >= 2) {
    report.fitted_ratio = std::exp(least_squares_slope(ks, logs));
  }
  return report;
}

LGTangent lg_tangent(const LGCarpet& carpet) {
  FiberRoot fiber = lg_beta_x(carpet);
  LGTangent tangent;
  tangent.row_star = fiber.row;
  for (const auto& col : carpet.rows[fiber.row].cols) {
    tangent.x_generators.push_back({col.width, col.offset});
  }
  for (const auto& row : carpet.rows) {
    tangent.y_generators.push_back({row.height, row.offset});
  }
  return tangent;
}

}  // namespace carpets
