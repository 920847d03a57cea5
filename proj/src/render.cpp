#include "carpets/render.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include "carpets/errors.hpp"
#include "carpets/numeric.hpp"

namespace carpets {

namespace {

void check_config(const RenderConfig& config) {
  if (config.width_px < 16 || config.height_px < 16) {
    fail(Err::ParseError, "image must be at least 16 pixels per side");
  }
  if (config.width_px > 8192 || config.height_px > 8192) {
    fail(Err::BudgetExceeded, "image exceeds 8192 pixels per side");
  }
  if (config.level == 0) fail(Err::ParseError, "level must be positive");
  if (!(config.x0 >= 0.0 && config.x0 < config.x1 && config.x1 <= 1.0 &&
        config.y0 >= 0.0 && config.y0 < config.y1 && config.y1 <= 1.0)) {
    fail(Err::RegionEmpty, "region must be a nonempty part of the unit square");
  }
}

std::vector<unsigned char> make_canvas(const RenderConfig& config,
                                       std::size_t& header_len) {
  char header[64];
  int written = std::snprintf(header, sizeof(header), "P5\n%u %u\n255\n",
                              config.width_px, config.height_px);
  header_len = static_cast<std::size_t>(written);
  std::vector<unsigned char> bytes(
      header_len + std::size_t(config.width_px) * config.height_px, 255);
  std::memcpy(bytes.data(), header, header_len);
  return bytes;
}

}  // namespace

std::vector<unsigned char> render_pgm(const BMCarpet& carpet,
                                      const RenderConfig& config) {
  check_config(config);
  if (ipow(BigInt(carpet.n), config.level) >
      BigInt(std::numeric_limits<std::uint64_t>::max() / 4)) {
    fail(Err::BudgetExceeded, "level exceeds grid index headroom");
  }

  std::vector<char> has(std::size_t(carpet.n) * carpet.m, 0);
  for (const auto& cell : carpet.cells) {
    has[std::size_t(cell.second) * carpet.n + cell.first] = 1;
  }

  std::size_t header_len = 0;
  std::vector<unsigned char> bytes = make_canvas(config, header_len);

  double nk = std::pow(static_cast<double>(carpet.n), double(config.level));
  double mk = std::pow(static_cast<double>(carpet.m), double(config.level));
  std::uint64_t max_x = static_cast<std::uint64_t>(nk) - 1;
  std::uint64_t max_y = static_cast<std::uint64_t>(mk) - 1;

  for (unsigned row = 0; row < config.height_px; ++row) {
    double py = config.y1 - (row + 0.5) * (config.y1 - config.y0) /
                                config.height_px;
    auto cy = static_cast<std::uint64_t>(
        std::min(std::max(py * mk, 0.0), static_cast<double>(max_y)));
    for (unsigned colpx = 0; colpx < config.width_px; ++colpx) {
      double px = config.x0 + (colpx + 0.5) * (config.x1 - config.x0) /
                                  config.width_px;
      auto cx = static_cast<std::uint64_t>(
          std::min(std::max(px * nk, 0.0), static_cast<double>(max_x)));
      std::uint64_t x = cx;
      std::uint64_t y = cy;
      bool inside = true;
      for (unsigned step = 0; step < config.level; ++step) {
        auto dx = static_cast<unsigned>(x % carpet.n);
        auto dy = static_cast<unsigned>(y % carpet.m);
        if (!has[std::size_t(dy) * carpet.n + dx]) {
          inside = false;
          break;
        }
        x /= carpet.n;
        y /= carpet.m;
      }
      if (inside) {
        bytes[header_len + std::size_t(row) * config.width_px + colpx] = 0;
      }
    }
  }
  return bytes;
}

std::vector<unsigned char> render_pgm(const LGCarpet& carpet,
                                      const RenderConfig& config) {
  check_config(config);

  std::size_t header_len = 0;
  std::vector<unsigned char> bytes = make_canvas(config, header_len);

  // Point membership in the level-k word approximation, by descending
  // through the row/column maps (closed boxes, so boundaries count).
  auto inside = [&](double px, double py) {
    for (unsigned step = 0; step < config.level; ++step) {
      const LGRow* hit_row = nullptr;
      for (const auto& row : carpet.rows) {
        double d = row.offset.value;
        double h = row.height.value;
        if (py >= d && py <= d + h) {
          hit_row = &row;
          py = (py - d) / h;
          break;
        }
      }
      if (hit_row == nullptr) return false;
      const LGColumn* hit_col = nullptr;
      for (const auto& col : hit_row->cols) {
        double c = col.offset.value;
        double a = col.width.value;
        if (px >= c && px <= c + a) {
          hit_col = &col;
          px = (px - c) / a;
          break;
        }
      }
      if (hit_col == nullptr) return false;
    }
    return true;
  };

  for (unsigned row = 0; row < config.height_px; ++row) {
    double py = config.y1 - (row + 0.5) * (config.y1 - config.y0) /
                                config.height_px;
    for (unsigned colpx = 0; colpx < config.width_px; ++colpx) {
      double px = config.x0 + (colpx + 0.5) * (config.x1 - config.x0) /
                                  config.width_px;
      if (inside(px, py)) {
        bytes[header_len + std::size_t(row) * config.width_px + colpx] = 0;
      }
    }
  }
  return bytes;
}

}  // namespace carpets
