#pragma once

#include <cstdint>
#include <vector>

#include "carpets/carpet.hpp"

namespace carpets {

/// A pixel raster of the level-`level` cell approximation over `region`
/// (a sub-rectangle of the unit square). Pixels are dark exactly when the
/// grid cell containing the pixel center survives `level` subdivision steps.
struct RenderConfig {
  unsigned level = 1;
  unsigned width_px = 256;
  unsigned height_px = 256;
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

/// Returns a complete binary PGM (P5) file: header plus one byte per pixel,
/// 0 for cells of the carpet and 255 for the complement, rows top-down.
std::vector<unsigned char> render_pgm(const BMCarpet& carpet,
                                      const RenderConfig& config);
std::vector<unsigned char> render_pgm(const LGCarpet& carpet,
                                      const RenderConfig& config);

}  // namespace carpets
