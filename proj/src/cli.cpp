#include "carpets/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carpets/carpet.hpp"
#include "carpets/chains.hpp"
#include "carpets/dimensions.hpp"
#include "carpets/errors.hpp"
#include "carpets/grid_count.hpp"
#include "carpets/moran.hpp"
#include "carpets/numeric.hpp"
#include "carpets/render.hpp"
#include "carpets/spec_io.hpp"
#include "carpets/tangent.hpp"

namespace carpets {

namespace {

std::string flag_names(unsigned flags) {
  std::string out;
  auto append = [&](const char* name) {
    if (!out.empty()) out += ' ';
    out += name;
  };
  if (flags & kUniformFibers) append("uniform-fibers");
  if (flags & kSelfSimilar) append("self-similar");
  if (flags & kDegenerateFiber) append("degenerate-fiber");
  if (flags & kTouchingCells) append("touching-cells");
  return out.empty() ? "none" : out;
}

void print_conformal(std::ostream& out, const DimensionReport& report) {
  if (!report.has_conformal) {
    out << "conformal_assouad unsupported\n";
    return;
  }
  if (report.conformal.cls == ConformalClass::Zero) {
    out << "conformal_assouad zero 0\n";
  } else {
    out << "conformal_assouad minimal " << format_sig(report.conformal.value)
        << "\n";
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::ParseError, path + ": cannot open for writing");
  out << text;
  if (!out) fail(Err::ParseError, path + ": write failed");
}

void write_file(const std::string& path,
                const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::ParseError, path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Err::ParseError, path + ": write failed");
}

std::vector<ScalePair> parse_gaps(const std::string& text) {
  std::vector<ScalePair> pairs;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    std::size_t colon = token.find(':');
    if (colon == std::string::npos) {
      fail(Err::ParseError, "gap '" + token + "' must look like k_outer:k_inner");
    }
    ScalePair pair;
    try {
      pair.k_outer = static_cast<unsigned>(std::stoul(token.substr(0, colon)));
      pair.k_inner = static_cast<unsigned>(std::stoul(token.substr(colon + 1)));
    } catch (const std::exception&) {
      fail(Err::ParseError, "gap '" + token + "' must hold two integers");
    }
    if (pair.k_outer == 0 || pair.k_outer >= pair.k_inner) {
      fail(Err::ParseError, "gap '" + token + "' needs 0 < k_outer < k_inner");
    }
    pairs.push_back(pair);
  }
  if (pairs.empty()) fail(Err::ParseError, "no gaps given");
  return pairs;
}

void parse_px(const std::string& text, unsigned& width, unsigned& height) {
  try {
    std::size_t cross = text.find('x');
    if (cross == std::string::npos) {
      width = height = static_cast<unsigned>(std::stoul(text));
    } else {
      width = static_cast<unsigned>(std::stoul(text.substr(0, cross)));
      height = static_cast<unsigned>(std::stoul(text.substr(cross + 1)));
    }
  } catch (const std::exception&) {
    fail(Err::ParseError, "pixel size '" + text + "' must be N or WxH");
  }
}

void parse_region(const std::string& text, RenderConfig& config) {
  std::stringstream stream(text);
  std::string token;
  std::vector<double> vals;
  while (std::getline(stream, token, ',')) {
    try {
      vals.push_back(std::stod(token));
    } catch (const std::exception&) {
      fail(Err::ParseError, "region '" + text + "' must hold four numbers");
    }
  }
  if (vals.size() != 4) {
    fail(Err::ParseError, "region '" + text + "' must be x0,y0,x1,y1");
  }
  config.x0 = vals[0];
  config.y0 = vals[1];
  config.x1 = vals[2];
  config.y1 = vals[3];
}

/// The outer square at k_outer whose covering count realizes the two-scale
/// bound: the tangent column digits, pinned to the fullest row.
ApproxSquare witness_outer(const BMCarpet& carpet, const TangentSpec& spec,
                           unsigned k_outer) {
  ApproxSquare outer;
  outer.level = k_outer;
  outer.x_digits.assign(level_split(k_outer, carpet.n, carpet.m), spec.x_star);
  outer.y_digits.assign(k_outer, spec.y_star);
  return outer;
}

int cmd_dims(const std::string& path) {
  AnyCarpet any = load_carpet_spec(path);
  std::ostream& out = std::cout;
  if (std::holds_alternative<BMCarpet>(any)) {
    const auto& carpet = std::get<BMCarpet>(any);
    DimensionReport report = dimension_report(carpet);
    out << "family bedford-mcmullen\n";
    out << "grid " << carpet.n << "x" << carpet.m << "\n";
    out << "cells " << carpet.cells.size() << "\n";
    out << "hausdorff " << format_sig(report.hausdorff) << "\n";
    out << "minkowski " << format_sig(report.minkowski) << "\n";
    out << "assouad " << format_sig(report.assouad) << "\n";
    print_conformal(out, report);
    out << "flags " << flag_names(report.flags) << "\n";
  } else {
    const auto& carpet = std::get<LGCarpet>(any);
    DimensionReport report = dimension_report(carpet);
    FiberRoot fiber = lg_beta_x(carpet);
    out << "family lalley-gatzouras\n";
    out << "rows " << carpet.rows.size() << "\n";
    out << "maps " << carpet.map_count() << "\n";
    out << "beta_x " << format_sig(report.beta_x) << "\n";
    out << "beta_x_row " << fiber.row << "\n";
    out << "beta_y " << format_sig(report.beta_y) << "\n";
    out << "minkowski " << format_sig(report.minkowski) << "\n";
    out << "assouad " << format_sig(report.assouad) << "\n";
    print_conformal(out, report);
    out << "flags " << flag_names(report.flags) << "\n";
  }
  return 0;
}

int cmd_estimate(const std::string& path, unsigned k_min, unsigned k_max,
                 const std::string& gaps_text, const std::string& out_path) {
  AnyCarpet any = load_carpet_spec(path);
  std::ostringstream csv;
  csv << "k_outer,k_inner,count,exponent\n";

  if (std::holds_alternative<BMCarpet>(any)) {
    const auto& carpet = std::get<BMCarpet>(any);
    if (k_min < 1 || k_min + 1 > k_max) {
      fail(Err::ParseError, "need 1 <= kmin < kmax");
    }
    double log_m = std::log(static_cast<double>(carpet.m));
    for (unsigned k = k_min; k <= k_max; ++k) {
      BigInt count = approx_square_count(carpet, k);
      double exponent = log_big(count) / (k * log_m);
      csv << 0 << "," << k << "," << count.str() << ","
          << format_sig(exponent) << "\n";
    }
    double slope = minkowski_estimate(carpet, k_min, k_max);
    std::cout << "minkowski_estimate " << format_sig(slope) << "\n";

    if (!gaps_text.empty()) {
      std::vector<ScalePair> gaps = parse_gaps(gaps_text);
      TangentSpec spec = tangent_digits(carpet);
      for (const auto& gap : gaps) {
        ApproxSquare outer = witness_outer(carpet, spec, gap.k_outer);
        BigInt count = covering_count(carpet, outer, gap.k_inner);
        double exponent =
            log_big(count) / ((gap.k_inner - gap.k_outer) * log_m);
        csv << gap.k_outer << "," << gap.k_inner << "," << count.str() << ","
            << format_sig(exponent) << "\n";
      }
      double estimate = assouad_estimate(carpet, gaps);
      std::cout << "assouad_estimate " << format_sig(estimate) << "\n";
    }
  } else {
    const auto& carpet = std::get<LGCarpet>(any);
    if (!gaps_text.empty()) {
      fail(Err::ParseError, "gaps apply to integer-grid carpets only");
    }
    if (k_min < 1 || k_min + 1 > k_max || k_max > 60) {
      fail(Err::ParseError, "need 1 <= kmin < kmax <= 60");
    }
    double beta_y = lg_beta_y(carpet);
    double delta = lg_minkowski_delta(carpet, beta_y);
    std::cout << "minkowski " << format_sig(delta) << "\n";
    std::cout << "assouad " << format_sig(lg_assouad(carpet)) << "\n";
    // Scale ladder epsilon = 2^-j; the tuple count against the expected
    // power law gives the normalized ratio column.
    for (unsigned j = k_min; j <= k_max; ++j) {
      Scalar eps{Rational(1, ipow(BigInt(2), j))};
      CountReport report = lg_approx_squares(carpet, {}, eps);
      csv << 0 << "," << j << "," << report.f_star_count.str() << ","
          << format_sig(report.normalized_ratio) << "\n";
    }
  }

  if (!out_path.empty()) {
    write_file(out_path, csv.str());
    std::cout << "wrote " << out_path << "\n";
  } else {
    std::cout << csv.str();
  }
  return 0;
}

int cmd_tangent(const std::string& path, const std::string& out_path) {
  AnyCarpet any = load_carpet_spec(path);
  if (std::holds_alternative<BMCarpet>(any)) {
    const auto& carpet = std::get<BMCarpet>(any);
    TangentSpec spec = tangent_digits(carpet);
    BMCarpet tangent = tangent_carpet(spec, carpet.n, carpet.m);
    std::cout << "family bedford-mcmullen\n";
    std::cout << "y_star " << spec.y_star << "\n";
    std::cout << "x_star " << spec.x_star << "\n";
    std::cout << "cx_digits";
    for (unsigned x : spec.cx_digits) std::cout << " " << x;
    std::cout << "\ncy_digits";
    for (unsigned y : spec.cy_digits) std::cout << " " << y;
    std::cout << "\ntangent_cells " << tangent.cells.size() << "\n";
    std::cout << "source_assouad " << format_sig(bm_assouad(carpet)) << "\n";
    std::cout << "tangent_minkowski " << format_sig(bm_minkowski(tangent))
              << "\n";
    if (!out_path.empty()) {
      write_file(out_path, serialize_carpet_spec(tangent));
      std::cout << "wrote " << out_path << "\n";
    }
  } else {
    const auto& carpet = std::get<LGCarpet>(any);
    LGTangent tangent = lg_tangent(carpet);
    std::cout << "family lalley-gatzouras\n";
    std::cout << "row_star " << tangent.row_star << "\n";
    std::cout << "x_generators " << tangent.x_generators.size() << "\n";
    std::cout << "y_generators " << tangent.y_generators.size() << "\n";
    std::cout << "beta_x " << format_sig(lg_beta_x(carpet).value) << "\n";
    std::cout << "beta_y " << format_sig(lg_beta_y(carpet)) << "\n";
    std::cout << "assouad " << format_sig(lg_assouad(carpet)) << "\n";
    if (!out_path.empty()) {
      // The tangent is the product of the two generator systems. As a
      // carpet of the same family every row must repeat the row_star
      // columns; validation rejects the product when some row is flatter
      // than those columns are wide.
      LGCarpet product;
      for (const auto& ygen : tangent.y_generators) {
        LGRow row;
        row.height = ygen.ratio;
        row.offset = ygen.offset;
        for (const auto& xgen : tangent.x_generators) {
          row.cols.push_back({xgen.ratio, xgen.offset});
        }
        product.rows.push_back(std::move(row));
      }
      validate_lg(product);
      write_file(out_path, serialize_carpet_spec(product));
      std::cout << "wrote " << out_path << "\n";
    }
  }
  return 0;
}

int cmd_classify(const std::string& path, unsigned depth,
                 const std::string& out_path) {
  AnyCarpet any = load_carpet_spec(path);
  if (std::holds_alternative<BMCarpet>(any)) {
    const auto& carpet = std::get<BMCarpet>(any);
    DisconnectionReport report = classify_uniform_disconnection(carpet, depth);
    switch (report.verdict) {
      case DisconnectionVerdict::UniformlyDisconnected:
        std::cout << "verdict uniformly-disconnected\n";
        break;
      case DisconnectionVerdict::MinimalWitness:
        std::cout << "verdict minimal-witness\n";
        break;
      case DisconnectionVerdict::Inconclusive:
        std::cout << "verdict inconclusive\n";
        break;
    }
    if (report.verdict == DisconnectionVerdict::MinimalWitness) {
      std::cout << "witness";
      if (report.witness_rows_full) std::cout << " rows-full";
      if (report.witness_cols_full) std::cout << " cols-full";
      std::cout << "\n";
      DimensionReport dims = dimension_report(carpet);
      print_conformal(std::cout, dims);
    } else {
      for (const auto& stat : report.ladder) {
        std::cout << "scale k=" << stat.k_hat << " radius "
                  << format_sig(stat.radius) << " delta "
                  << format_sig(stat.delta_checked) << " level "
                  << stat.cell_level << " cells " << stat.cells_checked
                  << (stat.exhaustive ? " exhaustive" : " sampled")
                  << " ratio_min " << format_sig(stat.min_ratio)
                  << " ratio_max " << format_sig(stat.max_ratio) << "\n";
      }
      std::cout << "violations " << report.violations.size() << "\n";
      for (const auto& line : report.violations) {
        std::cout << "violation " << line << "\n";
      }
    }
    if (!out_path.empty()) {
      std::ostringstream csv;
      csv << "start,radius,delta_star,ratio\n";
      for (const auto& sample : report.samples) {
        csv << sample.start.level << ":" << sample.start.x << ":"
            << sample.start.y << "," << format_sig(sample.radius) << ","
            << format_sig(sample.delta_star) << ","
            << format_sig(sample.ratio) << "\n";
      }
      write_file(out_path, csv.str());
      std::cout << "wrote " << out_path << "\n";
    }
  } else {
    const auto& carpet = std::get<LGCarpet>(any);
    DimensionReport dims = dimension_report(carpet);
    print_conformal(std::cout, dims);
    // No cell-count theorem calibrates the nonlinear family, so the escape
    // probe runs at word level and is reported as heuristic evidence.
    unsigned level = std::min(depth, 8u);
    while (level > 1 &&
           ipow(BigInt(carpet.map_count()), level) > BigInt(200'000)) {
      --level;
    }
    std::vector<EscapeSample> samples = lg_escape_samples(carpet, level);
    std::cout << "heuristic-escape level " << level << "\n";
    std::ostringstream csv;
    csv << "start,radius,delta_star,ratio\n";
    for (const auto& sample : samples) {
      std::cout << "start " << sample.start.x << " radius "
                << format_sig(sample.radius) << " delta_star "
                << format_sig(sample.delta_star) << " ratio "
                << format_sig(sample.ratio)
                << (sample.no_escape_at_budget ? " no-escape" : "") << "\n";
      csv << sample.start.level << ":" << sample.start.x << ":0,"
          << format_sig(sample.radius) << "," << format_sig(sample.delta_star)
          << "," << format_sig(sample.ratio) << "\n";
    }
    if (!out_path.empty()) {
      write_file(out_path, csv.str());
      std::cout << "wrote " << out_path << "\n";
    }
  }
  return 0;
}

int cmd_render(const std::string& path, unsigned level,
               const std::string& px_text, const std::string& region_text,
               const std::string& out_path) {
  AnyCarpet any = load_carpet_spec(path);
  RenderConfig config;
  config.level = level;
  parse_px(px_text, config.width_px, config.height_px);
  if (!region_text.empty()) parse_region(region_text, config);

  std::vector<unsigned char> bytes = std::visit(
      [&](const auto& carpet) { return render_pgm(carpet, config); }, any);
  write_file(out_path, bytes);
  std::cout << "wrote " << out_path << " (" << config.width_px << "x"
            << config.height_px << ", level " << config.level << ")\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"anisotropic carpet toolkit"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  unsigned k_min = 6;
  unsigned k_max = 12;
  std::string gaps_text;
  unsigned depth = 6;
  unsigned level = 5;
  std::string px_text = "512";
  std::string region_text;

  CLI::App* dims = app.add_subcommand("dims", "dimension report");
  dims->add_option("spec", spec_path, "carpet spec file")->required();

  CLI::App* estimate =
      app.add_subcommand("estimate", "box and two-scale counting estimates");
  estimate->add_option("spec", spec_path, "carpet spec file")->required();
  estimate->add_option("--kmin", k_min, "first level");
  estimate->add_option("--kmax", k_max, "last level");
  estimate->add_option("--gaps", gaps_text,
                       "comma list of k_outer:k_inner scale pairs");
  estimate->add_option("--out", out_path, "CSV output path");

  CLI::App* tangent =
      app.add_subcommand("tangent", "product tangent of the carpet");
  tangent->add_option("spec", spec_path, "carpet spec file")->required();
  tangent->add_option("--out", out_path, "spec file for the tangent carpet");

  CLI::App* classify =
      app.add_subcommand("classify", "uniform disconnection check");
  classify->add_option("spec", spec_path, "carpet spec file")->required();
  classify->add_option("--depth", depth, "last scale exponent (3..9)");
  classify->add_option("--out", out_path, "CSV output path for escape data");

  CLI::App* render = app.add_subcommand("render", "rasterize to a PGM image");
  render->add_option("spec", spec_path, "carpet spec file")->required();
  render->add_option("--level", level, "subdivision depth");
  render->add_option("--px", px_text, "pixels: N or WxH (min 16)");
  render->add_option("--region", region_text, "x0,y0,x1,y1 within the unit square");
  render->add_option("--out", out_path, "PGM output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dims) return cmd_dims(spec_path);
    if (*estimate) {
      return cmd_estimate(spec_path, k_min, k_max, gaps_text, out_path);
    }
    if (*tangent) return cmd_tangent(spec_path, out_path);
    if (*classify) return cmd_classify(spec_path, depth, out_path);
    if (*render) {
      return cmd_render(spec_path, level, px_text, region_text, out_path);
    }
  } catch (const CarpetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Err::BudgetExceeded ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace carpets
