#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carpets/carpet.hpp"
#include "carpets/tangent.hpp"

namespace carpets {

/// Level-k grid cell: the box [x n^-k, (x+1) n^-k] x [y m^-k, (y+1) m^-k].
struct GridCell {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  unsigned level = 0;
};

/// Euclidean gap between two same-level cells (0 for overlap or touch,
/// including corner touch).
double cell_gap(const GridCell& a, const GridCell& b, unsigned n, unsigned m);

/// Cells of the carpet at one subdivision level, with an edge wherever the
/// gap is at most delta. Vertices are sorted by (x, y); adjacency lists are
/// sorted and symmetric.
struct ChainGraph {
  unsigned level = 0;
  double delta = 0.0;
  std::vector<GridCell> vertices;
  std::vector<std::vector<std::uint32_t>> adjacency;
};

ChainGraph build_chain_graph(const BMCarpet& carpet, unsigned level,
                             double delta,
                             std::uint64_t budget = 2'000'000);

/// Component id per vertex, ids dense from 0 in first-seen order.
std::vector<std::uint32_t> graph_components(const ChainGraph& graph);

/// Whether some delta-chain of carpet cells at the start's level walks from
/// the start cell to a cell whose center lies farther than radius from the
/// start center. Only the carpet near the start is materialized, so the
/// level may be far beyond what a full enumeration allows.
bool escape_test(const BMCarpet& carpet, const GridCell& start, double radius,
                 double delta, std::uint64_t budget = 4'000'000);

enum class DisconnectionVerdict {
  UniformlyDisconnected,
  MinimalWitness,
  Inconclusive,
};

/// One start cell probed against the descending step ladder
/// delta = radius * 2^-j, j = 0..20. delta_star is the smallest step with a
/// witnessed escape; no_escape_at_budget marks starts where even
/// delta = radius found no escape within the work budget (ratio is then 0).
/// Budgeted probes only ever round delta_star up, never down.
struct EscapeSample {
  GridCell start;
  double radius = 0.0;
  double delta_star = 0.0;
  double ratio = 0.0;  // radius / delta_star
  bool no_escape_at_budget = false;
};

/// Summary of one rung radius = 2 n^2 m^-k_hat of the scale ladder.
struct LadderStat {
  unsigned k_hat = 0;
  double radius = 0.0;
  double delta_checked = 0.0;  // the no-escape step radius / (4 m n^3)
  unsigned cell_level = 0;
  std::uint64_t cells_checked = 0;
  bool exhaustive = false;  // every cell swept, vs. sampled starts
  double min_ratio = 0.0;   // over this rung's ladder samples
  double max_ratio = 0.0;
};

struct DisconnectionReport {
  DisconnectionVerdict verdict = DisconnectionVerdict::Inconclusive;
  bool witness_rows_full = false;  // every row occupied
  bool witness_cols_full = false;  // some row contains every column
  TangentSpec witness;             // tangent digits backing the witness
  std::vector<LadderStat> ladder;
  std::vector<EscapeSample> samples;
  std::vector<std::string> violations;
};

/// Decides between the two sides of the conformal dichotomy by experiment:
/// with a full digit axis the tangent witnesses the maximal value, otherwise
/// every scale radius = 2 n^2 m^-k_hat for k_hat = 3..depth is checked to
/// admit no chain escape at step radius / (4 m n^3), and the critical step
/// is bracketed per start via the ladder. Requires n > m.
DisconnectionReport classify_uniform_disconnection(const BMCarpet& carpet,
                                                   unsigned depth = 6);

/// Word-level escape probe for the nonlinear family. Rectangles of all
/// length-`level` words form the graph; starts are sampled and probed with
/// the same descending ladder. Heuristic evidence only: no scaling theorem
/// calibrates radius here, so it is fixed at 1/4.
std::vector<EscapeSample> lg_escape_samples(const LGCarpet& carpet,
                                            unsigned level,
                                            std::uint64_t budget = 200'000);

}  // namespace carpets
