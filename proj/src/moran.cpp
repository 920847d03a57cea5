#include "carpets/moran.hpp"

#include <cmath>
#include <string>

#include "carpets/errors.hpp"
#include "carpets/numeric.hpp"

namespace carpets {

namespace {

double eval(const MoranProblem& p, double beta) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.ratios.size(); ++i) {
    double w = p.weights.empty() ? 1.0 : p.weights[i];
    sum += w * std::pow(p.ratios[i], beta);
  }
  return sum;
}

double eval_derivative(const MoranProblem& p, double beta) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.ratios.size(); ++i) {
    double w = p.weights.empty() ? 1.0 : p.weights[i];
    sum += w * std::pow(p.ratios[i], beta) * std::log(p.ratios[i]);
  }
  return sum;
}

}  // namespace

double moran_root(const MoranProblem& p) {
  if (p.ratios.empty()) fail(Err::EmptyDigitSet, "no contraction ratios");
  if (!p.weights.empty() && p.weights.size() != p.ratios.size())
    fail(Err::ParseError, "weights/ratios length mismatch");
  for (double r : p.ratios)
    if (!(r > 0.0) || !(r < 1.0))
      fail(Err::MassViolation,
           "contraction ratio " + format_sig(r) + " outside (0,1)");
  for (double w : p.weights)
    if (!(w > 0.0))
      fail(Err::MassViolation, "weight " + format_sig(w) + " not positive");

  double at_zero = eval(p, 0.0);
  if (p.target > at_zero)
    fail(Err::NoRoot, "target " + format_sig(p.target) + " exceeds value " +
                          format_sig(at_zero) + " at beta = 0");
  if (p.target == at_zero) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (eval(p, hi) > p.target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int step = 0; step < 200 && hi - lo > 1e-15; ++step) {
    double mid = 0.5 * (lo + hi);
    if (eval(p, mid) > p.target)
      lo = mid;
    else
      hi = mid;
  }
  double root = 0.5 * (lo + hi);
  for (int polish = 0; polish < 3; ++polish) {
    double d = eval_derivative(p, root);
    if (d == 0.0) break;
    double next = root - (eval(p, root) - p.target) / d;
    if (next >= lo && next <= hi) root = next;
  }
  return root;
}

double lg_beta_y(const LGCarpet& carpet) {
  if (carpet.all_exact()) {
    Rational sum = 0;
    for (const auto& row : carpet.rows) sum += row.height.rat;
    if (sum == 1) return 1.0;
  } else {
    double sum = 0.0;
    for (const auto& row : carpet.rows) sum += row.height.value;
    if (std::fabs(sum - 1.0) <= kExactTol) return 1.0;
  }
  MoranProblem p;
  for (const auto& row : carpet.rows) p.ratios.push_back(row.height.value);
  return moran_root(p);
}

FiberRoot lg_beta_x(const LGCarpet& carpet) {
  FiberRoot best;
  best.value = -1.0;
  for (std::size_t i = 0; i < carpet.rows.size(); ++i) {
    MoranProblem p;
    for (const auto& col : carpet.rows[i].cols)
      p.ratios.push_back(col.width.value);
    double root = moran_root(p);
    if (root > best.value) {
      best.value = root;
      best.row = i;
    }
  }
  return best;
}

double lg_minkowski_delta(const LGCarpet& carpet, double beta_y) {
  // Substituting gamma = delta - beta_y gives a weighted Moran problem in
  // gamma with weights height^beta_y; gamma = 0 is legal (one column per
  // row makes the weights sum to 1 already).
  MoranProblem p;
  for (const auto& row : carpet.rows) {
    double w = std::pow(row.height.value, beta_y);
    for (const auto& col : row.cols) {
      p.ratios.push_back(col.width.value);
      p.weights.push_back(w);
    }
  }
  // The weight sum is >= 1 mathematically (it is sum height^beta_y counted
  // once per column); a value at or below 1 means gamma = 0 up to roundoff.
  double sum_w = 0.0;
  for (double w : p.weights) sum_w += w;
  if (sum_w <= 1.0) return beta_y;
  return beta_y + moran_root(p);
}

}  // namespace carpets
