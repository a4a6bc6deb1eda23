#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rismm/lp/simplex.hpp"

namespace rismm {

// Exact maximization of the discrete-phase quadratic bound
//
//   f(theta) = v^H Q v + 2 Re(v^H xi) + const,   v_i^H = e^{j theta_i},
//   theta_i in {0, step, ..., (B-1) step},
//
// linearized over one-hot level selectors: each element carries a selector
// group, each ordered pair a difference-selector group plus a wrap binary
// tying the pair's level to the difference of the element levels. The
// linearization is exact: any feasible selection scores exactly f.

struct BilpProblem {
  int count = 0;   // I
  int levels = 0;  // B = 2^bits
  int bits = 0;

  Eigen::MatrixXd single_coeff;  // I x B
  Eigen::MatrixXd pair_coeff;    // P x B, pairs in lexicographic (i1 < i2) order
  double constant = 0.0;
  std::vector<std::pair<int, int>> pairs;

  int pair_count() const { return static_cast<int>(pairs.size()); }
  int pair_index(int i1, int i2) const {  // requires i1 < i2
    return i1 * count - i1 * (i1 + 1) / 2 + (i2 - i1 - 1);
  }

  // LP column layout: element selectors, pair selectors, wrap binaries.
  int col_single(int i, int b) const { return i * levels + b; }
  int col_pair(int p, int b) const { return count * levels + p * levels + b; }
  int col_wrap(int p) const { return (count + pair_count()) * levels + p; }
  int num_cols() const { return (count + pair_count()) * levels + pair_count(); }

  int wrapped_diff(int l1, int l2) const { return ((l1 - l2) % levels + levels) % levels; }

  /// Exact objective of a level assignment.
  double objective_of(const std::vector<int>& level) const {
    double obj = constant;
    for (int i = 0; i < count; ++i) obj += single_coeff(i, level[i]);
    for (int p = 0; p < pair_count(); ++p)
      obj += pair_coeff(p, wrapped_diff(level[pairs[p].first], level[pairs[p].second]));
    return obj;
  }
};

inline BilpProblem build_bilp(const Eigen::MatrixXcd& quad, const Eigen::VectorXcd& linear,
                              int bits) {
  if (bits < 1) throw std::domain_error("build_bilp: bits must be >= 1");
  const int i_dim = static_cast<int>(quad.rows());
  if (quad.cols() != i_dim || linear.size() != i_dim)
    throw std::invalid_argument("build_bilp: dimension mismatch");

  BilpProblem prob;
  prob.count = i_dim;
  prob.bits = bits;
  prob.levels = 1 << bits;
  const double step = 2.0 * M_PI / prob.levels;

  prob.single_coeff.resize(i_dim, prob.levels);
  for (int i = 0; i < i_dim; ++i) {
    prob.constant += quad(i, i).real();
    for (int b = 0; b < prob.levels; ++b)
      prob.single_coeff(i, b) = 2.0 * std::real(linear(i) * std::polar(1.0, b * step));
  }

  prob.pairs.reserve(static_cast<std::size_t>(i_dim) * (i_dim - 1) / 2);
  for (int i1 = 0; i1 < i_dim; ++i1)
    for (int i2 = i1 + 1; i2 < i_dim; ++i2) prob.pairs.emplace_back(i1, i2);
  prob.pair_coeff.resize(prob.pair_count(), prob.levels);
  for (int p = 0; p < prob.pair_count(); ++p) {
    auto [i1, i2] = prob.pairs[p];
    for (int b = 0; b < prob.levels; ++b)
      prob.pair_coeff(p, b) = 2.0 * std::real(quad(i1, i2) * std::polar(1.0, b * step));
  }
  return prob;
}

enum class BilpStatus { optimal, node_limit };

struct BilpSolution {
  std::vector<int> levels;
  double objective_value = 0.0;
  BilpStatus status = BilpStatus::node_limit;
  long explored_nodes = 0;
  double best_bound = 0.0;
};

struct BilpOptions {
  long node_limit = 1000000;
  std::optional<std::vector<int>> seed_levels;
  // LP relaxation bounds are used while the column count stays below this;
  // larger instances fall back to the cheap pairwise decoupled bound.
  int lp_column_limit = 2500;
  std::ostream* node_log = nullptr;  // CSV rows: node id, bound, incumbent
};

namespace bilp_detail {

using Mask = std::vector<std::uint8_t>;  // allowed levels of one selector group

struct Node {
  double bound = 0.0;
  long id = 0;
  // Sparse overrides of the root's all-allowed masks. Element groups are
  // keyed by their index, pair groups by count + pair index.
  std::vector<std::pair<int, Mask>> restricted;

  bool operator<(const Node& other) const { return bound < other.bound; }
};

inline const Mask* find_mask(const std::vector<std::pair<int, Mask>>& restricted, int key) {
  for (const auto& [k, m] : restricted)
    if (k == key) return &m;
  return nullptr;
}

/// Allowed wrapped differences of a pair given the element masks, intersected
/// with the pair group's own branching restriction.
inline Mask pair_mask(const BilpProblem& prob, const Mask& m1, const Mask& m2,
                      const Mask* own) {
  Mask out(prob.levels, 0);
  for (int l1 = 0; l1 < prob.levels; ++l1) {
    if (!m1[l1]) continue;
    for (int l2 = 0; l2 < prob.levels; ++l2) {
      if (!m2[l2]) continue;
      out[prob.wrapped_diff(l1, l2)] = 1;
    }
  }
  if (own)
    for (int b = 0; b < prob.levels; ++b) out[b] &= (*own)[b];
  return out;
}

/// Decoupled upper bound: every group contributes its best allowed level.
inline double pairwise_bound(const BilpProblem& prob, const std::vector<Mask>& single,
                             const std::vector<Mask>& pair) {
  double bound = prob.constant;
  for (int i = 0; i < prob.count; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < prob.levels; ++b)
      if (single[i][b]) best = std::max(best, prob.single_coeff(i, b));
    if (!std::isfinite(best)) return -std::numeric_limits<double>::infinity();
    bound += best;
  }
  for (int p = 0; p < prob.pair_count(); ++p) {
    double best = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < prob.levels; ++b)
      if (pair[p][b]) best = std::max(best, prob.pair_coeff(p, b));
    if (!std::isfinite(best)) return -std::numeric_limits<double>::infinity();
    bound += best;
  }
  return bound;
}

struct LpOutcome {
  bool usable = false;
  double bound = 0.0;
  Eigen::VectorXd x;
};

/// Relaxation with the one-hot and linking rows, boxes shrunk by the node's
/// masks. Row scaling uses integer level indices so the linking equality is
/// exactly representable.
inline LpOutcome lp_bound(const BilpProblem& prob, const std::vector<Mask>& single,
                          const std::vector<Mask>& pair) {
  const int ncols = prob.num_cols();
  const int P = prob.pair_count();
  const int nrows = prob.count + 2 * P;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nrows, ncols);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(nrows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ncols);
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(ncols);
  Eigen::VectorXd hi = Eigen::VectorXd::Ones(ncols);

  for (int i = 0; i < prob.count; ++i) {
    for (int b = 0; b < prob.levels; ++b) {
      e(i, prob.col_single(i, b)) = 1.0;
      c(prob.col_single(i, b)) = prob.single_coeff(i, b);
      if (!single[i][b]) hi(prob.col_single(i, b)) = 0.0;
    }
    f(i) = 1.0;
  }
  for (int p = 0; p < P; ++p) {
    auto [i1, i2] = prob.pairs[p];
    const int sos_row = prob.count + p;
    const int link_row = prob.count + P + p;
    bool can_wrap0 = false, can_wrap1 = false;
    for (int l1 = 0; l1 < prob.levels; ++l1) {
      if (!single[i1][l1]) continue;
      for (int l2 = 0; l2 < prob.levels; ++l2) {
        if (!single[i2][l2]) continue;
        (l1 >= l2 ? can_wrap0 : can_wrap1) = true;
      }
    }
    for (int b = 0; b < prob.levels; ++b) {
      e(sos_row, prob.col_pair(p, b)) = 1.0;
      c(prob.col_pair(p, b)) = prob.pair_coeff(p, b);
      if (!pair[p][b]) hi(prob.col_pair(p, b)) = 0.0;
      // level(i1) - level(i2) + B*wrap = pair level
      e(link_row, prob.col_single(i1, b)) = b;
      e(link_row, prob.col_single(i2, b)) -= b;
      e(link_row, prob.col_pair(p, b)) = -static_cast<double>(b);
    }
    f(sos_row) = 1.0;
    e(link_row, prob.col_wrap(p)) = prob.levels;
    if (!can_wrap0) lo(prob.col_wrap(p)) = 1.0;
    if (!can_wrap1) hi(prob.col_wrap(p)) = 0.0;
  }

  auto sol = solve_box_lp(e, f, c, lo, hi);
  LpOutcome out;
  if (sol.status != LpStatus::optimal) return out;
  out.usable = true;
  out.bound = sol.objective + prob.constant;
  out.x = std::move(sol.x);
  return out;
}

/// Greedy coordinate ascent over the exact objective; used to seed and to
/// polish incumbents. Deterministic.
inline void coordinate_ascent(const BilpProblem& prob, const std::vector<Mask>& single,
                              std::vector<int>& level) {
  const int P = prob.pair_count();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool changed = false;
    for (int i = 0; i < prob.count; ++i) {
      int best_b = level[i];
      double best_delta = 0.0;
      for (int b = 0; b < prob.levels; ++b) {
        if (b == level[i] || !single[i][b]) continue;
        double delta = prob.single_coeff(i, b) - prob.single_coeff(i, level[i]);
        for (int j = 0; j < prob.count; ++j) {
          if (j == i) continue;
          int p = j < i ? prob.pair_index(j, i) : prob.pair_index(i, j);
          int old_d = j < i ? prob.wrapped_diff(level[j], level[i])
                            : prob.wrapped_diff(level[i], level[j]);
          int new_d = j < i ? prob.wrapped_diff(level[j], b) : prob.wrapped_diff(b, level[j]);
          delta += prob.pair_coeff(p, new_d) - prob.pair_coeff(p, old_d);
        }
        if (delta > best_delta + 1e-15) {
          best_delta = delta;
          best_b = b;
        }
      }
      if (best_b != level[i]) {
        level[i] = best_b;
        changed = true;
      }
    }
    if (!changed) break;
  }
  (void)P;
}

}  // namespace bilp_detail

inline BilpSolution solve_bilp(const BilpProblem& prob, const BilpOptions& opts = {}) {
  using namespace bilp_detail;
  const int P = prob.pair_count();
  const bool use_lp = prob.num_cols() <= opts.lp_column_limit;
  const double int_tol = 1e-7;

  BilpSolution out;

  // Incumbent: seed (or zeros) polished by coordinate ascent.
  std::vector<Mask> root_single(prob.count, Mask(prob.levels, 1));
  std::vector<int> incumbent(prob.count, 0);
  if (opts.seed_levels) {
    if (static_cast<int>(opts.seed_levels->size()) != prob.count)
      throw std::invalid_argument("solve_bilp: seed length mismatch");
    incumbent = *opts.seed_levels;
  }
  coordinate_ascent(prob, root_single, incumbent);
  out.levels = incumbent;
  out.objective_value = prob.objective_of(incumbent);

  auto prune_tol = [&](double inc) { return 1e-9 * (1.0 + std::abs(inc)); };

  std::priority_queue<Node> open;
  Node root;
  root.bound = std::numeric_limits<double>::infinity();
  open.push(root);
  long next_id = 1;
  double explored_bound_max = -std::numeric_limits<double>::infinity();

  std::vector<Mask> single(prob.count), pair_masks(P);
  while (!open.empty()) {
    if (out.explored_nodes >= opts.node_limit) {
      out.status = BilpStatus::node_limit;
      out.best_bound = std::max(out.objective_value, open.top().bound);
      if (!std::isfinite(out.best_bound))
        out.best_bound = std::max(out.objective_value, explored_bound_max);
      return out;
    }
    Node node = open.top();
    open.pop();
    if (node.bound <= out.objective_value + prune_tol(out.objective_value)) continue;
    ++out.explored_nodes;

    // Materialize masks.
    for (int i = 0; i < prob.count; ++i) {
      const Mask* m = find_mask(node.restricted, i);
      single[i] = m ? *m : Mask(prob.levels, 1);
    }
    bool empty_group = false;
    for (int i = 0; i < prob.count && !empty_group; ++i)
      empty_group = std::count(single[i].begin(), single[i].end(), 1) == 0;
    if (empty_group) continue;
    for (int p = 0; p < P; ++p) {
      auto [i1, i2] = prob.pairs[p];
      pair_masks[p] =
          pair_mask(prob, single[i1], single[i2], find_mask(node.restricted, prob.count + p));
      if (std::count(pair_masks[p].begin(), pair_masks[p].end(), 1) == 0) {
        empty_group = true;
        break;
      }
    }
    if (empty_group) continue;

    double bound = pairwise_bound(prob, single, pair_masks);
    LpOutcome lp;
    if (use_lp && bound > out.objective_value + prune_tol(out.objective_value)) {
      lp = lp_bound(prob, single, pair_masks);
      if (lp.usable) bound = std::min(bound, lp.bound);
    }
    explored_bound_max = std::max(explored_bound_max, bound);
    if (bound <= out.objective_value + prune_tol(out.objective_value)) continue;
    if (opts.node_log)
      *opts.node_log << node.id << ',' << bound << ',' << out.objective_value << '\n';

    // Harvest an integer candidate from the LP (or the masks) and polish it.
    std::vector<int> candidate(prob.count, 0);
    bool integral = lp.usable;
    for (int i = 0; i < prob.count; ++i) {
      int argmax = -1;
      double best_val = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < prob.levels; ++b) {
        if (!single[i][b]) continue;
        double val = lp.usable ? lp.x(prob.col_single(i, b)) : prob.single_coeff(i, b);
        if (val > best_val) {
          best_val = val;
          argmax = b;
        }
        if (lp.usable) {
          double frac = lp.x(prob.col_single(i, b));
          if (frac > int_tol && frac < 1.0 - int_tol) integral = false;
        }
      }
      candidate[i] = argmax;
    }
    int fractional_wrap_pair = -1;
    if (lp.usable) {
      // Pair selectors and wrap binaries must be integral too, otherwise the
      // LP value is not attained by any assignment.
      for (int p = 0; p < P; ++p) {
        for (int b = 0; b < prob.levels; ++b) {
          double frac = lp.x(prob.col_pair(p, b));
          if (frac > int_tol && frac < 1.0 - int_tol) integral = false;
        }
        double wrap = lp.x(prob.col_wrap(p));
        if (wrap > int_tol && wrap < 1.0 - int_tol) {
          integral = false;
          if (fractional_wrap_pair < 0) fractional_wrap_pair = p;
        }
      }
    }
    double cand_obj = prob.objective_of(candidate);
    if (cand_obj > out.objective_value) {
      out.objective_value = cand_obj;
      out.levels = candidate;
    }
    std::vector<int> polished = candidate;
    coordinate_ascent(prob, root_single, polished);
    double pol_obj = prob.objective_of(polished);
    if (pol_obj > out.objective_value) {
      out.objective_value = pol_obj;
      out.levels = polished;
    }
    if (lp.usable && integral) continue;  // node solved exactly by its LP
    if (bound <= out.objective_value + prune_tol(out.objective_value)) continue;

    // Branch on the most fractional selector group (LP mass), or the widest
    // group when no LP is available.
    int branch_key = -1;
    double branch_score = -1.0;
    auto mass = [&](int key, const Mask& mask, bool is_pair, int p_idx) {
      if (std::count(mask.begin(), mask.end(), 1) <= 1) return -1.0;
      if (!lp.usable) return static_cast<double>(std::count(mask.begin(), mask.end(), 1));
      double frac_mass = 0.0;
      for (int b = 0; b < prob.levels; ++b) {
        if (!mask[b]) continue;
        double v = is_pair ? lp.x(prob.col_pair(p_idx, b)) : lp.x(prob.col_single(key, b));
        frac_mass += std::min(v, 1.0 - v);
      }
      return frac_mass;
    };
    for (int i = 0; i < prob.count; ++i) {
      double s = mass(i, single[i], false, -1);
      if (s > branch_score + 1e-15) {
        branch_score = s;
        branch_key = i;
      }
    }
    for (int p = 0; p < P; ++p) {
      double s = mass(prob.count + p, pair_masks[p], true, p);
      if (s > branch_score + 1e-15) {
        branch_score = s;
        branch_key = prob.count + p;
      }
    }
    // Integral selectors with a fractional wrap: force consistency by
    // shrinking one of the fractional pair's element groups.
    if (lp.usable && branch_score <= int_tol && fractional_wrap_pair >= 0) {
      auto [i1, i2] = prob.pairs[fractional_wrap_pair];
      if (std::count(single[i1].begin(), single[i1].end(), 1) > 1) branch_key = i1;
      else if (std::count(single[i2].begin(), single[i2].end(), 1) > 1) branch_key = i2;
    }
    if (branch_key < 0) continue;  // all groups singletons: candidate was exact

    const Mask& full = branch_key < prob.count ? single[branch_key]
                                               : pair_masks[branch_key - prob.count];
    std::vector<int> allowed;
    for (int b = 0; b < prob.levels; ++b)
      if (full[b]) allowed.push_back(b);
    const std::size_t half = allowed.size() / 2;
    for (int side = 0; side < 2; ++side) {
      Mask m(prob.levels, 0);
      const std::size_t begin = side == 0 ? 0 : half;
      const std::size_t end = side == 0 ? half : allowed.size();
      for (std::size_t idx = begin; idx < end; ++idx) m[allowed[idx]] = 1;
      Node child;
      child.bound = bound;
      child.id = next_id++;
      child.restricted = node.restricted;
      bool replaced = false;
      for (auto& [k, existing] : child.restricted)
        if (k == branch_key) {
          existing = m;
          replaced = true;
          break;
        }
      if (!replaced) child.restricted.emplace_back(branch_key, m);
      open.push(std::move(child));
    }
  }

  out.status = BilpStatus::optimal;
  out.best_bound = out.objective_value;
  return out;
}

}  // namespace rismm
