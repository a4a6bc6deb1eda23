#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rismm {

// Dense revised simplex for box-constrained linear programs
//
//   max c^T x   s.t.  E x = f,  lo <= x <= hi  (all bounds finite),
//
// two-phase with artificial variables, Dantzig pricing switching to Bland's
// rule after a run of degenerate pivots. Sized for the small relaxations that
// arise in branch-and-bound nodes; the basis is refactorized every pivot.

enum class LpStatus { optimal, infeasible, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

class BoundedSimplex {
 public:
  BoundedSimplex(Eigen::MatrixXd e, Eigen::VectorXd f, Eigen::VectorXd c,
                 Eigen::VectorXd lo, Eigen::VectorXd hi)
      : e_(std::move(e)), f_(std::move(f)), c_(std::move(c)), lo_(std::move(lo)),
        hi_(std::move(hi)), m_(static_cast<int>(e_.rows())), n_(static_cast<int>(e_.cols())) {
    if (f_.size() != m_ || c_.size() != n_ || lo_.size() != n_ || hi_.size() != n_)
      throw std::invalid_argument("simplex: inconsistent dimensions");
  }

  LpSolution solve(int max_pivots = 20000) {
    // Working arrays over n real + m artificial columns.
    const int total = n_ + m_;
    x_.resize(total);
    lo_w_.resize(total);
    hi_w_.resize(total);
    at_upper_.assign(total, false);
    basic_.assign(total, false);

    for (int j = 0; j < n_; ++j) {
      if (lo_(j) > hi_(j) + 1e-12) return {LpStatus::infeasible, {}, 0.0};
      lo_w_(j) = lo_(j);
      hi_w_(j) = hi_(j);
      x_(j) = lo_(j);
      at_upper_[j] = false;
    }
    Eigen::VectorXd resid = f_ - stretch_e() * x_.head(n_);
    basis_.resize(m_);
    art_sign_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      art_sign_(i) = resid(i) >= 0.0 ? 1.0 : -1.0;
      lo_w_(n_ + i) = 0.0;
      hi_w_(n_ + i) = std::numeric_limits<double>::infinity();
      x_(n_ + i) = std::abs(resid(i));
      basis_[i] = n_ + i;
      basic_[n_ + i] = true;
    }

    // Phase 1: minimize the artificial mass.
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(total);
    phase1_cost.tail(m_).setConstant(-1.0);
    if (!iterate(phase1_cost, max_pivots)) return {LpStatus::iteration_limit, {}, 0.0};
    double art_mass = x_.tail(m_).sum();
    if (art_mass > 1e-7) return {LpStatus::infeasible, {}, 0.0};
    // Lock artificials at zero.
    for (int i = 0; i < m_; ++i) hi_w_(n_ + i) = 0.0;

    // Phase 2: the real objective.
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
    cost.head(n_) = c_;
    if (!iterate(cost, max_pivots)) return {LpStatus::iteration_limit, {}, 0.0};

    LpSolution out;
    out.status = LpStatus::optimal;
    out.x = x_.head(n_);
    out.objective = c_.dot(out.x);
    return out;
  }

 private:
  Eigen::MatrixXd stretch_e() const { return e_; }

  double column_dot(const Eigen::VectorXd& v, int j) const {
    if (j < n_) return v.dot(e_.col(j));
    return v(j - n_) * art_sign_(j - n_);
  }

  Eigen::VectorXd column(int j) const {
    if (j < n_) return e_.col(j);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
    a(j - n_) = art_sign_(j - n_);
    return a;
  }

  bool iterate(const Eigen::VectorXd& cost, int max_pivots) {
    const int total = n_ + m_;
    int degenerate_streak = 0;
    for (int pivot = 0; pivot < max_pivots; ++pivot) {
      Eigen::MatrixXd b(m_, m_);
      for (int i = 0; i < m_; ++i) b.col(i) = column(basis_[i]);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);

      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      Eigen::VectorXd pi = lu.transpose().solve(cb);

      const bool bland = degenerate_streak > 40;
      int enter = -1;
      double best_score = 1e-9;
      int direction = 0;  // +1 rising from lower, -1 falling from upper
      for (int j = 0; j < total; ++j) {
        if (basic_[j] || lo_w_(j) == hi_w_(j)) continue;
        double d = cost(j) - column_dot(pi, j);
        int dir = 0;
        if (!at_upper_[j] && d > 1e-9) dir = 1;
        else if (at_upper_[j] && d < -1e-9) dir = -1;
        if (dir == 0) continue;
        if (bland) {
          enter = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          enter = j;
          direction = dir;
        }
      }
      if (enter < 0) return true;  // optimal for this phase

      Eigen::VectorXd w = lu.solve(column(enter));
      // Entering moves by t*direction; basic values move by -w*t*direction.
      double t_max = hi_w_(enter) - lo_w_(enter);
      int leave = -1;    // index into basis_
      int leave_to = 0;  // -1 to lower, +1 to upper
      for (int i = 0; i < m_; ++i) {
        double delta = -w(i) * direction;
        int bj = basis_[i];
        double room;
        int to;
        if (delta < -1e-12) {
          room = (x_(bj) - lo_w_(bj)) / (-delta);
          to = -1;
        } else if (delta > 1e-12) {
          room = (hi_w_(bj) - x_(bj)) / delta;
          to = 1;
        } else {
          continue;
        }
        const bool better = room < t_max - 1e-12;
        const bool tie_break = bland && room < t_max + 1e-12 && leave >= 0 &&
                               basis_[i] < basis_[leave];
        if (better || tie_break) {
          t_max = std::min(t_max, room);
          leave = i;
          leave_to = to;
        }
      }
      if (!std::isfinite(t_max)) return false;  // unbounded: cannot happen with finite boxes
      if (t_max < 0.0) t_max = 0.0;
      degenerate_streak = t_max < 1e-11 ? degenerate_streak + 1 : 0;

      // Apply the move.
      x_(enter) += direction * t_max;
      for (int i = 0; i < m_; ++i) x_(basis_[i]) -= w(i) * direction * t_max;

      if (leave < 0) {
        // Bound flip: entering variable swaps ends, basis unchanged.
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }
      int out_var = basis_[leave];
      basic_[out_var] = false;
      at_upper_[out_var] = leave_to > 0;
      x_(out_var) = leave_to > 0 ? hi_w_(out_var) : lo_w_(out_var);
      basis_[leave] = enter;
      basic_[enter] = true;
    }
    return false;
  }

  Eigen::MatrixXd e_;
  Eigen::VectorXd f_, c_, lo_, hi_;
  int m_, n_;

  Eigen::VectorXd x_, lo_w_, hi_w_, art_sign_;
  std::vector<int> basis_;
  std::vector<bool> at_upper_, basic_;
};

inline LpSolution solve_box_lp(const Eigen::MatrixXd& e, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& c, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi, int max_pivots = 20000) {
  return BoundedSimplex(e, f, c, lo, hi).solve(max_pivots);
}

}  // namespace rismm
