#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>
#include <vector>

#include "rismm/phases.hpp"
#include "rismm/rng.hpp"

namespace rismm {

struct RandomizationResult {
  PhaseVector phases;       // continuous, length I
  Eigen::VectorXcd unit;    // the unit-modulus candidate that won
  double score = 0.0;
};

/// Rank-one recovery from a lifted psd solution: draws `count` Gaussian
/// candidates from the solution's column space, projects each onto the
/// unit-modulus set by de-rotating against the homogenization entry, and
/// keeps the first candidate attaining the best score.
///
/// `score` maps a unit-modulus vector of length I (= lifted order - 1) to a
/// real value; the candidates are scored after projection, so every score is
/// attained by a feasible phase profile.
template <typename ScoreFn>
RandomizationResult gaussian_randomize(const Eigen::MatrixXcd& lifted_psd, ScoreFn&& score,
                                       int count, Rng& rng) {
  const int n = static_cast<int>(lifted_psd.rows());
  const int i_dim = n - 1;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lifted_psd);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  // Drop numerically-zero directions so they cannot contaminate candidates.
  const double floor = 1e-12 * lam.maxCoeff();
  lam = (lam.array() < floor).select(0.0, lam);
  Eigen::MatrixXcd factor = es.eigenvectors() * lam.cwiseSqrt().asDiagonal();

  RandomizationResult best;
  best.score = -std::numeric_limits<double>::infinity();
  Eigen::VectorXcd draw(n), cand(n), unit(i_dim);
  for (int trial = 0; trial < count; ++trial) {
    for (int i = 0; i < n; ++i) draw(i) = rng.cnormal();
    cand = factor * draw;
    const double ref = std::abs(cand(i_dim)) > 0.0 ? std::arg(cand(i_dim)) : 0.0;
    for (int i = 0; i < i_dim; ++i) unit(i) = std::polar(1.0, std::arg(cand(i)) - ref);
    const double value = score(unit);
    if (value > best.score) {
      best.score = value;
      best.unit = unit;
    }
  }

  std::vector<double> theta(i_dim);
  for (int i = 0; i < i_dim; ++i) {
    double t = -std::arg(best.unit(i));  // candidate entries are e^{-j theta}
    if (t < 0.0) t += 2.0 * M_PI;
    if (t >= 2.0 * M_PI) t = 0.0;
    theta[i] = t;
  }
  best.phases = PhaseVector::continuous(std::move(theta));
  return best;
}

}  // namespace rismm
