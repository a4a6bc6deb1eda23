#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rismm {

/// Stacked reflection phase shifts for all surfaces, entry i = (l-1)*N + n.
/// Continuous mode stores radians in [0, 2*pi); discrete mode stores level
/// indices into the uniform grid {0, step, ..., (2^bits - 1)*step}.
struct PhaseVector {
  int bits = 0;  // 0 = continuous
  std::vector<double> theta;
  std::vector<int> levels;

  static PhaseVector continuous(std::vector<double> radians) {
    PhaseVector p;
    p.theta = std::move(radians);
    for (double& t : p.theta) {
      t = std::fmod(t, 2.0 * M_PI);
      if (t < 0.0) t += 2.0 * M_PI;
    }
    return p;
  }

  static PhaseVector discrete(int bits, std::vector<int> levels) {
    if (bits < 1) throw std::domain_error("PhaseVector: bits must be >= 1");
    PhaseVector p;
    p.bits = bits;
    p.levels = std::move(levels);
    const int B = 1 << bits;
    for (int v : p.levels)
      if (v < 0 || v >= B) throw std::domain_error("PhaseVector: level index out of range");
    return p;
  }

  static PhaseVector zeros_continuous(int n) {
    return continuous(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }

  static PhaseVector zeros_discrete(int bits, int n) {
    return discrete(bits, std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  bool is_discrete() const { return bits > 0; }
  int size() const {
    return static_cast<int>(is_discrete() ? levels.size() : theta.size());
  }
  int num_levels() const { return is_discrete() ? (1 << bits) : 0; }

  double angle(int i) const {
    if (is_discrete()) return levels[i] * 2.0 * M_PI / num_levels();
    return theta[i];
  }

  /// Reflection coefficients e^{j*theta_i}, exactly unit modulus.
  Eigen::VectorXcd reflection() const {
    Eigen::VectorXcd r(size());
    for (int i = 0; i < size(); ++i) r(i) = std::polar(1.0, angle(i));
    return r;
  }
};

/// Maps each continuous phase to the nearest level of the uniform grid with
/// 2^bits points, ties resolved toward the lower level and wraparound toward
/// level 0.
inline PhaseVector quantize_phases(const PhaseVector& continuous, int bits) {
  if (continuous.is_discrete())
    throw std::domain_error("quantize_phases: input must be continuous");
  if (bits < 1) throw std::domain_error("quantize_phases: bits must be >= 1");
  const int B = 1 << bits;
  const double step = 2.0 * M_PI / B;
  std::vector<int> levels(continuous.theta.size());
  for (std::size_t i = 0; i < continuous.theta.size(); ++i) {
    const double ratio = continuous.theta[i] / step;
    int lo = static_cast<int>(std::floor(ratio));
    // Strictly-above-midpoint rounds up; exact midpoint keeps the lower level.
    int level = (ratio - lo > 0.5) ? lo + 1 : lo;
    levels[i] = ((level % B) + B) % B;
  }
  return PhaseVector::discrete(bits, std::move(levels));
}

}  // namespace rismm
