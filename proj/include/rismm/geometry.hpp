#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace rismm {

/// Uniform rectangular array: `rows x cols` elements on a regular grid with
/// the given spacing. Element n = r*cols + c sits at local offset
/// (c*spacing, 0, r*spacing); the array normal points along the local y axis.
struct UraGeometry {
  int rows = 1;
  int cols = 1;
  double spacing_m = 0.05;

  int size() const { return rows * cols; }
};

/// Near-square factorization of n into rows x cols (rows <= cols).
inline UraGeometry square_ura(int n, double spacing_m) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r > 1 && n % r != 0) --r;
  return UraGeometry{r, n / r, spacing_m};
}

/// Planar-wavefront response of the array for a unit propagation direction
/// expressed in the array's local frame. Entry n carries the phase advance of
/// element n relative to the array origin; broadside (direction along the
/// normal) gives the all-ones vector.
inline Eigen::VectorXcd ura_response(const UraGeometry& geom,
                                     const Eigen::Vector3d& unit_dir,
                                     double wavelength_m) {
  const double k = 2.0 * M_PI / wavelength_m;
  Eigen::VectorXcd a(geom.size());
  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      Eigen::Vector3d offset(c * geom.spacing_m, 0.0, r * geom.spacing_m);
      double phase = k * offset.dot(unit_dir);
      a(r * geom.cols + c) = std::polar(1.0, phase);
    }
  }
  return a;
}

/// Line-of-sight array response seen at `array_pos` toward `far_pos`. The
/// array's local x/z axes are aligned with the global x/z axes (panels mounted
/// vertically, facing along y).
inline Eigen::VectorXcd los_response(const Eigen::Vector3d& array_pos,
                                     const Eigen::Vector3d& far_pos,
                                     const UraGeometry& geom,
                                     double wavelength_m) {
  Eigen::Vector3d d = far_pos - array_pos;
  double dist = d.norm();
  if (!(dist > 0.0)) throw std::domain_error("los_response: coincident positions");
  return ura_response(geom, d / dist, wavelength_m);
}

}  // namespace rismm
