#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace plc {

/// Uniform (x, t) lattice on [0, pi] x [0, T] with the solution fields.
/// Storage is row-major in time: index(k, i) = k * (nx + 1) + i.
struct PhysGrid {
  int nx = 0;
  int nt = 0;
  double dx = 0.0;
  double dt = 0.0;

  std::vector<double> theta, theta_t, theta_x, u, J;
  std::vector<std::uint8_t> cusp;  ///< 1 where theta_t/theta_x carry a cusp sentinel

  static PhysGrid make(int nx, int nt, double T);

  double x(int i) const { return i * dx; }
  double t(int k) const { return k * dt; }
  double horizon() const { return nt * dt; }
  std::size_t stride() const { return static_cast<std::size_t>(nx) + 1; }
  std::size_t size() const { return stride() * (static_cast<std::size_t>(nt) + 1); }
  std::size_t index(int k, int i) const { return static_cast<std::size_t>(k) * stride() + i; }

  /// Bilinear interpolation of a field; (x, t) are clamped into the grid.
  double interpolate(const std::vector<double>& f, double x, double t) const;
  /// Same, with t additionally clamped to at most t_cap.
  double interpolate(const std::vector<double>& f, double x, double t, double t_cap) const;
};

}  // namespace plc
