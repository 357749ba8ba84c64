#include "plc/phys_grid.hpp"

#include <algorithm>
#include <cmath>

#include "plc/errors.hpp"

namespace plc {

PhysGrid PhysGrid::make(int nx, int nt, double T) {
  if (nx < 2 || nt < 1 || !(T > 0.0))
    throw Error(ErrorCode::InvalidArgument, "grid", "physical grid needs nx >= 2, nt >= 1, T > 0");
  PhysGrid g;
  g.nx = nx;
  g.nt = nt;
  g.dx = M_PI / nx;
  g.dt = T / nt;
  std::size_t n = g.size();
  g.theta.assign(n, 0.0);
  g.theta_t.assign(n, 0.0);
  g.theta_x.assign(n, 0.0);
  g.u.assign(n, 0.0);
  g.J.assign(n, 0.0);
  g.cusp.assign(n, 0);
  return g;
}

double PhysGrid::interpolate(const std::vector<double>& f, double x, double t) const {
  return interpolate(f, x, t, horizon());
}

double PhysGrid::interpolate(const std::vector<double>& f, double x, double t, double t_cap) const {
  x = std::clamp(x, 0.0, M_PI);
  t = std::clamp(t, 0.0, std::min(t_cap, horizon()));
  double fx = x / dx, ft = t / dt;
  int i = std::min(static_cast<int>(fx), nx - 1);
  int k = std::min(static_cast<int>(ft), nt - 1);
  double a = fx - i, b = ft - k;
  std::size_t s = stride();
  const double* r0 = f.data() + static_cast<std::size_t>(k) * s + i;
  const double* r1 = r0 + s;
  return (1.0 - b) * ((1.0 - a) * r0[0] + a * r0[1]) + b * ((1.0 - a) * r1[0] + a * r1[1]);
}

}  // namespace plc
