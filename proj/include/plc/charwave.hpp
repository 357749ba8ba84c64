#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "plc/model.hpp"
#include "plc/phys_grid.hpp"

namespace plc::charwave {

/// Data carried by a characteristic node or a point of the initial curve.
struct State {
  double theta = 0, w = 0, z = 0, p = 1, q = 1, x = 0, t = 0;
};

/// The initial line t = 0 mapped into the (X, Y) plane:
///   X(x) = int_0^x (1 + R0^2),  Y(x) = -int_0^x (1 + S0^2).
class Gamma0Curve {
 public:
  /// Tables use `intervals` Simpson cells over [0, pi]. Throws QuadratureFailure
  /// if the data produce non-finite values.
  static Gamma0Curve build(const InitialData& data, const MaterialModel& model, int intervals = 8192);

  double xhat() const { return Xs_.back(); }
  double xtil() const { return Xs_.back() + Ys_.back(); }

  double R0(double x) const;
  double S0(double x) const;
  double X_of_x(double x) const;
  double Y_of_x(double x) const;
  double x_of_X(double X) const;
  double x_of_Y(double Y) const;
  /// Parameter where X(x) - Y(x) = s.
  double x_of_diff(double s) const;
  /// The curve as a graph Y = phi(X), X in [0, xhat].
  double phi(double X) const { return Y_of_x(x_of_X(X)); }

  /// Curve data at parameter x: theta0, 2 atan R0, 2 atan S0, p = q = 1, t = 0.
  State state_at(double x) const;

  const InitialData& data() const { return data_; }
  const MaterialModel& model() const { return model_; }

 private:
  double integrand_X(double x) const;
  double integrand_Y(double x) const;
  double cumulative(const std::vector<double>& tab, double x, bool y_side) const;
  double invert(const std::vector<double>& tab, double v, bool y_side) const;

  InitialData data_;
  MaterialModel model_;
  int n_ = 0;
  double dx_ = 0.0;
  std::vector<double> Xs_, Ys_;  ///< cumulative values at table nodes; Ys_ stored as -Y
};

/// Right-hand sides of the semilinear system in (X, Y), plus the position
/// equations. `damping` multiplies the theta_t damping terms: 1 for the
/// coupled problem (J carries the rest), 2 for the wave-only reduction
/// u == 0, 0 for the undamped variational wave.
struct Derivatives {
  double theta_X, theta_Y, w_Y, z_X, p_Y, q_X;
  double x_X, x_Y, t_X, t_Y;
};

Derivatives rhs_semilinear(double w, double z, double p, double q, double theta, double J,
                           const MaterialModel& model, double damping = 1.0);

/// Dirichlet closure at x = 0: w + z = 0, p = q. Returns (z, q) from (w, p).
std::pair<double, double> apply_boundary_L0(double w_in, double p_in);

/// Robin closure at x = pi for theta_x = -iota theta. Returns (w, p) from
/// (z, q). Throws CuspAtRobinBoundary when |z| reaches pi with iota theta != 0.
std::pair<double, double> apply_boundary_Lpi(double z_in, double q_in, double theta_b, double iota,
                                             const MaterialModel& model);

/// Robin closure at x = 0 for theta_x = kappa theta (weak anchoring on the
/// left; extension). Returns (z, q) from (w, p).
std::pair<double, double> apply_boundary_L0_robin(double w_in, double p_in, double theta_b,
                                                  double kappa, const MaterialModel& model);

/// Dirichlet closure at x = pi (extension). Returns (w, p) from (z, q).
std::pair<double, double> apply_boundary_Lpi_dirichlet(double z_in, double q_in);

/// Source for J during marching.
struct JSource {
  const PhysGrid* grid = nullptr;  ///< null means J == 0
  double t_cap = 1e300;            ///< J(x, t) for t > t_cap uses J(x, t_cap)

  double operator()(double x, double t) const {
    return grid ? grid->interpolate(grid->J, x, t, t_cap) : 0.0;
  }
};

struct MarchOptions {
  int K = 2048;          ///< lattice cells across the strip: h = Xtil / K (even)
  double damping = 1.0;
  int sweeps = 2;        ///< trapezoid corrector sweeps per node
  double cusp_tol = kCuspTol;
  std::size_t max_nodes = 40'000'000;
};

enum NodeFlag : std::uint8_t {
  kValid = 1,
  kOnL0 = 2,
  kOnLpi = 4,
  kCusp = 8,
};

struct Node {
  double theta, w, z, p, q, x, t;
  std::uint8_t flags;
  std::uint16_t tile;
};

/// A vertex of the inverse-map triangulation: a lattice node or a point on
/// the initial curve.
struct Vertex {
  double X, Y;
  State s;
};

/// Lattice over the strip between x = 0 (Y = X) and x = pi (Y = X - Xtil),
/// above the initial curve, marched in increasing X + Y.
class CharGrid {
 public:
  double h = 0.0;
  int K = 0;
  double Xhat = 0.0, Xtil = 0.0;
  int d_first = 0, d_last = -1;  ///< diagonal range d = i + j computed

  int slots() const { return K / 2 + 1; }
  bool has_diagonal(int d) const { return d >= d_first && d <= d_last; }
  /// Node at lattice position (i, j), or null if outside the computed domain.
  const Node* node(int i, int j) const;
  Node* node_mut(int i, int j);
  std::size_t node_count() const { return nodes.size(); }

  std::vector<Node> nodes;  ///< (d - d_first) * slots() + slot
  const Gamma0Curve* curve = nullptr;

  /// Lowest valid j in column i (curve or x = pi line).
  int j_low(int i) const;
  std::vector<int> jlo;       ///< per column i >= 0; grows with the march
  int jlo_curve_end = 0;      ///< columns beyond this are bounded by x = pi only

  double min_p = 0, max_p = 0, min_q = 0, max_q = 0;
  std::size_t cusp_nodes = 0;
  std::uint16_t max_tile = 0;
};

/// March the characteristic domain until a full diagonal lies above t = T.
/// Throws NonpositivePQ, HorizonNotReached, CuspAtRobinBoundary.
CharGrid march(const Gamma0Curve& curve, const BoundarySpec& bc, const JSource& J, double T,
               const MarchOptions& opt);
/// Same march, copying the nodes of `prefix` that lie below t_keep instead of
/// recomputing them. Exact when J below t_keep is what `prefix` was marched with.
CharGrid march(const Gamma0Curve& curve, const BoundarySpec& bc, const JSource& J, double T,
               const MarchOptions& opt, const CharGrid& prefix, double t_keep);

/// Triangles covering the marched domain: lattice half-cells, with cells cut
/// by the initial curve clipped at the curve crossings.
/// Vertex ids below grid->node_count() name lattice slots; the rest index
/// `extra` (points on the initial curve).
struct Triangulation {
  const CharGrid* grid = nullptr;
  std::vector<Vertex> extra;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  Vertex vertex(std::uint32_t id) const;
};

Triangulation triangulate(const CharGrid& grid);

/// Fills rows k0..nt of theta, theta_t, theta_x, cusp in `phys` from the grid.
/// Row 0 is taken from the initial data. Throws LookupMiss.
void invert_map(const CharGrid& grid, const Triangulation& tri, PhysGrid& phys, int k0 = 0,
                double cusp_tol = kCuspTol);
void invert_map(const CharGrid& grid, PhysGrid& phys, int k0 = 0, double cusp_tol = kCuspTol);

/// Area-weighted projections of theta_t, c^2 theta_x and c c' theta_x^2 onto
/// the physical nodes. The products are formed in characteristic variables,
/// where they stay bounded at cusps, and deposited with tent weights; each
/// node value is the intercept of a local linear fit in x.
struct SourceFields {
  std::vector<double> theta_t, flux, quad;
};

void project_sources(const CharGrid& grid, const Triangulation& tri, const PhysGrid& phys,
                     SourceFields& out, int k0 = 0);

/// int_0^pi (theta_t^2 + c^2 theta_x^2) dx + 2 B0 + 2 Bpi on the level t,
/// evaluated as a characteristic line integral over the triangulation.
double energy_char(const CharGrid& grid, const Triangulation& tri, const ProblemSpec& problem,
                   double t);
double energy_char(const CharGrid& grid, const ProblemSpec& problem, double t);

/// Cumulative int_0^{t_k} int_0^pi theta_t^2 dx dt at every row t_k of `phys`,
/// integrated in characteristic variables.
std::vector<double> theta_t_sq_cumulative(const CharGrid& grid, const Triangulation& tri,
                                          const PhysGrid& phys);

/// theta on the x = pi (right) or x = 0 boundary at time t, from the boundary nodes.
double boundary_theta(const CharGrid& grid, bool right, double t);

}  // namespace plc::charwave
