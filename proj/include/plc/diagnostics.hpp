#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "plc/charwave.hpp"
#include "plc/coupling.hpp"
#include "plc/phys_grid.hpp"

namespace plc::diag {

/// Allowed excess in the dissipation inequality: max(rel * E(0), abs).
struct Slack {
  double rel = 1e-6;
  double abs = 1e-8;
  double value(double E0) const;
};

struct EnergyPoint {
  double E = 0.0, B0 = 0.0, Bpi = 0.0;
};

/// E = (1/2) int (theta_t^2 + c^2 theta_x^2 + u^2) + B0 + Bpi at row k. With a
/// characteristic grid the wave part is the characteristic line integral
/// (bounded through cusps); otherwise composite Simpson on the row.
EnergyPoint energy(const coupling::SolutionBundle& b, int k);
/// The Simpson form on the physical row only.
EnergyPoint energy_phys(const ProblemSpec& problem, const PhysGrid& g, int k);

struct EnergyTrace {
  std::vector<double> times, E, B0, Bpi, D, residual;
  double slack = 0.0;
  double max_residual = 0.0;
  std::vector<int> flagged;  ///< rows with residual > slack
  bool pass() const { return flagged.empty(); }
};

/// D(t) = int_0^t int (J^2 + theta_t^2). The x integrals are Simpson; the
/// time integral is the trapezoid rule with the Euler-Maclaurin end
/// correction. With a characteristic grid the theta_t^2 part is integrated
/// over the characteristic triangles instead.
EnergyTrace dissipation_report(const coupling::SolutionBundle& b, const Slack& slack = {});

struct WeakResidual {
  double r_u = 0.0;      ///< max over the family of |functional of the u equation|
  double r_theta = 0.0;  ///< same for the theta equation
};

/// Both weak-form functionals against sin(k x) b_l(t), k, l = 1..m, with
/// b_l a C-infinity bump on (0, T) times cos((l-1) pi t / T); for
/// stress-free u the u functional is also tested with cos((k-1) x).
/// Time derivatives are moved onto the test function, so only theta, u, the
/// projected sources and the wall values of J enter.
WeakResidual weak_residual(const coupling::SolutionBundle& b, int m);

/// max |f(a) - f(b)| / |a - b|^exponent over pairs on the same row or the
/// same column at separations of at least min_sep cells.
double holder_quotient(const PhysGrid& g, const std::vector<double>& f, double exponent = 0.5,
                       int min_sep = 2);

struct CharMetrics {
  double mismatch_x = 0.0;  ///< max cell circulation of (x_X, x_Y) divided by h^2
  double mismatch_t = 0.0;
  double min_p = 0.0, max_p = 0.0, min_q = 0.0, max_q = 0.0;
  std::size_t cells = 0;
  std::size_t degenerate_cells = 0;  ///< min corner pq cos^2(w/2) cos^2(z/2) below 1e-12
  std::size_t hit_cells = 0;         ///< cells with a cusp-tagged corner or an angle wrapping through pi
  /// Lattice (Chebyshev) distance from the farthest degenerate cell to the
  /// nearest hit cell; -1 when there are degenerate cells but no hits.
  int degenerate_reach = 0;
  /// 1 when degenerate cells and hit cells do not occur together, else 0.
  int degenerate_mismatch = 0;
  std::size_t cusp_nodes = 0;
  /// max |theta_x| = |R - S| / (2c) over valid, untagged lattice nodes with t <= t_max.
  double theta_x_max = 0.0;
};

/// Node and cell statistics restricted to t <= t_max.
CharMetrics char_consistency(const charwave::CharGrid& grid, double t_max = HUGE_VAL);

/// L1 distance between theta_t(., t_1) and theta1 on the first stored row.
double initial_trace_l1(const coupling::SolutionBundle& b);

/// L2(0, T) norms of the active boundary traces: theta(0) or theta_x(0) -
/// kappa theta(0), theta(pi) or theta_x(pi) + iota theta(pi), u or J at the walls.
struct BoundaryTraces {
  double theta_left = 0.0, theta_right = 0.0, u_left = 0.0, u_right = 0.0;
  double max() const;
};
BoundaryTraces boundary_traces(const coupling::SolutionBundle& b);

}  // namespace plc::diag
