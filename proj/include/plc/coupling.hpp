#pragma once

#include <memory>
#include <vector>

#include "plc/charwave.hpp"
#include "plc/model.hpp"
#include "plc/phys_grid.hpp"

namespace plc::coupling {

struct FixedPointConfig {
  double delta = 0.1;     ///< initial window length
  double tol = 1e-8;      ///< sup-norm change that ends the iteration
  int max_iter = 40;      ///< per window
  int max_halvings = 8;
  double K_guard = -1.0;  ///< bound on sup |J - J0-term|; negative disables
};

enum class Mode { Coupled, WaveOnly, FdOnly };

struct GridConfig {
  int K = 1024;      ///< characteristic cells across the strip
  int nx = 64;       ///< physical cells in x
  int nt = 0;        ///< physical time steps; 0 picks dt close to dx / 8
  int sweeps = 2;
  int gauss = 8;     ///< Gauss points per Duhamel time panel
};

struct WindowReport {
  double t0 = 0.0, t1 = 0.0;
  int iterations = 0;
  int halvings = 0;
  double residual = 0.0;  ///< last sup-norm change of J
};

/// Everything a run produced. The characteristic grid and triangulation are
/// kept for the energy diagnostics; both are empty in fd-only mode.
struct SolutionBundle {
  Mode mode = Mode::Coupled;
  ValidatedProblem problem;
  PhysGrid grid;
  charwave::SourceFields sources;
  std::vector<WindowReport> windows;
  double fixed_point_residual = 0.0;  ///< sup |M(J) - J| over the whole run, final fields
  double seam_jump_theta = 0.0;       ///< stored vs re-evaluated theta on seam rows
  double seam_jump_J = 0.0;

  std::shared_ptr<const charwave::Gamma0Curve> curve;
  std::shared_ptr<const charwave::CharGrid> char_grid;
  std::shared_ptr<const charwave::Triangulation> tri;

  bool has_char() const { return static_cast<bool>(char_grid); }
};

/// The physical time-step count used when GridConfig::nt is 0.
int default_nt(int nx, double T);

/// Run the fixed-point construction window by window until T. Each pass of
/// a window re-marches the characteristic domain from t = 0 with J frozen on
/// the earlier windows and the current iterate on this one, then applies the
/// Duhamel map. Windows that diverge or fail to converge are halved.
/// WaveOnly marches once with u == 0, J == theta_t.
/// Errors carry the time of the window where they happened.
SolutionBundle extend_to_horizon(const ValidatedProblem& problem, const FixedPointConfig& config,
                                 const GridConfig& grids, double T, Mode mode = Mode::Coupled);

struct ReconcileReport {
  double l2 = 0.0;
  double sup = 0.0;
  std::size_t excluded = 0;  ///< cusp-tagged nodes left out
};

/// r = J - (u_x + theta_t) with u_x from centered differences of u
/// (second-order one-sided at the walls); cusp-tagged nodes are excluded.
ReconcileReport reconcile_J(const SolutionBundle& bundle);

}  // namespace plc::coupling
