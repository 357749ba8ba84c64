#pragma once

#include <vector>

#include "plc/model.hpp"
#include "plc/phys_grid.hpp"

namespace plc::fd {

/// Reference finite-difference solver for the coupled system on a uniform
/// grid: leapfrog for theta (damping centered in time, flux-form elastic
/// term with c taken from the current level), Crank-Nicolson for u written
/// as u_t = J_x with J = u_x + theta_t on the half nodes.
struct FDOptions {
  int n = 256;            ///< cells in x
  double dt = 0.0;        ///< 0 picks 0.5 dx / C_U rounded to fit the output rows
  double cfl = 0.9;       ///< dt must not exceed cfl * dx / C_U
  bool u_equation = true; ///< false keeps u == 0 (damped-wave reduction)
  double blowup = 1e6;
};

struct FDState {
  int n = 0;
  double dx = 0.0, dt = 0.0, t = 0.0;
  long step = 0;
  std::vector<double> theta, theta_prev, u;
};

class Solver {
 public:
  /// Throws CFLViolation if opt.dt exceeds the CFL bound.
  Solver(const ValidatedProblem& problem, const FDOptions& opt, double dt);

  /// Advance one step. Throws BlowupDetected with the time stamp.
  void step();
  const FDState& state() const { return s_; }

 private:
  double elastic(const std::vector<double>& th, int i) const;

  ProblemSpec spec_;
  FDOptions opt_;
  FDState s_;
};

/// Largest stable step for a given cell size.
double cfl_limit(const MaterialModel& model, double dx, double cfl = 0.9);

/// Run to T and sample on an out_nx x out_nt grid; out_nx must divide opt.n.
/// theta_t is centered in time and theta_x, u_x centered in space
/// (second-order one-sided at the walls, the Robin closure where active).
PhysGrid run(const ValidatedProblem& problem, double T, const FDOptions& opt, int out_nx, int out_nt);

}  // namespace plc::fd
