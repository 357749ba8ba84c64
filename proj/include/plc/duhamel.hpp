#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "plc/charwave.hpp"
#include "plc/heatkernel.hpp"
#include "plc/model.hpp"
#include "plc/phys_grid.hpp"

namespace plc::heat {

/// Quadrature weights of one time panel [t_k - (j+1) dt, t_k - j dt] for a
/// kernel, in the substituted variable s = sqrt(t - tau) with Gauss points.
/// Sources are piecewise linear in xi and linear in tau on the panel; A
/// multiplies the level k - j, B the level k - j - 1. Matrices are
/// (nx+1) x (nx+1), row = output node, column = source node.
struct PanelWeights {
  std::vector<float> VA, VB;  ///< kernel against nodal hat functions
  std::vector<float> DA, DB;  ///< d/dxi kernel against hat functions
  std::vector<double> b0A, b0B, bpA, bpB;  ///< kernel at xi = 0 and xi = pi
};

/// Translation-invariant Duhamel quadrature on a uniform (x, t) grid.
/// Weights depend only on the lag j and are cached.
class DuhamelEngine {
 public:
  DuhamelEngine(int nx, int nt, double dx, double dt, int gauss_points = 8, double tol = 1e-12);

  int nx() const { return nx_; }
  int nt() const { return nt_; }

  const PanelWeights& weights(Kernel kind, int lag);

  /// int_0^pi K(x_i, t_k; xi, 0) f(xi) dxi by Gauss panels on the analytic f.
  void initial_row(Kernel kind, const std::function<double(double)>& f, int k, double* out) const;

  /// Adds the volume integrals over [0, t_k] to out[0..nx]:
  ///   FV against the kernel, FD against d/dxi kernel, and the boundary trace
  ///   int K(x, t; xi, tau) FB(xi, tau) |_{xi=0}^{pi} dtau.
  ///   Nodal FV and FD values get the -dx^2/12 f'' correction first, which
  ///   makes the hat-function quadrature fourth order in dx.
  /// Each field is a full grid field (row-major in time) or null.
  void accumulate(Kernel kind, int k, const double* FV, const double* FD, const double* FB,
                  double* out);

 private:
  void build(Kernel kind, int lag, PanelWeights& w) const;

  int nx_, nt_;
  double dx_, dt_;
  int G_;
  double tol_;
  std::mutex mu_;
  std::map<std::pair<int, int>, std::unique_ptr<PanelWeights>> cache_;
};

/// The fixed-point map J -> M(J). For nonslip u the Neumann kernel with the
/// boundary-trace term is used; for stress-free u the Green kernel without
/// it. Rows k0..k1 of `out` are written.
void duhamel_J(DuhamelEngine& eng, const ProblemSpec& problem, const PhysGrid& phys,
               const charwave::SourceFields& src, const std::vector<double>& J_prev, int k0, int k1,
               std::vector<double>& out, const std::vector<double>* initial_cache = nullptr);

/// Velocity from the director field: Green-kernel form for nonslip, the
/// shifted Neumann problem for stress-free. Rows k0..k1 of `u` are written.
void reconstruct_u(DuhamelEngine& eng, const ProblemSpec& problem, const PhysGrid& phys,
                   const charwave::SourceFields& src, const std::vector<double>& J, int k0, int k1,
                   std::vector<double>& u, const std::vector<double>* initial_cache = nullptr);

/// Initial-data terms for every row (row 0 holds the data itself):
/// J0 for duhamel_J, u0 (or the shifted u0) for reconstruct_u.
std::vector<double> initial_terms_J(const DuhamelEngine& eng, const ProblemSpec& problem);
std::vector<double> initial_terms_u(const DuhamelEngine& eng, const ProblemSpec& problem);

}  // namespace plc::heat
