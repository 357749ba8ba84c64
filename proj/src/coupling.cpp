#include "plc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plc/duhamel.hpp"
#include "plc/errors.hpp"
#include "plc/quadrature.hpp"

namespace plc::coupling {

namespace {

using charwave::CharGrid;
using charwave::SourceFields;
using charwave::Triangulation;

// Copy of rows 0..k1 of a grid.
PhysGrid prefix(const PhysGrid& g, int k1) {
  PhysGrid w;
  w.nx = g.nx;
  w.nt = k1;
  w.dx = g.dx;
  w.dt = g.dt;
  const std::size_t n = w.size();
  auto cut = [n](const std::vector<double>& v) { return std::vector<double>(v.begin(), v.begin() + n); };
  w.theta = cut(g.theta);
  w.theta_t = cut(g.theta_t);
  w.theta_x = cut(g.theta_x);
  w.u = cut(g.u);
  w.J = cut(g.J);
  w.cusp.assign(g.cusp.begin(), g.cusp.begin() + n);
  return w;
}

SourceFields prefix(const SourceFields& s, std::size_t n) {
  SourceFields w;
  w.theta_t.assign(s.theta_t.begin(), s.theta_t.begin() + n);
  w.flux.assign(s.flux.begin(), s.flux.begin() + n);
  w.quad.assign(s.quad.begin(), s.quad.begin() + n);
  return w;
}

// Rows [ka, kb] of src copied into dst (same row length).
void copy_rows(const std::vector<double>& src, std::vector<double>& dst, std::size_t stride, int ka,
               int kb) {
  std::copy(src.begin() + ka * stride, src.begin() + (kb + 1) * stride, dst.begin() + ka * stride);
}

struct Marched {
  std::shared_ptr<CharGrid> grid;
  std::shared_ptr<Triangulation> tri;
};

Marched march_and_invert(const charwave::Gamma0Curve& curve, const ProblemSpec& spec,
                         PhysGrid& work, SourceFields& src, const charwave::MarchOptions& mo,
                         const charwave::JSource& J, double t_march, int k_from,
                         const CharGrid* prefix = nullptr, double t_keep = 0.0) {
  Marched m;
  m.grid = std::make_shared<CharGrid>(prefix ? charwave::march(curve, spec.bc, J, t_march, mo, *prefix, t_keep)
                                             : charwave::march(curve, spec.bc, J, t_march, mo));
  m.tri = std::make_shared<Triangulation>(charwave::triangulate(*m.grid));
  charwave::invert_map(*m.grid, *m.tri, work, k_from);
  charwave::project_sources(*m.grid, *m.tri, work, src, k_from);
  return m;
}

class Driver {
 public:
  Driver(const ValidatedProblem& vp, const FixedPointConfig& cfg, const GridConfig& grids, double T)
      : vp_(vp), spec_(vp.spec), cfg_(cfg) {
    const int nt = grids.nt > 0 ? grids.nt : default_nt(grids.nx, T);
    phys_ = PhysGrid::make(grids.nx, nt, T);
    curve_ = std::make_shared<charwave::Gamma0Curve>(
        charwave::Gamma0Curve::build(spec_.data, spec_.model));
    mo_.K = grids.K;
    mo_.sweeps = grids.sweeps;
    mo_.damping = 1.0;
    eng_ = std::make_unique<heat::DuhamelEngine>(phys_.nx, phys_.nt, phys_.dx, phys_.dt, grids.gauss);
    initJ_ = heat::initial_terms_J(*eng_, spec_);
    initU_ = heat::initial_terms_u(*eng_, spec_);
    const int n1 = phys_.nx + 1;
    for (int i = 0; i < n1; ++i) {
      phys_.J[i] = initJ_[i];
      phys_.u[i] = initU_[i];
    }
    if (spec_.bc.u_side == USide::StressFree)
      for (int i = 0; i < n1; ++i) phys_.u[i] = spec_.data.u0.value(phys_.x(i));
    src_.theta_t.assign(phys_.size(), 0.0);
    src_.flux.assign(phys_.size(), 0.0);
    src_.quad.assign(phys_.size(), 0.0);
  }

  SolutionBundle run() {
    const int nt = phys_.nt;
    const int L0 = std::max(1, static_cast<int>(std::lround(cfg_.delta / phys_.dt)));
    int k0 = 0;
    while (k0 < nt) {
      int L = L0;
      int halvings = 0;
      WindowReport rep;
      for (;;) {
        const int k1 = std::min(nt, k0 + L);
        try {
          rep = window(k0, k1);
          rep.halvings = halvings;
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::FixedPointDiverged) {
            if (e.time() >= 0.0) throw;
            throw Error(e.code(), e.module(), e.what(), phys_.t(k0));
          }
          if (halvings >= cfg_.max_halvings || L == 1)
            throw Error(ErrorCode::WindowCollapsed, "coupling",
                        "window halved " + std::to_string(halvings) + " times without convergence (" +
                            e.what() + ")",
                        phys_.t(k0));
          L = std::max(1, L / 2);
          ++halvings;
        }
      }
      windows_.push_back(rep);
      k0 = std::min(nt, k0 + L);
    }
    return finish();
  }

 private:
  // One window [t(k0), t(k1)]. J on rows below k0 is frozen; rows k0..k1 are
  // the unknowns, so the seam row is re-solved with the final sources of this
  // window and the mismatch is pushed one row down, where it is second order.
  WindowReport window(int k0, int k1) {
    const int ks = std::max(1, k0);
    const std::size_t n1 = phys_.stride();
    PhysGrid work = prefix(phys_, k1);
    SourceFields src = prefix(src_, work.size());
    for (int k = k0 + 1; k <= k1; ++k)
      std::copy_n(&phys_.J[k0 * n1], n1, &work.J[k * n1]);
    const int k_from = k0 == 0 ? 0 : ks;
    const double t_march = phys_.t(k1) + 1.5 * phys_.dt;
    std::vector<double> M;
    double prev = HUGE_VAL;
    int growth = 0;
    WindowReport rep;
    rep.t0 = phys_.t(k0);
    rep.t1 = phys_.t(k1);
    Marched m, first;
    bool converged = false;
    // Nodes below t(k0 - 2) see only frozen J, corrector predictions included,
    // so later passes copy them from the first pass.
    const double t_keep = k0 > 1 ? phys_.t(k0 - 2) : -HUGE_VAL;
    for (int it = 1; it <= cfg_.max_iter; ++it) {
      m = march_and_invert(*curve_, spec_, work, src, mo_, charwave::JSource{&work, phys_.t(k1)},
                           t_march, k_from, first.grid.get(), t_keep);
      if (it == 1) first = m;
      heat::duhamel_J(*eng_, spec_, work, src, work.J, ks, k1, M, &initJ_);
      double diff = 0.0, guard = 0.0;
      for (std::size_t id = ks * n1; id < (k1 + 1) * n1; ++id) {
        diff = std::max(diff, std::fabs(M[id] - work.J[id]));
        guard = std::max(guard, std::fabs(M[id] - initJ_[id]));
      }
      if (!std::isfinite(diff))
        throw Error(ErrorCode::FixedPointDiverged, "coupling", "non-finite iterate", rep.t0);
      if (cfg_.K_guard > 0.0 && guard > cfg_.K_guard)
        throw Error(ErrorCode::FixedPointDiverged, "coupling",
                    "iterate left the set |J - J0| <= K_guard", rep.t0);
      copy_rows(M, work.J, n1, ks, k1);
      rep.iterations = it;
      rep.residual = diff;
      if (diff < cfg_.tol) {
        converged = true;
        break;
      }
      growth = diff > prev ? growth + 1 : 0;
      if (growth >= 3)
        throw Error(ErrorCode::FixedPointDiverged, "coupling",
                    "residual grew on 3 consecutive iterations", rep.t0);
      prev = diff;
    }
    if (!converged)
      throw Error(ErrorCode::FixedPointDiverged, "coupling",
                  "no convergence in " + std::to_string(cfg_.max_iter) + " iterations", rep.t0);
    heat::reconstruct_u(*eng_, spec_, work, src, work.J, ks, k1, work.u, &initU_);

    if (k0 > 0) {
      for (std::size_t i = 0; i < n1; ++i) {
        const std::size_t id = k0 * n1 + i;
        seam_theta_ = std::max(seam_theta_, std::fabs(work.theta[id] - phys_.theta[id]));
        seam_J_ = std::max(seam_J_, std::fabs(work.J[id] - phys_.J[id]));
      }
    }
    for (auto [from, to] : {std::pair{&work.theta, &phys_.theta}, std::pair{&work.theta_t, &phys_.theta_t},
                            std::pair{&work.theta_x, &phys_.theta_x}, std::pair{&work.u, &phys_.u},
                            std::pair{&work.J, &phys_.J}, std::pair{&src.theta_t, &src_.theta_t},
                            std::pair{&src.flux, &src_.flux}, std::pair{&src.quad, &src_.quad}})
      copy_rows(*from, *to, n1, k_from, k1);
    std::copy(work.cusp.begin() + k_from * n1, work.cusp.begin() + (k1 + 1) * n1,
              phys_.cusp.begin() + k_from * n1);
    last_ = m;
    return rep;
  }

  SolutionBundle finish() {
    SolutionBundle b;
    b.mode = Mode::Coupled;
    b.problem = vp_;
    b.windows = windows_;
    b.seam_jump_theta = seam_theta_;
    b.seam_jump_J = seam_J_;
    // Fixed-point residual of the stored J against sources re-projected from
    // the final characteristic grid.
    SourceFields fin;
    charwave::project_sources(*last_.grid, *last_.tri, phys_, fin, 0);
    std::vector<double> M;
    heat::duhamel_J(*eng_, spec_, phys_, fin, phys_.J, 1, phys_.nt, M, &initJ_);
    double r = 0.0;
    for (std::size_t id = phys_.stride(); id < phys_.size(); ++id) r = std::max(r, std::fabs(M[id] - phys_.J[id]));
    b.fixed_point_residual = r;
    b.grid = std::move(phys_);
    b.sources = std::move(src_);
    b.curve = curve_;
    b.char_grid = last_.grid;
    b.tri = last_.tri;
    return b;
  }

  const ValidatedProblem& vp_;
  const ProblemSpec& spec_;
  FixedPointConfig cfg_;
  PhysGrid phys_;
  SourceFields src_;
  std::shared_ptr<charwave::Gamma0Curve> curve_;
  charwave::MarchOptions mo_;
  std::unique_ptr<heat::DuhamelEngine> eng_;
  std::vector<double> initJ_, initU_;
  std::vector<WindowReport> windows_;
  Marched last_;
  double seam_theta_ = 0.0, seam_J_ = 0.0;
};

SolutionBundle wave_only(const ValidatedProblem& vp, const GridConfig& grids, double T) {
  SolutionBundle b;
  b.mode = Mode::WaveOnly;
  b.problem = vp;
  const int nt = grids.nt > 0 ? grids.nt : default_nt(grids.nx, T);
  b.grid = PhysGrid::make(grids.nx, nt, T);
  auto curve = std::make_shared<charwave::Gamma0Curve>(
      charwave::Gamma0Curve::build(vp.spec.data, vp.spec.model));
  charwave::MarchOptions mo;
  mo.K = grids.K;
  mo.sweeps = grids.sweeps;
  mo.damping = 2.0;
  Marched m = march_and_invert(*curve, vp.spec, b.grid, b.sources, mo, charwave::JSource{},
                               T + 1.5 * b.grid.dt, 0);
  // u == 0, so the stress combination reduces to theta_t.
  std::fill(b.grid.u.begin(), b.grid.u.end(), 0.0);
  b.grid.J = b.sources.theta_t;
  WindowReport rep;
  rep.t1 = T;
  rep.iterations = 1;
  b.windows.push_back(rep);
  b.curve = curve;
  b.char_grid = m.grid;
  b.tri = m.tri;
  return b;
}

}  // namespace

int default_nt(int nx, double T) {
  return std::max(2, static_cast<int>(std::ceil(8.0 * T / (M_PI / nx) - 1e-9)));
}

SolutionBundle extend_to_horizon(const ValidatedProblem& problem, const FixedPointConfig& config,
                                 const GridConfig& grids, double T, Mode mode) {
  if (!(T > 0.0) || !(config.delta > 0.0) || !(config.tol > 0.0) || config.max_iter < 1 ||
      config.max_halvings < 0)
    throw Error(ErrorCode::InvalidArgument, "coupling", "need T, delta, tol > 0 and max_iter >= 1");
  if (grids.K < 4 || grids.K % 2 != 0 || grids.nx < 2 || grids.nt < 0)
    throw Error(ErrorCode::InvalidArgument, "coupling", "K must be even and >= 4, nx >= 2");
  if (mode == Mode::FdOnly)
    throw Error(ErrorCode::InvalidArgument, "coupling", "fd-only runs go through oracle_fd");
  if (mode == Mode::WaveOnly) return wave_only(problem, grids, T);
  Driver d(problem, config, grids, T);
  return d.run();
}

ReconcileReport reconcile_J(const SolutionBundle& b) {
  const PhysGrid& g = b.grid;
  const int nx = g.nx, nt = g.nt;
  ReconcileReport rep;
  std::vector<double> row_sq(nt + 1, 0.0), sq(nx + 1);
  for (int k = 0; k <= nt; ++k) {
    for (int i = 0; i <= nx; ++i) {
      const double* u = &g.u[g.index(k, 0)];
      double ux;
      if (i == 0)
        ux = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * g.dx);
      else if (i == nx)
        ux = (3 * u[nx] - 4 * u[nx - 1] + u[nx - 2]) / (2 * g.dx);
      else
        ux = (u[i + 1] - u[i - 1]) / (2 * g.dx);
      const std::size_t id = g.index(k, i);
      if (g.cusp[id]) {
        sq[i] = 0.0;
        ++rep.excluded;
        continue;
      }
      const double r = g.J[id] - (ux + g.theta_t[id]);
      sq[i] = r * r;
      rep.sup = std::max(rep.sup, std::fabs(r));
    }
    row_sq[k] = simpson(sq, g.dx);
  }
  rep.l2 = std::sqrt(std::max(0.0, simpson(row_sq, g.dt)));
  return rep;
}

}  // namespace plc::coupling
