#include "plc/oracle_fd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plc/errors.hpp"

namespace plc::fd {

namespace {

// Solves a tridiagonal system in place; lo/up are the sub/super diagonals.
void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
            std::vector<double>& rhs) {
  const std::size_t n = di.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lo[i] / di[i - 1];
    di[i] -= m * up[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

double dx_one_sided(const double* f, int n, int i, double dx) {
  if (i == 0) return (-3 * f[0] + 4 * f[1] - f[2]) / (2 * dx);
  if (i == n) return (3 * f[n] - 4 * f[n - 1] + f[n - 2]) / (2 * dx);
  return (f[i + 1] - f[i - 1]) / (2 * dx);
}

}  // namespace

double cfl_limit(const MaterialModel& model, double dx, double cfl) {
  return cfl * dx / model.c_upper();
}

Solver::Solver(const ValidatedProblem& problem, const FDOptions& opt, double dt)
    : spec_(problem.spec), opt_(opt) {
  if (opt.n < 4) throw Error(ErrorCode::InvalidArgument, "oracle_fd", "need n >= 4");
  const double dx = M_PI / opt.n;
  const double lim = cfl_limit(spec_.model, dx, opt.cfl);
  if (!(dt > 0.0) || dt > lim * (1 + 1e-12))
    throw Error(ErrorCode::CFLViolation, "oracle_fd",
                "dt = " + std::to_string(dt) + " exceeds " + std::to_string(lim) + " = " +
                    std::to_string(opt.cfl) + " dx / C_U");
  s_.n = opt.n;
  s_.dx = dx;
  s_.dt = dt;
  const int n = opt.n;
  s_.theta.resize(n + 1);
  s_.theta_prev.resize(n + 1);
  s_.u.assign(n + 1, 0.0);
  const InitialData& d = spec_.data;
  for (int i = 0; i <= n; ++i) {
    s_.theta[i] = d.theta0.value(i * dx);
    if (opt.u_equation) s_.u[i] = d.u0.value(i * dx);
  }
  // Level -1 from the Taylor expansion with theta_tt = L theta - u_x - 2 theta_t.
  for (int i = 0; i <= n; ++i) {
    const double x = i * dx;
    const double ux = opt.u_equation ? dx_one_sided(s_.u.data(), n, i, dx) : 0.0;
    const double th1 = d.theta1.value(x);
    const double tt = elastic(s_.theta, i) - ux - 2.0 * th1;
    s_.theta_prev[i] = s_.theta[i] - dt * th1 + 0.5 * dt * dt * tt;
  }
  if (spec_.bc.left_dirichlet()) s_.theta_prev[0] = 0.0;
  if (spec_.bc.right_dirichlet()) s_.theta_prev[n] = 0.0;
}

double Solver::elastic(const std::vector<double>& th, int i) const {
  const int n = s_.n;
  const double dx = s_.dx;
  double left, right;
  if (i == 0) {
    if (spec_.bc.left_dirichlet()) return 0.0;
    left = th[1] - 2 * dx * spec_.bc.kappa_left() * th[0];
  } else {
    left = th[i - 1];
  }
  if (i == n) {
    if (spec_.bc.right_dirichlet()) return 0.0;
    right = th[n - 1] - 2 * dx * spec_.bc.iota_right() * th[n];
  } else {
    right = th[i + 1];
  }
  const MaterialModel& m = spec_.model;
  const double cr = m.speed(0.5 * (th[i] + right));
  const double cl = m.speed(0.5 * (th[i] + left));
  return m.speed(th[i]) * (cr * (right - th[i]) - cl * (th[i] - left)) / (dx * dx);
}

void Solver::step() {
  const int n = s_.n;
  const double dx = s_.dx, dt = s_.dt;
  std::vector<double> next(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double ux = opt_.u_equation ? dx_one_sided(s_.u.data(), n, i, dx) : 0.0;
    next[i] = (dt * dt * (elastic(s_.theta, i) - ux) + 2 * s_.theta[i] - (1 - dt) * s_.theta_prev[i]) /
              (1 + dt);
  }
  if (spec_.bc.left_dirichlet()) next[0] = 0.0;
  if (spec_.bc.right_dirichlet()) next[n] = 0.0;

  if (opt_.u_equation) {
    // theta_t at the half level on the half nodes.
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
      g[i] = 0.5 * ((next[i] - s_.theta[i]) + (next[i + 1] - s_.theta[i + 1])) / dt;
    const bool nonslip = spec_.bc.u_side == USide::Nonslip;
    std::vector<double> lo(n + 1, 0.0), di(n + 1, 1.0), up(n + 1, 0.0), rhs(n + 1, 0.0);
    const std::vector<double>& u = s_.u;
    for (int i = 0; i <= n; ++i) {
      const bool wall = i == 0 || i == n;
      if (wall && nonslip) continue;  // u = 0
      const double V = wall ? 0.5 * dx : dx;
      const double a = dt / (2 * dx * V);
      double explicit_flux = 0.0;
      if (i < n) {
        up[i] = -a;
        di[i] += a;
        explicit_flux += a * (u[i + 1] - u[i]) + dt / V * g[i];
      }
      if (i > 0) {
        lo[i] = -a;
        di[i] += a;
        explicit_flux -= a * (u[i] - u[i - 1]) + dt / V * g[i - 1];
      }
      rhs[i] = u[i] + explicit_flux;
    }
    thomas(lo, di, up, rhs);
    s_.u = std::move(rhs);
  }
  s_.theta_prev = std::move(s_.theta);
  s_.theta = std::move(next);
  s_.t += dt;
  ++s_.step;

  double big = 0.0;
  for (int i = 0; i <= n; ++i) {
    big = std::max({big, std::fabs(s_.theta[i]), std::fabs(s_.u[i])});
    if (i < n) big = std::max(big, std::fabs(s_.theta[i + 1] - s_.theta[i]) / dx);
  }
  if (!(big <= opt_.blowup))
    throw Error(ErrorCode::BlowupDetected, "oracle_fd",
                "field sup norm above " + std::to_string(opt_.blowup), s_.t);
}

PhysGrid run(const ValidatedProblem& problem, double T, const FDOptions& opt, int out_nx, int out_nt) {
  if (out_nx < 2 || out_nt < 1 || opt.n % out_nx != 0 || !(T > 0.0))
    throw Error(ErrorCode::InvalidArgument, "oracle_fd", "output grid must divide the FD grid");
  PhysGrid out = PhysGrid::make(out_nx, out_nt, T);
  const double dx = M_PI / opt.n;
  const double out_dt = out.dt;
  int sub;
  if (opt.dt > 0.0) {
    const double lim = cfl_limit(problem.spec.model, dx, opt.cfl);
    if (opt.dt > lim * (1 + 1e-12))
      throw Error(ErrorCode::CFLViolation, "oracle_fd",
                  "dt = " + std::to_string(opt.dt) + " exceeds the CFL bound " + std::to_string(lim));
    sub = static_cast<int>(std::ceil(out_dt / opt.dt - 1e-9));
  } else {
    sub = static_cast<int>(std::ceil(out_dt / (0.5 * dx / problem.spec.model.c_upper()) - 1e-9));
  }
  sub = std::max(sub, 1);
  Solver solver(problem, opt, out_dt / sub);
  const int n = opt.n, r = n / out_nx;
  const ProblemSpec& spec = problem.spec;
  std::vector<double> before(n + 1);
  for (int k = 0; k <= out_nt; ++k) {
    const FDState& s = solver.state();
    std::vector<double> th = s.theta, u = s.u, tt(n + 1);
    if (k == 0) {
      for (int i = 0; i <= n; ++i) tt[i] = spec.data.theta1.value(i * dx);
    } else {
      before = s.theta_prev;
      solver.step();
      for (int i = 0; i <= n; ++i) tt[i] = (solver.state().theta[i] - before[i]) / (2 * s.dt);
    }
    for (int io = 0; io <= out_nx; ++io) {
      const int i = io * r;
      const std::size_t id = out.index(k, io);
      double tx = dx_one_sided(th.data(), n, i, dx);
      if (i == n && !spec.bc.right_dirichlet()) tx = -spec.bc.iota_right() * th[n];
      if (i == 0 && !spec.bc.left_dirichlet()) tx = spec.bc.kappa_left() * th[0];
      out.theta[id] = th[i];
      out.theta_t[id] = tt[i];
      out.theta_x[id] = tx;
      out.u[id] = u[i];
      out.J[id] = dx_one_sided(u.data(), n, i, dx) + tt[i];
    }
    if (k == out_nt) break;
    // Advance to the next output level; the last substep is taken above once
    // the centered theta_t of that level is needed.
    for (int j = 0; j < sub - (k == 0 ? 0 : 1); ++j) solver.step();
  }
  return out;
}

}  // namespace plc::fd
