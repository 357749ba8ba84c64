#include "plc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "plc/parallel.hpp"
#include "plc/quadrature.hpp"

namespace plc::diag {

namespace {

double row_simpson(const PhysGrid& g, const std::function<double(int)>& f) {
  std::vector<double> v(g.nx + 1);
  for (int i = 0; i <= g.nx; ++i) v[i] = f(i);
  return simpson(v, g.dx);
}

// Cumulative trapezoid with the Euler-Maclaurin correction -dt^2/12 (f'(t) - f'(0)).
std::vector<double> cumulative(const std::vector<double>& f, double dt) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<double> c(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) c[k] = c[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
  if (n < 2) return c;
  auto deriv = [&](int k) {
    if (k == 0) return (-3 * f[0] + 4 * f[1] - f[2]) / (2 * dt);
    if (k == n) return (3 * f[n] - 4 * f[n - 1] + f[n - 2]) / (2 * dt);
    return (f[k + 1] - f[k - 1]) / (2 * dt);
  };
  const double d0 = deriv(0);
  for (int k = 1; k <= n; ++k) c[k] -= dt * dt / 12.0 * (deriv(k) - d0);
  return c;
}

// C-infinity bump on (0, 1) times cos(a s), with its first two derivatives in s.
struct Bump {
  double b, b1, b2;
};

Bump bump(double s, double a) {
  if (s <= 0.0 || s >= 1.0) return {0.0, 0.0, 0.0};
  const double A = s * (1 - s), A1 = 1 - 2 * s, A2 = -2.0;
  const double e = std::exp(-1.0 / A);
  const double e1 = e * A1 / (A * A);
  const double e2 = e * (A1 * A1 / (A * A * A * A) + A2 / (A * A) - 2 * A1 * A1 / (A * A * A));
  const double m = std::cos(a * s), m1 = -a * std::sin(a * s), m2 = -a * a * m;
  return {e * m, e1 * m + e * m1, e2 * m + 2 * e1 * m1 + e * m2};
}

}  // namespace

double Slack::value(double E0) const { return std::max(rel * E0, abs); }

EnergyPoint energy_phys(const ProblemSpec& problem, const PhysGrid& g, int k) {
  const MaterialModel& m = problem.model;
  EnergyPoint e;
  const double wave = row_simpson(g, [&](int i) {
    const std::size_t id = g.index(k, i);
    const double c = m.speed(g.theta[id]);
    return g.theta_t[id] * g.theta_t[id] + c * c * g.theta_x[id] * g.theta_x[id] + g.u[id] * g.u[id];
  });
  e.B0 = problem.boundary_energy_left(g.theta[g.index(k, 0)]);
  e.Bpi = problem.boundary_energy_right(g.theta[g.index(k, g.nx)]);
  e.E = 0.5 * wave + e.B0 + e.Bpi;
  return e;
}

EnergyPoint energy(const coupling::SolutionBundle& b, int k) {
  const ProblemSpec& spec = b.problem.spec;
  if (!b.has_char()) return energy_phys(spec, b.grid, k);
  const PhysGrid& g = b.grid;
  const double t = g.t(k);
  EnergyPoint e;
  const double u2 = row_simpson(g, [&](int i) { return g.u[g.index(k, i)] * g.u[g.index(k, i)]; });
  const double wave = charwave::energy_char(*b.char_grid, *b.tri, spec, t);
  e.B0 = spec.boundary_energy_left(charwave::boundary_theta(*b.char_grid, false, t));
  e.Bpi = spec.boundary_energy_right(charwave::boundary_theta(*b.char_grid, true, t));
  e.E = 0.5 * (wave + u2);
  return e;
}

EnergyTrace dissipation_report(const coupling::SolutionBundle& b, const Slack& slack) {
  const PhysGrid& g = b.grid;
  const int nt = g.nt;
  EnergyTrace tr;
  tr.times.resize(nt + 1);
  tr.E.resize(nt + 1);
  tr.B0.resize(nt + 1);
  tr.Bpi.resize(nt + 1);
  parallel_for(nt + 1, [&](int k) {
    EnergyPoint e = energy(b, k);
    tr.times[k] = g.t(k);
    tr.E[k] = e.E;
    tr.B0[k] = e.B0;
    tr.Bpi[k] = e.Bpi;
  });
  std::vector<double> fJ(nt + 1), ftt(nt + 1);
  for (int k = 0; k <= nt; ++k) {
    fJ[k] = row_simpson(g, [&](int i) { return g.J[g.index(k, i)] * g.J[g.index(k, i)]; });
    ftt[k] = row_simpson(g, [&](int i) { return g.theta_t[g.index(k, i)] * g.theta_t[g.index(k, i)]; });
  }
  if (b.has_char()) {
    std::vector<double> tt = charwave::theta_t_sq_cumulative(*b.char_grid, *b.tri, g);
    if (b.mode == coupling::Mode::WaveOnly) {
      for (int k = 0; k <= nt; ++k) tt[k] *= 2.0;
      tr.D = tt;
    } else {
      tr.D = cumulative(fJ, g.dt);
      for (int k = 0; k <= nt; ++k) tr.D[k] += tt[k];
    }
  } else {
    std::vector<double> f(nt + 1);
    for (int k = 0; k <= nt; ++k) f[k] = fJ[k] + ftt[k];
    tr.D = cumulative(f, g.dt);
  }
  tr.residual.resize(nt + 1);
  tr.slack = slack.value(tr.E[0]);
  for (int k = 0; k <= nt; ++k) {
    tr.residual[k] = tr.E[k] + tr.D[k] - tr.E[0];
    tr.max_residual = std::max(tr.max_residual, tr.residual[k]);
    if (tr.residual[k] > tr.slack) tr.flagged.push_back(k);
  }
  return tr;
}

WeakResidual weak_residual(const coupling::SolutionBundle& b, int m) {
  const PhysGrid& g = b.grid;
  const ProblemSpec& spec = b.problem.spec;
  const int nx = g.nx, nt = g.nt;
  const double T = g.horizon();
  const std::size_t n = g.size();
  std::vector<double> flux(n), quad(n);
  const bool have_src = b.sources.flux.size() == n && b.sources.quad.size() == n;
  for (std::size_t id = 0; id < n; ++id) {
    if (have_src) {
      flux[id] = b.sources.flux[id];
      quad[id] = b.sources.quad[id];
    } else {
      WaveSpeed ws = spec.model.wave_speed(g.theta[id]);
      flux[id] = ws.c * ws.c * g.theta_x[id];
      quad[id] = ws.c * ws.cprime * g.theta_x[id] * g.theta_x[id];
    }
  }
  const bool stress_free = spec.bc.u_side == USide::StressFree;
  // Test functions in x: sin(k x) for k = 1..m, then cos((k-1) x) for the u
  // equation under stress-free walls.
  const int families = stress_free ? 2 * m : m;
  std::vector<double> ru(static_cast<std::size_t>(families) * m, 0.0),
      rt(static_cast<std::size_t>(m) * m, 0.0);
  parallel_for(families * m, [&](int job) {
    const int fx = job / m, l = job % m;
    const bool cosine = fx >= m;
    const double kk = cosine ? fx - m : fx + 1;
    const double a = l * M_PI;
    std::vector<double> X(nx + 1), X1(nx + 1), X2(nx + 1);
    for (int i = 0; i <= nx; ++i) {
      const double x = g.x(i);
      if (cosine) {
        X[i] = std::cos(kk * x);
        X1[i] = -kk * std::sin(kk * x);
      } else {
        X[i] = std::sin(kk * x);
        X1[i] = kk * std::cos(kk * x);
      }
      X2[i] = -kk * kk * X[i];
    }
    std::vector<double> fu(nt + 1), ft(nt + 1), row(nx + 1), row2(nx + 1);
    for (int k = 0; k <= nt; ++k) {
      Bump bb = bump(g.t(k) / T, a);
      const double bt = bb.b1 / T, btt = bb.b2 / (T * T);
      for (int i = 0; i <= nx; ++i) {
        const std::size_t id = g.index(k, i);
        const double th = g.theta[id], u = g.u[id];
        row[i] = u * (X[i] * bt + X2[i] * bb.b) + th * X1[i] * bt;
        row2[i] = -th * X[i] * btt + 2 * th * X[i] * bt - X[i] * bb.b * quad[id] -
                  X1[i] * bb.b * flux[id] + u * X1[i] * bb.b;
      }
      const std::size_t l0 = g.index(k, 0), lp = g.index(k, nx);
      const double wall = (g.J[lp] * X[nx] - g.J[l0] * X[0]) - (g.u[lp] * X1[nx] - g.u[l0] * X1[0]);
      fu[k] = simpson(row, g.dx) + wall * bb.b;
      ft[k] = simpson(row2, g.dx) - (g.u[lp] * X[nx] - g.u[l0] * X[0]) * bb.b;
    }
    ru[job] = std::fabs(simpson(fu, g.dt));
    if (!cosine) rt[job] = std::fabs(simpson(ft, g.dt));
  });
  WeakResidual r;
  for (double v : ru) r.r_u = std::max(r.r_u, v);
  for (double v : rt) r.r_theta = std::max(r.r_theta, v);
  return r;
}

double holder_quotient(const PhysGrid& g, const std::vector<double>& f, double exponent, int min_sep) {
  const int nx = g.nx, nt = g.nt;
  std::vector<double> best(nt + 1 + nx + 1, 0.0);
  parallel_for(nt + 1, [&](int k) {
    double q = 0.0;
    for (int i = 0; i <= nx; ++i)
      for (int j = i + min_sep; j <= nx; ++j)
        q = std::max(q, std::fabs(f[g.index(k, j)] - f[g.index(k, i)]) /
                            std::pow((j - i) * g.dx, exponent));
    best[k] = q;
  });
  parallel_for(nx + 1, [&](int i) {
    double q = 0.0;
    for (int k = 0; k <= nt; ++k)
      for (int l = k + min_sep; l <= nt; ++l)
        q = std::max(q, std::fabs(f[g.index(l, i)] - f[g.index(k, i)]) /
                            std::pow((l - k) * g.dt, exponent));
    best[nt + 1 + i] = q;
  });
  return *std::max_element(best.begin(), best.end());
}

CharMetrics char_consistency(const charwave::CharGrid& grid, double t_max) {
  CharMetrics cm;
  cm.min_p = cm.min_q = HUGE_VAL;
  cm.max_p = cm.max_q = -HUGE_VAL;
  const MaterialModel& model = grid.curve->model();
  const double h = grid.h;
  for (const charwave::Node& n : grid.nodes) {
    if (!(n.flags & charwave::kValid) || n.t > t_max) continue;
    cm.min_p = std::min(cm.min_p, n.p);
    cm.max_p = std::max(cm.max_p, n.p);
    cm.min_q = std::min(cm.min_q, n.q);
    cm.max_q = std::max(cm.max_q, n.q);
    if (n.flags & charwave::kCusp) {
      ++cm.cusp_nodes;
      continue;
    }
    const double R = std::tan(0.5 * n.w), S = std::tan(0.5 * n.z);
    cm.theta_x_max = std::max(cm.theta_x_max, std::fabs(R - S) / (2.0 * model.speed(n.theta)));
  }
  auto jac = [](const charwave::Node& n) {
    const double a = std::cos(0.5 * n.w), c = std::cos(0.5 * n.z);
    return n.p * n.q * a * a * c * c;
  };
  std::vector<std::pair<int, int>> hits, degenerate;
  for (int d = grid.d_first; d + 2 <= grid.d_last; ++d) {
    for (int m = 0; m <= grid.K; ++m) {
      if (((d + m) & 1) != 0) continue;
      const int i = (d + m) / 2, j = (d - m) / 2;
      const charwave::Node* sw = grid.node(i, j);
      const charwave::Node* se = grid.node(i + 1, j);
      const charwave::Node* nw = grid.node(i, j + 1);
      const charwave::Node* ne = grid.node(i + 1, j + 1);
      if (!sw || !se || !nw || !ne) continue;
      const charwave::Node* c4[4] = {sw, se, nw, ne};
      bool ok = true;
      double t_lo = HUGE_VAL;
      for (auto* c : c4) {
        ok = ok && (c->flags & charwave::kValid);
        t_lo = std::min(t_lo, c->t);
      }
      if (!ok || t_lo > t_max) continue;
      ++cm.cells;
      charwave::Derivatives D[4];
      double jmin = HUGE_VAL;
      bool hit = false;
      for (int e = 0; e < 4; ++e) {
        D[e] = charwave::rhs_semilinear(c4[e]->w, c4[e]->z, c4[e]->p, c4[e]->q, c4[e]->theta, 0.0, model);
        jmin = std::min(jmin, jac(*c4[e]));
        hit = hit || (c4[e]->flags & charwave::kCusp);
      }
      // A compressed angle that wraps from near +pi to near -pi inside the
      // cell has passed through pi there even if no corner sits on it.
      auto wraps = [&](double charwave::Node::*a) {
        bool pos = false, neg = false;
        for (auto* c : c4) {
          pos = pos || c->*a > M_PI / 2;
          neg = neg || c->*a < -M_PI / 2;
        }
        return pos && neg;
      };
      hit = hit || wraps(&charwave::Node::w) || wraps(&charwave::Node::z);
      if (hit) hits.push_back({i, j});
      if (jmin < 1e-12) {
        ++cm.degenerate_cells;
        if (!hit) degenerate.push_back({i, j});
        continue;
      }
      const double cx = 0.5 * h * ((D[0].x_X + D[1].x_X) + (D[1].x_Y + D[3].x_Y) - (D[2].x_X + D[3].x_X) -
                                   (D[0].x_Y + D[2].x_Y));
      const double ct = 0.5 * h * ((D[0].t_X + D[1].t_X) + (D[1].t_Y + D[3].t_Y) - (D[2].t_X + D[3].t_X) -
                                   (D[0].t_Y + D[2].t_Y));
      cm.mismatch_x = std::max(cm.mismatch_x, std::fabs(cx) / (h * h));
      cm.mismatch_t = std::max(cm.mismatch_t, std::fabs(ct) / (h * h));
    }
  }
  // Angles that graze pi between lattice nodes leave degenerate cells next
  // to, not on, a hit; report how far.
  cm.hit_cells = hits.size();
  cm.degenerate_mismatch = (cm.degenerate_cells > 0) != (cm.hit_cells > 0);
  if (!degenerate.empty()) {
    if (hits.empty()) {
      cm.degenerate_reach = -1;
    } else {
      const std::set<std::pair<int, int>> hs(hits.begin(), hits.end());
      auto within = [&](int i, int j, int r) {
        for (int di = -r; di <= r; ++di) {
          auto it = hs.lower_bound({i + di, j - r});
          if (it != hs.end() && it->first == i + di && it->second <= j + r) return true;
        }
        return false;
      };
      for (const auto& [i, j] : degenerate) {
        int r = 1;
        while (!within(i, j, r)) ++r;
        cm.degenerate_reach = std::max(cm.degenerate_reach, r);
      }
    }
  }
  return cm;
}

double initial_trace_l1(const coupling::SolutionBundle& b) {
  const PhysGrid& g = b.grid;
  const bool have_src = b.sources.theta_t.size() == g.size();
  return row_simpson(g, [&](int i) {
    const std::size_t id = g.index(1, i);
    const double tt = have_src ? b.sources.theta_t[id] : g.theta_t[id];
    return std::fabs(tt - b.problem.spec.data.theta1.value(g.x(i)));
  });
}

double BoundaryTraces::max() const { return std::max({theta_left, theta_right, u_left, u_right}); }

BoundaryTraces boundary_traces(const coupling::SolutionBundle& b) {
  const PhysGrid& g = b.grid;
  const BoundarySpec& bc = b.problem.spec.bc;
  const int nt = g.nt;
  std::vector<double> a(nt + 1), c(nt + 1), d(nt + 1), e(nt + 1);
  const bool nonslip = bc.u_side == USide::Nonslip;
  for (int k = 0; k <= nt; ++k) {
    const std::size_t l = g.index(k, 0), r = g.index(k, g.nx);
    const double tl = bc.left_dirichlet() ? g.theta[l] : g.theta_x[l] - bc.kappa_left() * g.theta[l];
    const double trr = bc.right_dirichlet() ? g.theta[r] : g.theta_x[r] + bc.iota_right() * g.theta[r];
    a[k] = tl * tl;
    c[k] = trr * trr;
    d[k] = nonslip ? g.u[l] * g.u[l] : g.J[l] * g.J[l];
    e[k] = nonslip ? g.u[r] * g.u[r] : g.J[r] * g.J[r];
  }
  BoundaryTraces t;
  t.theta_left = std::sqrt(simpson(a, g.dt));
  t.theta_right = std::sqrt(simpson(c, g.dt));
  t.u_left = std::sqrt(simpson(d, g.dt));
  t.u_right = std::sqrt(simpson(e, g.dt));
  return t;
}

}  // namespace plc::diag
