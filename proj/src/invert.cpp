#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "plc/charwave.hpp"
#include "plc/errors.hpp"
#include "plc/quadrature.hpp"

namespace plc::charwave {

namespace {

struct LatticeRef {
  int i, j;
};

inline double unwrap_near(double a, double ref) { return ref + std::remainder(a - ref, 2.0 * M_PI); }

}  // namespace

Vertex Triangulation::vertex(std::uint32_t id) const {
  const std::size_t n = grid->node_count();
  if (id >= n) return extra[id - n];
  const int slots = grid->slots();
  int d = grid->d_first + static_cast<int>(id / slots);
  int m = 2 * static_cast<int>(id % slots) + (d & 1);
  int i = (d + m) / 2, j = (d - m) / 2;
  const Node& nd = grid->nodes[id];
  return {i * grid->h, j * grid->h, {nd.theta, nd.w, nd.z, nd.p, nd.q, nd.x, nd.t}};
}

Triangulation triangulate(const CharGrid& g) {
  Triangulation tri;
  tri.grid = &g;
  const Gamma0Curve& curve = *g.curve;
  const int slots = g.slots();
  const double h = g.h;
  const std::uint32_t N = static_cast<std::uint32_t>(g.node_count());
  std::unordered_map<long long, std::uint32_t> cache;

  auto node_id = [&](int i, int j) -> long long {
    const Node* n = g.node(i, j);
    if (!n) return -1;
    return static_cast<long long>(n - g.nodes.data());
  };
  auto curve_vertex = [&](long long key, double x) -> std::uint32_t {
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Vertex v{curve.X_of_x(x), curve.Y_of_x(x), curve.state_at(x)};
    std::uint32_t id = N + static_cast<std::uint32_t>(tri.extra.size());
    tri.extra.push_back(v);
    cache.emplace(key, id);
    return id;
  };
  // Crossing of the curve with the lattice edge a-b, or -1 if it misses the edge.
  auto crossing = [&](LatticeRef a, LatticeRef b) -> long long {
    const double tol = 1e-9 * h;
    if (a.i == b.i) {
      double X = a.i * h;
      if (X > g.Xhat + tol) return -1;
      double x = curve.x_of_X(X);
      double Y = curve.Y_of_x(x);
      double lo = std::min(a.j, b.j) * h, hi = std::max(a.j, b.j) * h;
      if (Y < lo - tol || Y > hi + tol) return -1;
      return curve_vertex((1LL << 40) + a.i, x);
    }
    if (a.j == b.j) {
      double Y = a.j * h;
      if (Y > tol || Y < g.Xhat - g.Xtil - tol) return -1;
      double x = curve.x_of_Y(Y);
      double X = curve.X_of_x(x);
      double lo = std::min(a.i, b.i) * h, hi = std::max(a.i, b.i) * h;
      if (X < lo - tol || X > hi + tol) return -1;
      return curve_vertex((2LL << 40) + a.j + (1LL << 30), x);
    }
    int m = a.i - a.j;
    double x = curve.x_of_diff(m * h);
    double X = curve.X_of_x(x);
    double lo = std::min(a.i, b.i) * h, hi = std::max(a.i, b.i) * h;
    if (X < lo - tol || X > hi + tol) return -1;
    return curve_vertex((3LL << 40) + m, x);
  };

  auto emit = [&](const LatticeRef (&P)[3]) {
    std::uint32_t poly[6];
    int np = 0;
    long long ids[3];
    for (int e = 0; e < 3; ++e) ids[e] = node_id(P[e].i, P[e].j);
    for (int e = 0; e < 3; ++e) {
      int f = (e + 1) % 3;
      if (ids[e] >= 0) poly[np++] = static_cast<std::uint32_t>(ids[e]);
      if ((ids[e] >= 0) != (ids[f] >= 0)) {
        long long c = crossing(P[e], P[f]);
        if (c >= 0) poly[np++] = static_cast<std::uint32_t>(c);
      }
    }
    if (np < 3) return;
    Vertex v0 = tri.vertex(poly[0]);
    for (int k = 1; k + 1 < np; ++k) {
      Vertex a = tri.vertex(poly[k]), b = tri.vertex(poly[k + 1]);
      double area = 0.5 * std::fabs((a.X - v0.X) * (b.Y - v0.Y) - (b.X - v0.X) * (a.Y - v0.Y));
      if (area < 1e-12 * h * h) continue;
      tri.triangles.push_back({poly[0], poly[k], poly[k + 1]});
    }
  };

  for (int d = g.d_first + 2; d <= g.d_last; ++d) {
    const std::size_t base = static_cast<std::size_t>(d - g.d_first) * slots;
    for (int s = 0; s < slots; ++s) {
      const Node& tr = g.nodes[base + s];
      if (!(tr.flags & kValid)) continue;
      int m = 2 * s + (d & 1);
      int a = (d + m) / 2, b = (d - m) / 2;
      LatticeRef BL{a - 1, b - 1}, BR{a, b - 1}, TL{a - 1, b}, TR{a, b};
      if (m + 1 <= g.K) {
        const LatticeRef P[3] = {BL, BR, TR};
        emit(P);
      }
      if (m - 1 >= 0) {
        const LatticeRef P[3] = {BL, TR, TL};
        emit(P);
      }
    }
  }
  return tri;
}

void invert_map(const CharGrid& grid, PhysGrid& phys, int k0, double cusp_tol) {
  Triangulation tri = triangulate(grid);
  invert_map(grid, tri, phys, k0, cusp_tol);
}

void invert_map(const CharGrid& grid, const Triangulation& tri, PhysGrid& phys, int k0,
                double cusp_tol) {
  const Gamma0Curve& curve = *grid.curve;
  const MaterialModel& model = curve.model();
  const InitialData& data = curve.data();
  const int nx = phys.nx, nt = phys.nt;
  const double dx = phys.dx, dt = phys.dt;
  if (k0 <= 0) {
    for (int i = 0; i <= nx; ++i) {
      double x = phys.x(i);
      std::size_t id = phys.index(0, i);
      phys.theta[id] = data.theta0.value(x);
      phys.theta_t[id] = data.theta1.value(x);
      phys.theta_x[id] = data.theta0.derivative(x);
      phys.cusp[id] = 0;
    }
    k0 = 1;
  }
  if (k0 > nt) return;
  std::vector<std::uint8_t> done(static_cast<std::size_t>(nt - k0 + 1) * (nx + 1), 0);
  const double eps = 1e-10;
  for (const auto& T : tri.triangles) {
    Vertex v[3] = {tri.vertex(T[0]), tri.vertex(T[1]), tri.vertex(T[2])};
    double xmin = std::min({v[0].s.x, v[1].s.x, v[2].s.x});
    double xmax = std::max({v[0].s.x, v[1].s.x, v[2].s.x});
    double tmin = std::min({v[0].s.t, v[1].s.t, v[2].s.t});
    double tmax = std::max({v[0].s.t, v[1].s.t, v[2].s.t});
    int ka = std::max(k0, static_cast<int>(std::ceil(tmin / dt - 1e-9)));
    int kb = std::min(nt, static_cast<int>(std::floor(tmax / dt + 1e-9)));
    if (ka > kb) continue;
    int ia = std::max(0, static_cast<int>(std::ceil(xmin / dx - 1e-9)));
    int ib = std::min(nx, static_cast<int>(std::floor(xmax / dx + 1e-9)));
    if (ia > ib) continue;
    double x0 = v[0].s.x, t0 = v[0].s.t;
    double ax = v[1].s.x - x0, at = v[1].s.t - t0, bx = v[2].s.x - x0, bt = v[2].s.t - t0;
    double det = ax * bt - bx * at;
    double scale = (std::fabs(ax) + std::fabs(bx)) * (std::fabs(at) + std::fabs(bt));
    if (!(std::fabs(det) > 1e-13 * scale) || scale == 0.0) continue;
    double w1 = unwrap_near(v[1].s.w, v[0].s.w), w2 = unwrap_near(v[2].s.w, v[0].s.w);
    double z1 = unwrap_near(v[1].s.z, v[0].s.z), z2 = unwrap_near(v[2].s.z, v[0].s.z);
    for (int k = ka; k <= kb; ++k) {
      double tk = phys.t(k);
      for (int i = ia; i <= ib; ++i) {
        std::size_t dk = static_cast<std::size_t>(k - k0) * (nx + 1) + i;
        if (done[dk]) continue;
        double X = phys.x(i) - x0, Tt = tk - t0;
        double l1 = (X * bt - bx * Tt) / det;
        double l2 = (ax * Tt - X * at) / det;
        double l0 = 1.0 - l1 - l2;
        if (l0 < -eps || l1 < -eps || l2 < -eps) continue;
        double th = l0 * v[0].s.theta + l1 * v[1].s.theta + l2 * v[2].s.theta;
        double w = wrap_angle(l0 * v[0].s.w + l1 * w1 + l2 * w2);
        double z = wrap_angle(l0 * v[0].s.z + l1 * z1 + l2 * z2);
        Decompressed R = decompress(w, cusp_tol), S = decompress(z, cusp_tol);
        double c = model.speed(th);
        std::size_t id = phys.index(k, i);
        phys.theta[id] = th;
        phys.theta_t[id] = 0.5 * (R.value + S.value);
        phys.theta_x[id] = (R.value - S.value) / (2.0 * c);
        phys.cusp[id] = (R.cusp || S.cusp) ? 1 : 0;
        done[dk] = 1;
      }
    }
  }
  for (int k = k0; k <= nt; ++k)
    for (int i = 0; i <= nx; ++i)
      if (!done[static_cast<std::size_t>(k - k0) * (nx + 1) + i]) {
        std::ostringstream os;
        os << "no characteristic cell contains x=" << phys.x(i);
        throw Error(ErrorCode::LookupMiss, "charwave", os.str(), phys.t(k));
      }
}

namespace {

struct VertexProducts {
  double jac, tt, flux, quad, tt2, energy;
};

VertexProducts products(const State& s, const MaterialModel& model) {
  WaveSpeed ws = model.wave_speed(s.theta);
  double c = ws.c;
  double sw = std::sin(s.w), cw = std::cos(s.w), sz = std::sin(s.z), cz = std::cos(s.z);
  double Cw = 0.5 * (1 + cw), Cz = 0.5 * (1 + cz), Sw = 0.5 * (1 - cw), Sz = 0.5 * (1 - cz);
  double pq = s.p * s.q;
  VertexProducts r;
  r.jac = pq / (2.0 * c) * Cw * Cz;
  r.tt = pq / (8.0 * c) * (sw * Cz + sz * Cw);
  double tx = pq / (8.0 * c * c) * (sw * Cz - sz * Cw);
  double txx = pq / (8.0 * c * c * c) * (Sw * Cz + Sz * Cw - 0.5 * sw * sz);
  r.flux = c * c * tx;
  r.quad = c * ws.cprime * txx;
  r.tt2 = pq / (8.0 * c) * (Sw * Cz + Sz * Cw + 0.5 * sw * sz);
  r.energy = pq / (4.0 * c) * (Sw * Cz + Sz * Cw);
  return r;
}

}  // namespace

void project_sources(const CharGrid& grid, const Triangulation& tri, const PhysGrid& phys,
                     SourceFields& out, int k0) {
  const Gamma0Curve& curve = *grid.curve;
  const MaterialModel& model = curve.model();
  const InitialData& data = curve.data();
  const int nx = phys.nx, nt = phys.nt;
  const std::size_t n = phys.size();
  out.theta_t.resize(n, 0.0);
  out.flux.resize(n, 0.0);
  out.quad.resize(n, 0.0);
  if (k0 <= 0) {
    for (int i = 0; i <= nx; ++i) {
      double x = phys.x(i);
      WaveSpeed ws = model.wave_speed(data.theta0.value(x));
      double tx = data.theta0.derivative(x);
      std::size_t id = phys.index(0, i);
      out.theta_t[id] = data.theta1.value(x);
      out.flux[id] = ws.c * ws.c * tx;
      out.quad[id] = ws.c * ws.cprime * tx * tx;
    }
    k0 = 1;
  }
  if (k0 > nt) return;
  const std::size_t rows = static_cast<std::size_t>(nt - k0 + 1) * (nx + 1);
  // Moments per node: W0, W1, W2 and (S0, S1) for the three fields.
  std::vector<double> acc(rows * 9, 0.0);
  const double dx = phys.dx, dt = phys.dt;
  for (const auto& T : tri.triangles) {
    Vertex v[3] = {tri.vertex(T[0]), tri.vertex(T[1]), tri.vertex(T[2])};
    double area = 0.5 * std::fabs((v[1].X - v[0].X) * (v[2].Y - v[0].Y) -
                                  (v[2].X - v[0].X) * (v[1].Y - v[0].Y));
    double a = area / 3.0;
    for (const Vertex& vv : v) {
      double tv = std::max(vv.s.t, 0.0);
      double xv = std::clamp(vv.s.x, 0.0, M_PI);
      double ft = tv / dt;
      int kl = static_cast<int>(std::floor(ft));
      double beta = ft - kl;
      if (kl > nt) continue;
      VertexProducts pr = products(vv.s, model);
      double fx = xv / dx;
      int il = std::min(static_cast<int>(fx), nx - 1);
      double alpha = fx - il;
      for (int dk = 0; dk < 2; ++dk) {
        int k = kl + dk;
        if (k < k0 || k > nt) continue;
        double wt = dk ? beta : 1.0 - beta;
        if (wt <= 0.0) continue;
        for (int di = 0; di < 2; ++di) {
          int i = il + di;
          double wx = di ? alpha : 1.0 - alpha;
          if (wx <= 0.0) continue;
          double wgt = a * wt * wx;
          double xi = (xv - phys.x(i)) / dx;
          double* A = &acc[(static_cast<std::size_t>(k - k0) * (nx + 1) + i) * 9];
          A[0] += wgt * pr.jac;
          A[1] += wgt * pr.jac * xi;
          A[2] += wgt * pr.jac * xi * xi;
          A[3] += wgt * pr.tt;
          A[4] += wgt * pr.tt * xi;
          A[5] += wgt * pr.flux;
          A[6] += wgt * pr.flux * xi;
          A[7] += wgt * pr.quad;
          A[8] += wgt * pr.quad * xi;
        }
      }
    }
  }
  for (int k = k0; k <= nt; ++k) {
    for (int i = 0; i <= nx; ++i) {
      const double* A = &acc[(static_cast<std::size_t>(k - k0) * (nx + 1) + i) * 9];
      std::size_t id = phys.index(k, i);
      if (!(A[0] > 0.0)) {
        out.theta_t[id] = phys.theta_t[id];
        double c = model.speed(phys.theta[id]);
        out.flux[id] = c * c * phys.theta_x[id];
        out.quad[id] = c * model.wave_speed(phys.theta[id]).cprime * phys.theta_x[id] * phys.theta_x[id];
        continue;
      }
      double det = A[0] * A[2] - A[1] * A[1];
      auto fit = [&](double s0, double s1) {
        if (det > 1e-10 * A[0] * A[2]) return (A[2] * s0 - A[1] * s1) / det;
        return s0 / A[0];
      };
      out.theta_t[id] = fit(A[3], A[4]);
      out.flux[id] = fit(A[5], A[6]);
      out.quad[id] = fit(A[7], A[8]);
    }
  }
}

double boundary_theta(const CharGrid& g, bool right, double t) {
  const InitialData& data = g.curve->data();
  double t_prev = 0.0, th_prev = data.theta0.value(right ? M_PI : 0.0);
  if (t <= 0.0) return th_prev;
  const int slots = g.slots();
  const int m = right ? g.K : 0;
  for (int d = g.d_first; d <= g.d_last; ++d) {
    if (((d - m) & 1) != 0) continue;
    const Node& n = g.nodes[static_cast<std::size_t>(d - g.d_first) * slots + (m >> 1)];
    if (!(n.flags & kValid)) continue;
    if (n.t >= t) {
      if (n.t == t_prev) return n.theta;
      double s = (t - t_prev) / (n.t - t_prev);
      return th_prev + s * (n.theta - th_prev);
    }
    t_prev = n.t;
    th_prev = n.theta;
  }
  return th_prev;
}

double energy_char(const CharGrid& grid, const ProblemSpec& problem, double t) {
  Triangulation tri = triangulate(grid);
  return energy_char(grid, tri, problem, t);
}

double energy_char(const CharGrid& grid, const Triangulation& tri, const ProblemSpec& problem,
                   double t) {
  const MaterialModel& model = problem.model;
  const InitialData& data = problem.data;
  double E = 0.0;
  if (t <= 0.0) {
    const int m = 4096;
    std::vector<double> f(m + 1);
    for (int i = 0; i <= m; ++i) {
      double x = M_PI * i / m;
      double c = model.speed(data.theta0.value(x));
      double a = data.theta1.value(x), b = data.theta0.derivative(x);
      f[i] = a * a + c * c * b * b;
    }
    E = simpson(f, M_PI / m);
  } else {
    for (const auto& T : tri.triangles) {
      Vertex v[3] = {tri.vertex(T[0]), tri.vertex(T[1]), tri.vertex(T[2])};
      double px[2][6];
      int np = 0;
      for (int e = 0; e < 3 && np < 2; ++e) {
        const Vertex& a = v[e];
        const Vertex& b = v[(e + 1) % 3];
        if ((a.s.t < t) == (b.s.t < t)) continue;
        double l = (t - a.s.t) / (b.s.t - a.s.t);
        double bw = unwrap_near(b.s.w, a.s.w), bz = unwrap_near(b.s.z, a.s.z);
        px[np][0] = a.X + l * (b.X - a.X);
        px[np][1] = a.Y + l * (b.Y - a.Y);
        px[np][2] = a.s.w + l * (bw - a.s.w);
        px[np][3] = a.s.z + l * (bz - a.s.z);
        px[np][4] = a.s.p + l * (b.s.p - a.s.p);
        px[np][5] = a.s.q + l * (b.s.q - a.s.q);
        ++np;
      }
      if (np != 2) continue;
      int lo = (px[0][0] - px[0][1] <= px[1][0] - px[1][1]) ? 0 : 1, hi = 1 - lo;
      double F0 = (1 - std::cos(px[lo][2])) / 4 * px[lo][4], F1 = (1 - std::cos(px[hi][2])) / 4 * px[hi][4];
      double G0 = (1 - std::cos(px[lo][3])) / 4 * px[lo][5], G1 = (1 - std::cos(px[hi][3])) / 4 * px[hi][5];
      E += 0.5 * (F0 + F1) * (px[hi][0] - px[lo][0]) - 0.5 * (G0 + G1) * (px[hi][1] - px[lo][1]);
    }
  }
  double th0 = boundary_theta(grid, false, t), thp = boundary_theta(grid, true, t);
  return E + 2.0 * (problem.boundary_energy_left(th0) + problem.boundary_energy_right(thp));
}

std::vector<double> theta_t_sq_cumulative(const CharGrid& grid, const Triangulation& tri,
                                          const PhysGrid& phys) {
  const MaterialModel& model = grid.curve->model();
  const int nt = phys.nt;
  const double dt = phys.dt;
  std::vector<double> full(nt + 2, 0.0), part(nt + 1, 0.0);
  for (const auto& T : tri.triangles) {
    Vertex v[3] = {tri.vertex(T[0]), tri.vertex(T[1]), tri.vertex(T[2])};
    double area = 0.5 * std::fabs((v[1].X - v[0].X) * (v[2].Y - v[0].Y) -
                                  (v[2].X - v[0].X) * (v[1].Y - v[0].Y));
    double mass = area / 3.0 *
                  (products(v[0].s, model).tt2 + products(v[1].s, model).tt2 + products(v[2].s, model).tt2);
    double ts[3] = {v[0].s.t, v[1].s.t, v[2].s.t};
    std::sort(ts, ts + 3);
    if (ts[0] > nt * dt) continue;
    int kfull = static_cast<int>(std::ceil(ts[2] / dt - 1e-12));
    if (kfull <= nt) full[std::max(kfull, 0)] += mass;
    int ka = std::max(0, static_cast<int>(std::floor(ts[0] / dt)) + 0);
    for (int k = ka; k < std::min(kfull, nt + 1); ++k) {
      double tk = k * dt;
      if (tk <= ts[0]) continue;
      double frac;
      if (tk <= ts[1]) {
        double den = (ts[1] - ts[0]) * (ts[2] - ts[0]);
        frac = den > 0 ? (tk - ts[0]) * (tk - ts[0]) / den : 1.0;
      } else {
        double den = (ts[2] - ts[0]) * (ts[2] - ts[1]);
        frac = den > 0 ? 1.0 - (ts[2] - tk) * (ts[2] - tk) / den : 1.0;
      }
      part[k] += mass * std::clamp(frac, 0.0, 1.0);
    }
  }
  std::vector<double> D(nt + 1, 0.0);
  double run = 0.0;
  for (int k = 0; k <= nt; ++k) {
    run += full[k];
    D[k] = run + part[k];
  }
  return D;
}

}  // namespace plc::charwave
