#include "plc/charwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plc/errors.hpp"

namespace plc::charwave {

// ---------------------------------------------------------------- curve

double Gamma0Curve::R0(double x) const {
  double th = data_.theta0.value(x);
  return data_.theta1.value(x) + model_.speed(th) * data_.theta0.derivative(x);
}

double Gamma0Curve::S0(double x) const {
  double th = data_.theta0.value(x);
  return data_.theta1.value(x) - model_.speed(th) * data_.theta0.derivative(x);
}

double Gamma0Curve::integrand_X(double x) const {
  double r = R0(x);
  return 1.0 + r * r;
}

double Gamma0Curve::integrand_Y(double x) const {
  double s = S0(x);
  return 1.0 + s * s;
}

Gamma0Curve Gamma0Curve::build(const InitialData& data, const MaterialModel& model, int intervals) {
  if (intervals < 2) throw Error(ErrorCode::InvalidArgument, "charwave", "curve table too coarse");
  Gamma0Curve c;
  c.data_ = data;
  c.model_ = model;
  c.n_ = intervals;
  c.dx_ = M_PI / intervals;
  c.Xs_.assign(intervals + 1, 0.0);
  c.Ys_.assign(intervals + 1, 0.0);
  double fx0 = c.integrand_X(0.0), fy0 = c.integrand_Y(0.0);
  for (int k = 0; k < intervals; ++k) {
    double a = k * c.dx_, b = (k + 1) * c.dx_, m = 0.5 * (a + b);
    double fxm = c.integrand_X(m), fx1 = c.integrand_X(b);
    double fym = c.integrand_Y(m), fy1 = c.integrand_Y(b);
    if (!std::isfinite(fxm + fx1 + fym + fy1 + fx0 + fy0)) {
      std::ostringstream os;
      os << "initial data not finite near x=" << m;
      throw Error(ErrorCode::QuadratureFailure, "charwave", os.str());
    }
    c.Xs_[k + 1] = c.Xs_[k] + c.dx_ / 6.0 * (fx0 + 4.0 * fxm + fx1);
    c.Ys_[k + 1] = c.Ys_[k] + c.dx_ / 6.0 * (fy0 + 4.0 * fym + fy1);
    fx0 = fx1;
    fy0 = fy1;
  }
  return c;
}

double Gamma0Curve::cumulative(const std::vector<double>& tab, double x, bool y_side) const {
  x = std::clamp(x, 0.0, M_PI);
  int k = std::min(static_cast<int>(x / dx_), n_ - 1);
  double a = k * dx_;
  if (x == a) return tab[k];
  double m = 0.5 * (a + x);
  auto f = [&](double s) { return y_side ? integrand_Y(s) : integrand_X(s); };
  return tab[k] + (x - a) / 6.0 * (f(a) + 4.0 * f(m) + f(x));
}

double Gamma0Curve::X_of_x(double x) const { return cumulative(Xs_, x, false); }
double Gamma0Curve::Y_of_x(double x) const { return -cumulative(Ys_, x, true); }

double Gamma0Curve::invert(const std::vector<double>& tab, double v, bool y_side) const {
  if (v <= 0.0) return 0.0;
  if (v >= tab.back()) return M_PI;
  auto it = std::upper_bound(tab.begin(), tab.end(), v);
  int k = static_cast<int>(it - tab.begin()) - 1;
  double a = k * dx_, b = a + dx_;
  double x = a + dx_ * (v - tab[k]) / (tab[k + 1] - tab[k]);
  for (int iter = 0; iter < 6; ++iter) {
    double g = cumulative(tab, x, y_side) - v;
    double d = y_side ? integrand_Y(x) : integrand_X(x);
    double step = g / d;
    x = std::clamp(x - step, a, b);
    if (std::fabs(step) < 1e-15 * (1.0 + x)) break;
  }
  return x;
}

double Gamma0Curve::x_of_X(double X) const { return invert(Xs_, X, false); }
double Gamma0Curve::x_of_Y(double Y) const { return invert(Ys_, -Y, true); }

double Gamma0Curve::x_of_diff(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= xtil()) return M_PI;
  double lo = 0.0, hi = M_PI;
  // bracket on the table, then Newton
  int a = 0, b = n_;
  while (b - a > 1) {
    int mid = (a + b) / 2;
    if (Xs_[mid] + Ys_[mid] <= s) a = mid; else b = mid;
  }
  lo = a * dx_;
  hi = b * dx_;
  double x = lo + dx_ * (s - Xs_[a] - Ys_[a]) / (Xs_[b] + Ys_[b] - Xs_[a] - Ys_[a]);
  for (int iter = 0; iter < 6; ++iter) {
    double g = X_of_x(x) - Y_of_x(x) - s;
    double step = g / (integrand_X(x) + integrand_Y(x));
    x = std::clamp(x - step, lo, hi);
    if (std::fabs(step) < 1e-15 * (1.0 + x)) break;
  }
  return x;
}

State Gamma0Curve::state_at(double x) const {
  State s;
  s.x = x;
  s.t = 0.0;
  s.theta = data_.theta0.value(x);
  s.w = compress(R0(x));
  s.z = compress(S0(x));
  s.p = 1.0;
  s.q = 1.0;
  return s;
}

// ---------------------------------------------------------------- local system

Derivatives rhs_semilinear(double w, double z, double p, double q, double theta, double J,
                           const MaterialModel& model, double damping) {
  WaveSpeed ws = model.wave_speed(theta);
  const double c = ws.c, cp = ws.cprime;
  const double sw = std::sin(w), cw = std::cos(w), sz = std::sin(z), cz = std::cos(z);
  const double Cw = 0.5 * (1.0 + cw), Cz = 0.5 * (1.0 + cz);  // cos^2(w/2), cos^2(z/2)
  const double Sw = 0.5 * (1.0 - cw), Sz = 0.5 * (1.0 - cz);  // sin^2(w/2), sin^2(z/2)
  const double damp_wz = damping * (sw * Cz + sz * Cw);
  Derivatives d;
  d.theta_X = sw * p / (4.0 * c);
  d.theta_Y = sz * q / (4.0 * c);
  d.w_Y = q / (4.0 * c) * (cp / c * (Cz - Cw) - damp_wz - 4.0 * J * Cw * Cz);
  d.z_X = p / (4.0 * c) * (cp / c * (Cw - Cz) - damp_wz - 4.0 * J * Cw * Cz);
  d.p_Y = p * q / (2.0 * c) *
          (cp / (4.0 * c) * (sz - sw) - damping * (0.25 * sw * sz + Sw * Cz) - J * sw * Cz);
  d.q_X = p * q / (2.0 * c) *
          (cp / (4.0 * c) * (sw - sz) - damping * (0.25 * sw * sz + Sz * Cw) - J * sz * Cw);
  d.x_X = (1.0 + cw) * p / 4.0;
  d.x_Y = -(1.0 + cz) * q / 4.0;
  d.t_X = (1.0 + cw) * p / (4.0 * c);
  d.t_Y = (1.0 + cz) * q / (4.0 * c);
  return d;
}

std::pair<double, double> apply_boundary_L0(double w_in, double p_in) {
  return {wrap_angle(-w_in), p_in};
}

std::pair<double, double> apply_boundary_Lpi_dirichlet(double z_in, double q_in) {
  return {wrap_angle(-z_in), q_in};
}

namespace {
// Shared Robin reflection: the incoming angle a (tan(a/2) finite or cusp)
// shifted by -2 beta, with the weight rescaled by (1 + tan^2 out)/(1 + tan^2 in).
std::pair<double, double> robin_reflect(double a, double weight, double beta, const char* where) {
  if (std::fabs(a) > M_PI - kCuspTol) {
    if (beta == 0.0) return {a, weight};
    throw Error(ErrorCode::CuspAtRobinBoundary, "charwave",
                std::string("cusp reached the weak-anchoring boundary ") + where);
  }
  if (beta == 0.0) return {a, weight};
  double ta = std::tan(0.5 * a);
  double tb = ta - 2.0 * beta;
  double out = 2.0 * std::atan(tb);
  return {out, weight * (1.0 + tb * tb) / (1.0 + ta * ta)};
}
}  // namespace

std::pair<double, double> apply_boundary_Lpi(double z_in, double q_in, double theta_b, double iota,
                                             const MaterialModel& model) {
  return robin_reflect(z_in, q_in, iota * model.speed(theta_b) * theta_b, "x=pi");
}

std::pair<double, double> apply_boundary_L0_robin(double w_in, double p_in, double theta_b,
                                                  double kappa, const MaterialModel& model) {
  return robin_reflect(w_in, p_in, kappa * model.speed(theta_b) * theta_b, "x=0");
}

// ---------------------------------------------------------------- grid access

int CharGrid::j_low(int i) const {
  if (i < 0) return std::numeric_limits<int>::max();
  if (i < static_cast<int>(jlo.size())) return jlo[i];
  return i - K;
}

const Node* CharGrid::node(int i, int j) const {
  int d = i + j, m = i - j;
  if (m < 0 || m > K || !has_diagonal(d)) return nullptr;
  const Node& n = nodes[static_cast<std::size_t>(d - d_first) * slots() + (m >> 1)];
  return (n.flags & kValid) ? &n : nullptr;
}

Node* CharGrid::node_mut(int i, int j) { return const_cast<Node*>(node(i, j)); }

// ---------------------------------------------------------------- march

namespace {

struct Src {
  State s;
  double J;
  std::uint16_t tile;
};

inline State from_node(const Node& n) { return {n.theta, n.w, n.z, n.p, n.q, n.x, n.t}; }

class Marcher {
 public:
  Marcher(const Gamma0Curve& curve, const BoundarySpec& bc, const JSource& J, const MarchOptions& o)
      : curve_(curve), bc_(bc), J_(J), opt_(o), model_(curve.model()) {}

  CharGrid run(double T, const CharGrid* prefix = nullptr, double t_keep = -HUGE_VAL);

 private:
  Derivatives f(const State& s, double J) const {
    return rhs_semilinear(s.w, s.z, s.p, s.q, s.theta, J, model_, opt_.damping);
  }
  void ensure_columns(int i);
  Src curve_column(int i) const;  // curve point below column i
  Src curve_row(int j) const;     // curve point left of row j
  void update(int i, int j, Node& out);

  const Gamma0Curve& curve_;
  BoundarySpec bc_;
  JSource J_;
  MarchOptions opt_;
  MaterialModel model_;
  CharGrid g_;
  int col_limit_ = 0;  // columns with the curve below them: X_i <= Xhat
};

void Marcher::ensure_columns(int i) {
  while (static_cast<int>(g_.jlo.size()) <= i) {
    int c = static_cast<int>(g_.jlo.size());
    int lo = c - g_.K;
    if (c <= col_limit_) {
      double ph = curve_.phi(c * g_.h);
      int jc = static_cast<int>(std::ceil(ph / g_.h - 1e-9));
      lo = std::max(lo, jc);
    }
    g_.jlo.push_back(lo);
  }
}

Src Marcher::curve_column(int i) const {
  double x = curve_.x_of_X(i * g_.h);
  return {curve_.state_at(x), J_(x, 0.0), 0};
}

Src Marcher::curve_row(int j) const {
  double x = curve_.x_of_Y(j * g_.h);
  return {curve_.state_at(x), J_(x, 0.0), 0};
}

void Marcher::update(int i, int j, Node& out) {
  const double h = g_.h;
  const int m = i - j;
  const double Xn = i * h, Yn = j * h;
  bool has_s = false, has_w = false;
  Src S, W;
  double dS = 0.0, dW = 0.0;
  if (m < g_.K) {
    if (j - 1 >= g_.j_low(i)) {
      const Node* n = g_.node(i, j - 1);
      S = {from_node(*n), J_(n->x, n->t), n->tile};
      dS = h;
    } else {
      S = curve_column(i);
      dS = Yn - curve_.Y_of_x(S.s.x);
    }
    has_s = true;
  }
  if (m > 0) {
    if (i - 1 >= 0 && j >= g_.j_low(i - 1)) {
      const Node* n = g_.node(i - 1, j);
      W = {from_node(*n), J_(n->x, n->t), n->tile};
      dW = h;
    } else {
      W = curve_row(j);
      dW = Xn - curve_.X_of_x(W.s.x);
    }
    has_w = true;
  }
  dS = std::max(dS, 0.0);
  dW = std::max(dW, 0.0);

  State N;
  Derivatives fS{}, fW{};
  if (has_s) fS = f(S.s, S.J);
  if (has_w) fW = f(W.s, W.J);

  const bool onL0 = (m == 0), onLpi = (m == g_.K);
  auto close = [&](State& st) {
    if (onL0) {
      if (bc_.left_dirichlet()) {
        st.theta = 0.0;
        std::tie(st.z, st.q) = apply_boundary_L0(st.w, st.p);
      } else {
        std::tie(st.z, st.q) = apply_boundary_L0_robin(st.w, st.p, st.theta, bc_.kappa_left(), model_);
      }
      st.x = 0.0;
    } else if (onLpi) {
      if (bc_.right_dirichlet()) {
        st.theta = 0.0;
        std::tie(st.w, st.p) = apply_boundary_Lpi_dirichlet(st.z, st.q);
      } else {
        std::tie(st.w, st.p) = apply_boundary_Lpi(st.z, st.q, st.theta, bc_.iota_right(), model_);
      }
      st.x = M_PI;
    }
  };

  // Euler predictor.
  {
    double th_s = 0, th_w = 0, x_s = 0, x_w = 0, t_s = 0, t_w = 0;
    if (has_s) {
      N.w = S.s.w + dS * fS.w_Y;
      N.p = S.s.p + dS * fS.p_Y;
      th_s = S.s.theta + dS * fS.theta_Y;
      x_s = S.s.x + dS * fS.x_Y;
      t_s = S.s.t + dS * fS.t_Y;
    }
    if (has_w) {
      N.z = W.s.z + dW * fW.z_X;
      N.q = W.s.q + dW * fW.q_X;
      th_w = W.s.theta + dW * fW.theta_X;
      x_w = W.s.x + dW * fW.x_X;
      t_w = W.s.t + dW * fW.t_X;
    }
    if (has_s && has_w) {
      N.theta = 0.5 * (th_s + th_w);
      N.x = 0.5 * (x_s + x_w);
      N.t = 0.5 * (t_s + t_w);
    } else if (has_s) {
      N.theta = th_s;
      N.x = x_s;
      N.t = t_s;
    } else {
      N.theta = th_w;
      N.x = x_w;
      N.t = t_w;
    }
    N.w = wrap_angle(N.w);
    N.z = wrap_angle(N.z);
    close(N);
  }

  // Trapezoid corrector sweeps.
  for (int sweep = 0; sweep < opt_.sweeps; ++sweep) {
    Derivatives fN = f(N, J_(N.x, N.t));
    State M = N;
    double th_s = 0, th_w = 0, x_s = 0, x_w = 0, t_s = 0, t_w = 0;
    if (has_s) {
      M.w = S.s.w + 0.5 * dS * (fS.w_Y + fN.w_Y);
      M.p = S.s.p + 0.5 * dS * (fS.p_Y + fN.p_Y);
      th_s = S.s.theta + 0.5 * dS * (fS.theta_Y + fN.theta_Y);
      x_s = S.s.x + 0.5 * dS * (fS.x_Y + fN.x_Y);
      t_s = S.s.t + 0.5 * dS * (fS.t_Y + fN.t_Y);
    }
    if (has_w) {
      M.z = W.s.z + 0.5 * dW * (fW.z_X + fN.z_X);
      M.q = W.s.q + 0.5 * dW * (fW.q_X + fN.q_X);
      th_w = W.s.theta + 0.5 * dW * (fW.theta_X + fN.theta_X);
      x_w = W.s.x + 0.5 * dW * (fW.x_X + fN.x_X);
      t_w = W.s.t + 0.5 * dW * (fW.t_X + fN.t_X);
    }
    if (has_s && has_w) {
      M.theta = 0.5 * (th_s + th_w);
      M.x = 0.5 * (x_s + x_w);
      M.t = 0.5 * (t_s + t_w);
    } else if (has_s) {
      M.theta = th_s;
      M.x = x_s;
      M.t = t_s;
    } else {
      M.theta = th_w;
      M.x = x_w;
      M.t = t_w;
    }
    M.w = wrap_angle(M.w);
    M.z = wrap_angle(M.z);
    close(M);
    N = M;
  }

  if (!(N.p > 0.0) || !(N.q > 0.0)) {
    std::ostringstream os;
    os << "p=" << N.p << " q=" << N.q << " at lattice (" << i << "," << j << "), x=" << N.x;
    throw Error(ErrorCode::NonpositivePQ, "charwave", os.str(), N.t);
  }
  out.theta = N.theta;
  out.w = N.w;
  out.z = N.z;
  out.p = N.p;
  out.q = N.q;
  out.x = N.x;
  out.t = N.t;
  out.flags = kValid;
  if (onL0) out.flags |= kOnL0;
  if (onLpi) out.flags |= kOnLpi;
  if (std::fabs(N.w) > M_PI - opt_.cusp_tol || std::fabs(N.z) > M_PI - opt_.cusp_tol) out.flags |= kCusp;
  std::uint16_t tile = 0;
  if (has_s) tile = std::max(tile, S.tile);
  if (has_w) tile = std::max(tile, W.tile);
  if (onL0 || onLpi) ++tile;
  out.tile = tile;
}

CharGrid Marcher::run(double T, const CharGrid* prefix, double t_keep) {
  if (opt_.K < 4 || opt_.K % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "charwave", "K must be even and >= 4");
  g_.K = opt_.K;
  g_.Xhat = curve_.xhat();
  g_.Xtil = curve_.xtil();
  g_.h = g_.Xtil / g_.K;
  g_.curve = &curve_;
  col_limit_ = static_cast<int>(std::floor(g_.Xhat / g_.h + 1e-9));
  g_.jlo_curve_end = col_limit_;

  // Lowest diagonal touching the curve.
  double smin = 0.0;
  for (int k = 0; k <= 256; ++k) {
    double x = M_PI * k / 256.0;
    smin = std::min(smin, curve_.X_of_x(x) + curve_.Y_of_x(x));
  }
  g_.d_first = static_cast<int>(std::floor(smin / g_.h)) - 2;
  g_.d_last = g_.d_first - 1;

  const int slots = g_.slots();
  g_.min_p = g_.min_q = std::numeric_limits<double>::infinity();
  g_.max_p = g_.max_q = -std::numeric_limits<double>::infinity();
  bool started = false;
  int above = 0;  // consecutive diagonals entirely above t = T
  // t grows along both characteristic directions, so the nodes of `prefix`
  // below t_keep are closed under dependence and see only J below t_keep.
  const bool reuse = prefix && prefix->K == g_.K && prefix->d_first == g_.d_first && prefix->h == g_.h;
  for (int d = g_.d_first;; ++d) {
    if (g_.nodes.size() + slots > opt_.max_nodes) {
      std::ostringstream os;
      os << "node budget exhausted before t=" << T;
      throw Error(ErrorCode::HorizonNotReached, "charwave", os.str());
    }
    g_.nodes.resize(g_.nodes.size() + slots, Node{0, 0, 0, 0, 0, 0, 0, 0, 0});
    g_.d_last = d;
    const std::size_t base = static_cast<std::size_t>(d - g_.d_first) * slots;
    double tmin = std::numeric_limits<double>::infinity();
    bool any = false;
    ensure_columns((d + g_.K) / 2 + 1);
    for (int s = 0; s < slots; ++s) {
      int m = 2 * s + (d & 1);
      if (m > g_.K) continue;
      int i = (d + m) / 2, j = (d - m) / 2;
      if (i < 0 || j < g_.j_low(i)) continue;
      Node& n = g_.nodes[base + s];
      const Node* old = reuse && prefix->has_diagonal(d) ? prefix->node(i, j) : nullptr;
      if (old && old->t < t_keep)
        n = *old;
      else
        update(i, j, n);
      any = true;
      tmin = std::min(tmin, n.t);
      g_.min_p = std::min(g_.min_p, n.p);
      g_.max_p = std::max(g_.max_p, n.p);
      g_.min_q = std::min(g_.min_q, n.q);
      g_.max_q = std::max(g_.max_q, n.q);
      if (n.flags & kCusp) ++g_.cusp_nodes;
      g_.max_tile = std::max(g_.max_tile, n.tile);
    }
    if (any) started = true;
    above = (started && any && tmin > T) ? above + 1 : 0;
    if (above == 2) break;
    if (started && !any)
      throw Error(ErrorCode::HorizonNotReached, "charwave", "empty diagonal inside the domain");
  }
  return std::move(g_);
}

}  // namespace

CharGrid march(const Gamma0Curve& curve, const BoundarySpec& bc, const JSource& J, double T,
               const MarchOptions& opt) {
  Marcher m(curve, bc, J, opt);
  return m.run(T);
}

CharGrid march(const Gamma0Curve& curve, const BoundarySpec& bc, const JSource& J, double T,
               const MarchOptions& opt, const CharGrid& prefix, double t_keep) {
  Marcher m(curve, bc, J, opt);
  return m.run(T, &prefix, t_keep);
}

}  // namespace plc::charwave
