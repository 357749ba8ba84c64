#include "plc/duhamel.hpp"

#include <algorithm>
#include <cmath>

#include "plc/errors.hpp"
#include "plc/parallel.hpp"
#include "plc/quadrature.hpp"

namespace plc::heat {

DuhamelEngine::DuhamelEngine(int nx, int nt, double dx, double dt, int gauss_points, double tol)
    : nx_(nx), nt_(nt), dx_(dx), dt_(dt), G_(gauss_points), tol_(tol) {
  if (G_ < 8)
    throw Error(ErrorCode::WindowUnderResolved, "heatkernel",
                "time quadrature needs at least 8 points per panel");
}

const PanelWeights& DuhamelEngine::weights(Kernel kind, int lag) {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(kind == Kernel::Green ? 0 : 1, lag);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    auto w = std::make_unique<PanelWeights>();
    build(kind, lag, *w);
    it = cache_.emplace(key, std::move(w)).first;
  }
  return *it->second;
}

void DuhamelEngine::build(Kernel kind, int lag, PanelWeights& w) const {
  const int n1 = nx_ + 1;
  const double sign = (kind == Kernel::Neumann) ? 1.0 : -1.0;
  const GaussRule& rule = gauss_legendre(G_);
  const double sa = std::sqrt(lag * dt_), sb = std::sqrt((lag + 1) * dt_);
  const double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
  std::vector<double> VA(static_cast<std::size_t>(n1) * n1, 0.0), VB(VA.size(), 0.0);
  std::vector<double> DA(VA.size(), 0.0), DB(VA.size(), 0.0);
  w.b0A.assign(n1, 0.0);
  w.b0B.assign(n1, 0.0);
  w.bpA.assign(n1, 0.0);
  w.bpB.assign(n1, 0.0);

  parallel_for(n1, [&](int i) {
    const double x = i * dx_;
    std::vector<double> M0(nx_), M1(nx_), E(n1), X(n1);
    for (int g = 0; g < G_; ++g) {
      const double s = mid + half * rule.nodes[g];
      const double wq = half * rule.weights[g] * 2.0 * s;
      const double gap = s * s;
      const double lam = std::clamp((gap - lag * dt_) / dt_, 0.0, 1.0);
      const double cA = wq * (1.0 - lam), cB = wq * lam;
      const double sq = 2.0 * std::sqrt(gap), pref = std::sqrt(gap / M_PI);
      const double reach = std::sqrt(160.0 * gap);
      const int N = image_count(gap, tol_);
      std::fill(M0.begin(), M0.end(), 0.0);
      std::fill(M1.begin(), M1.end(), 0.0);
      for (int n = -N; n <= N; ++n) {
        for (int r = 0; r < 2; ++r) {
          const double mu = r == 0 ? x - 2.0 * n * M_PI : 2.0 * n * M_PI - x;
          const double sg = r == 0 ? 1.0 : sign;
          if (mu < -reach || mu > M_PI + reach) continue;
          int la = std::max(0, static_cast<int>(std::floor((mu - reach) / dx_)));
          int lb = std::min(nx_, static_cast<int>(std::ceil((mu + reach) / dx_)));
          for (int l = la; l <= lb; ++l) {
            double a = l * dx_ - mu;
            E[l] = 0.5 * std::erf(a / sq);
            X[l] = std::exp(-a * a / (4.0 * gap));
          }
          // Outside [la, lb] the Gaussian has no mass: E is -1/2 or 1/2, X is 0.
          for (int c = std::max(0, la - 1); c < std::min(nx_, lb + 1); ++c) {
            double e0 = c >= la ? E[c] : -0.5, e1 = c + 1 <= lb ? E[c + 1] : 0.5;
            double x0 = c >= la ? X[c] : 0.0, x1 = c + 1 <= lb ? X[c + 1] : 0.0;
            double m0 = e1 - e0;
            double m1 = (mu - c * dx_) * m0 - pref * (x1 - x0);
            M0[c] += sg * m0;
            M1[c] += sg * m1;
          }
        }
      }
      const double K0 = (kind == Kernel::Neumann) ? neumann(x, gap, 0.0, 0.0, tol_) : 0.0;
      const double Kp = (kind == Kernel::Neumann) ? neumann(x, gap, M_PI, 0.0, tol_) : 0.0;
      double* va = &VA[static_cast<std::size_t>(i) * n1];
      double* vb = &VB[static_cast<std::size_t>(i) * n1];
      double* da = &DA[static_cast<std::size_t>(i) * n1];
      double* db = &DB[static_cast<std::size_t>(i) * n1];
      for (int c = 0; c < nx_; ++c) {
        double left = M0[c] - M1[c] / dx_, right = M1[c] / dx_;
        va[c] += cA * left;
        va[c + 1] += cA * right;
        vb[c] += cB * left;
        vb[c + 1] += cB * right;
      }
      for (int l = 0; l <= nx_; ++l) {
        double prev = l > 0 ? M0[l - 1] : 0.0, next = l < nx_ ? M0[l] : 0.0;
        double v = -(prev - next) / dx_;
        if (l == nx_) v += Kp;
        if (l == 0) v -= K0;
        da[l] += cA * v;
        db[l] += cB * v;
      }
      w.b0A[i] += cA * K0;
      w.b0B[i] += cB * K0;
      w.bpA[i] += cA * Kp;
      w.bpB[i] += cB * Kp;
    }
  });
  auto to_float = [](const std::vector<double>& v) { return std::vector<float>(v.begin(), v.end()); };
  w.VA = to_float(VA);
  w.VB = to_float(VB);
  w.DA = to_float(DA);
  w.DB = to_float(DB);
}

void DuhamelEngine::initial_row(Kernel kind, const std::function<double(double)>& f, int k,
                                double* out) const {
  const double t = k * dt_;
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTimeGap, "heatkernel", "initial term at t=0");
  const int panels = std::max(8, static_cast<int>(std::ceil(M_PI / (0.25 * std::sqrt(t)))));
  const GaussRule& rule = gauss_legendre(8);
  const double h = M_PI / panels;
  std::vector<double> xi, wf;
  xi.reserve(panels * 8);
  wf.reserve(panels * 8);
  for (int p = 0; p < panels; ++p)
    for (int g = 0; g < 8; ++g) {
      double s = (p + 0.5) * h + 0.5 * h * rule.nodes[g];
      xi.push_back(s);
      wf.push_back(0.5 * h * rule.weights[g] * f(s));
    }
  for (int i = 0; i <= nx_; ++i) {
    const double x = i * dx_;
    double sum = 0.0;
    for (std::size_t q = 0; q < xi.size(); ++q) sum += wf[q] * kernel(kind, x, t, xi[q], 0.0, tol_);
    out[i] = sum;
  }
}

namespace {

// Nodal values minus dx^2/12 f'' (one-sided second difference at the walls).
// Against hat functions this cancels the leading interpolation error of the
// cell averages, so the volume quadrature becomes fourth order in dx.
std::vector<double> hat_corrected(const double* F, int rows, int nx) {
  const int n1 = nx + 1;
  std::vector<double> out(static_cast<std::size_t>(rows) * n1);
  for (int r = 0; r < rows; ++r) {
    const double* f = F + static_cast<std::size_t>(r) * n1;
    double* g = &out[static_cast<std::size_t>(r) * n1];
    for (int l = 0; l < n1; ++l) {
      const int c = std::clamp(l, 1, nx - 1);
      g[l] = f[l] - (f[c - 1] - 2.0 * f[c] + f[c + 1]) / 12.0;
    }
  }
  return out;
}

}  // namespace

void DuhamelEngine::accumulate(Kernel kind, int k, const double* FV_raw, const double* FD_raw,
                               const double* FB, double* out) {
  if (k <= 0) return;
  if (static_cast<long long>(k) * G_ < 8)
    throw Error(ErrorCode::WindowUnderResolved, "heatkernel", "fewer than 8 time samples");
  const int n1 = nx_ + 1;
  std::vector<double> fv, fd;
  if (FV_raw) fv = hat_corrected(FV_raw, k + 1, nx_);
  if (FD_raw) fd = hat_corrected(FD_raw, k + 1, nx_);
  const double* FV = FV_raw ? fv.data() : nullptr;
  const double* FD = FD_raw ? fd.data() : nullptr;
  for (int j = 0; j < k; ++j) {
    const PanelWeights& W = weights(kind, j);
    const std::size_t ra = static_cast<std::size_t>(k - j) * n1, rb = static_cast<std::size_t>(k - j - 1) * n1;
    for (int i = 0; i < n1; ++i) {
      const std::size_t row = static_cast<std::size_t>(i) * n1;
      double s = 0.0;
      if (FV) {
        const float* a = &W.VA[row];
        const float* b = &W.VB[row];
        for (int l = 0; l < n1; ++l) s += a[l] * FV[ra + l] + b[l] * FV[rb + l];
      }
      if (FD) {
        const float* a = &W.DA[row];
        const float* b = &W.DB[row];
        for (int l = 0; l < n1; ++l) s += a[l] * FD[ra + l] + b[l] * FD[rb + l];
      }
      if (FB) {
        s += W.bpA[i] * FB[ra + nx_] + W.bpB[i] * FB[rb + nx_];
        s -= W.b0A[i] * FB[ra] + W.b0B[i] * FB[rb];
      }
      out[i] += s;
    }
  }
}

namespace {

// Cumulative integral of y theta1(y) over [0, xi], tabulated with Hermite
// interpolation (the derivative xi theta1(xi) is known exactly).
class ShiftTable {
 public:
  explicit ShiftTable(const Sampler& theta1, int n = 4096) : th1_(theta1), n_(n), h_(M_PI / n) {
    v_.resize(n + 1, 0.0);
    for (int k = 0; k < n; ++k)
      v_[k + 1] = v_[k] + gauss_integrate([&](double y) { return y * th1_.value(y); }, k * h_,
                                          (k + 1) * h_, 1, 8);
  }
  double operator()(double x) const {
    x = std::clamp(x, 0.0, M_PI);
    int k = std::min(static_cast<int>(x / h_), n_ - 1);
    double a = k * h_, s = (x - a) / h_;
    double d0 = a * th1_.value(a) * h_, d1 = (a + h_) * th1_.value(a + h_) * h_;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * v_[k] + h10 * d0 + h01 * v_[k + 1] + h11 * d1;
  }

 private:
  Sampler th1_;
  int n_;
  double h_;
  std::vector<double> v_;
};

Kernel J_kernel(const ProblemSpec& p) {
  return p.bc.u_side == USide::Nonslip ? Kernel::Neumann : Kernel::Green;
}

}  // namespace

std::vector<double> initial_terms_J(const DuhamelEngine& eng, const ProblemSpec& problem) {
  const int n1 = eng.nx() + 1;
  std::vector<double> out(static_cast<std::size_t>(eng.nt() + 1) * n1, 0.0);
  const double dx = M_PI / eng.nx();
  for (int i = 0; i < n1; ++i) out[i] = problem.data.J0(i * dx);
  auto f = [&](double x) { return problem.data.J0(x); };
  parallel_for(eng.nt(), [&](int r) { eng.initial_row(J_kernel(problem), f, r + 1, &out[(r + 1) * n1]); });
  return out;
}

std::vector<double> initial_terms_u(const DuhamelEngine& eng, const ProblemSpec& problem) {
  const int n1 = eng.nx() + 1;
  std::vector<double> out(static_cast<std::size_t>(eng.nt() + 1) * n1, 0.0);
  const double dx = M_PI / eng.nx();
  std::function<double(double)> f;
  Kernel kind;
  if (problem.bc.u_side == USide::Nonslip) {
    kind = Kernel::Green;
    f = [&](double x) { return problem.data.u0.value(x); };
  } else {
    kind = Kernel::Neumann;
    auto table = std::make_shared<ShiftTable>(problem.data.theta1);
    f = [&problem, table](double x) { return problem.data.u0.value(x) + (*table)(x) / M_PI; };
  }
  for (int i = 0; i < n1; ++i) out[i] = f(i * dx);
  parallel_for(eng.nt(), [&](int r) { eng.initial_row(kind, f, r + 1, &out[(r + 1) * n1]); });
  return out;
}

void duhamel_J(DuhamelEngine& eng, const ProblemSpec& problem, const PhysGrid& phys,
               const charwave::SourceFields& src, const std::vector<double>& J_prev, int k0, int k1,
               std::vector<double>& out, const std::vector<double>* initial_cache) {
  const int n1 = phys.nx + 1;
  const std::size_t rows = static_cast<std::size_t>(k1 + 1) * n1;
  std::vector<double> FV(rows), FD(rows);
  for (std::size_t id = 0; id < rows; ++id) {
    FV[id] = -(src.theta_t[id] + J_prev[id]) - src.quad[id];
    FD[id] = -src.flux[id];
  }
  const bool nonslip = problem.bc.u_side == USide::Nonslip;
  const Kernel kind = J_kernel(problem);
  std::vector<double> init_local;
  if (!initial_cache) {
    init_local = initial_terms_J(eng, problem);
    initial_cache = &init_local;
  }
  if (out.size() < phys.size()) out.resize(phys.size(), 0.0);
  for (int k = std::max(k0, 0); k <= k1; ++k) {
    double* row = &out[static_cast<std::size_t>(k) * n1];
    std::copy_n(&(*initial_cache)[static_cast<std::size_t>(k) * n1], n1, row);
    eng.accumulate(kind, k, FV.data(), FD.data(), nonslip ? src.flux.data() : nullptr, row);
  }
}

void reconstruct_u(DuhamelEngine& eng, const ProblemSpec& problem, const PhysGrid& phys,
                   const charwave::SourceFields& src, const std::vector<double>& J, int k0, int k1,
                   std::vector<double>& u, const std::vector<double>* initial_cache) {
  const int n1 = phys.nx + 1;
  const double dx = phys.dx;
  const std::size_t rows = static_cast<std::size_t>(k1 + 1) * n1;
  std::vector<double> init_local;
  if (!initial_cache) {
    init_local = initial_terms_u(eng, problem);
    initial_cache = &init_local;
  }
  if (u.size() < phys.size()) u.resize(phys.size(), 0.0);
  if (problem.bc.u_side == USide::Nonslip) {
    std::vector<double> FD(rows);
    for (std::size_t id = 0; id < rows; ++id) FD[id] = -src.theta_t[id];
    for (int k = std::max(k0, 0); k <= k1; ++k) {
      double* row = &u[static_cast<std::size_t>(k) * n1];
      std::copy_n(&(*initial_cache)[static_cast<std::size_t>(k) * n1], n1, row);
      eng.accumulate(Kernel::Green, k, nullptr, FD.data(), nullptr, row);
    }
    return;
  }
  // Stress-free: u = u~ - (1/pi) int_0^x y theta_t dy with u~ a Neumann solution.
  std::vector<double> FV(rows), FD(rows), shift(rows);
  for (int k = 0; k <= k1; ++k) {
    const std::size_t r = static_cast<std::size_t>(k) * n1;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    for (int l = 0; l < n1; ++l) {
      const double y = l * dx;
      const double g1 = src.flux[r + l] + y * src.quad[r + l];
      const double g2 = y * (src.theta_t[r + l] + J[r + l]);
      const double g3 = y * src.theta_t[r + l];
      if (l > 0) {
        const double yp = (l - 1) * dx;
        c1 += 0.5 * dx * (g1 + src.flux[r + l - 1] + yp * src.quad[r + l - 1]);
        c2 += 0.5 * dx * (g2 + yp * (src.theta_t[r + l - 1] + J[r + l - 1]));
        c3 += 0.5 * dx * (g3 + yp * src.theta_t[r + l - 1]);
      }
      FV[r + l] = (y * src.flux[r + l] - c1 - c2) / M_PI;
      FD[r + l] = -(1.0 - y / M_PI) * src.theta_t[r + l];
      shift[r + l] = c3 / M_PI;
    }
  }
  for (int k = std::max(k0, 0); k <= k1; ++k) {
    double* row = &u[static_cast<std::size_t>(k) * n1];
    if (k == 0) {
      for (int l = 0; l < n1; ++l) row[l] = problem.data.u0.value(l * dx);
      continue;
    }
    std::copy_n(&(*initial_cache)[static_cast<std::size_t>(k) * n1], n1, row);
    eng.accumulate(Kernel::Neumann, k, FV.data(), FD.data(), nullptr, row);
    for (int l = 0; l < n1; ++l) row[l] -= shift[static_cast<std::size_t>(k) * n1 + l];
  }
}

}  // namespace plc::heat
