#include "plc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace plc {

namespace {
GaussRule build_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}
}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int panels,
                       int n) {
  const GaussRule& g = gauss_legendre(n);
  double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    double mid = a + (k + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

double simpson(const double* f, int m, double h) {
  if (m <= 0) return 0.0;
  if (m == 1) return 0.5 * h * (f[0] + f[1]);
  double sum = 0.0;
  int even = (m % 2 == 0) ? m : m - 3;
  for (int i = 0; i + 2 <= even; i += 2) sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (even != m) {
    int i = even;
    sum += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
  }
  return sum;
}

double simpson(const std::vector<double>& f, double h) {
  return simpson(f.data(), static_cast<int>(f.size()) - 1, h);
}

double trapezoid(const double* f, int m, double h) {
  if (m <= 0) return 0.0;
  double s = 0.5 * (f[0] + f[m]);
  for (int i = 1; i < m; ++i) s += f[i];
  return s * h;
}

}  // namespace plc
