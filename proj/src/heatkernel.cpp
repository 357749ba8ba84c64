#include "plc/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plc/errors.hpp"
#include "plc/quadrature.hpp"

namespace plc::heat {

namespace {

inline double gauss(double a, double gap) {
  return std::exp(-a * a / (4.0 * gap)) / (2.0 * std::sqrt(M_PI * gap));
}

void check_gap(double t, double tau) {
  if (!(t > tau)) throw Error(ErrorCode::NonpositiveTimeGap, "heatkernel", "kernel needs t > tau");
}

// sign = +1 for the Neumann kernel, -1 for Green. mode 0: value, 1: d/dxi, 2: d/dx.
double series(double x, double gap, double xi, double sign, int mode, double tol) {
  const int N = image_count(gap, tol);
  double sum = 0.0;
  for (int n = -N; n <= N; ++n) {
    double a = x - xi - 2.0 * n * M_PI;
    double b = x + xi - 2.0 * n * M_PI;
    double ga = gauss(a, gap), gb = gauss(b, gap);
    switch (mode) {
      case 0: sum += ga + sign * gb; break;
      case 1: sum += a / (2.0 * gap) * ga - sign * b / (2.0 * gap) * gb; break;
      default: sum += -a / (2.0 * gap) * ga - sign * b / (2.0 * gap) * gb; break;
    }
  }
  return sum;
}

}  // namespace

double g0(double x, double t, double xi, double tau) {
  check_gap(t, tau);
  return gauss(x - xi, t - tau);
}

double tail_bound(int n, double gap) {
  double m = 2.0 * n - 2.0;
  return std::exp(-(m * m - 4.0) * M_PI * M_PI / (4.0 * gap));
}

int image_count(double gap, double tol) {
  int n = 2;
  while (tail_bound(n, gap) > tol && n < 100000) ++n;
  return 2 * n;
}

double green(double x, double t, double xi, double tau, double tol) {
  check_gap(t, tau);
  return series(x, t - tau, xi, -1.0, 0, tol);
}

double neumann(double x, double t, double xi, double tau, double tol) {
  check_gap(t, tau);
  return series(x, t - tau, xi, 1.0, 0, tol);
}

double kernel(Kernel k, double x, double t, double xi, double tau, double tol) {
  return k == Kernel::Green ? green(x, t, xi, tau, tol) : neumann(x, t, xi, tau, tol);
}

double dgreen_dxi(double x, double t, double xi, double tau, double tol) {
  check_gap(t, tau);
  return series(x, t - tau, xi, -1.0, 1, tol);
}

double dneumann_dxi(double x, double t, double xi, double tau, double tol) {
  check_gap(t, tau);
  return series(x, t - tau, xi, 1.0, 1, tol);
}

double dgreen_dx(double x, double t, double xi, double tau, double tol) {
  check_gap(t, tau);
  return series(x, t - tau, xi, -1.0, 2, tol);
}

double dneumann_dx(double x, double t, double xi, double tau, double tol) {
  check_gap(t, tau);
  return series(x, t - tau, xi, 1.0, 2, tol);
}

double dkernel_dxi(Kernel k, double x, double t, double xi, double tau, double tol) {
  return k == Kernel::Green ? dgreen_dxi(x, t, xi, tau, tol) : dneumann_dxi(x, t, xi, tau, tol);
}

IdentityReport check_identities(int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, M_PI), ut(0.01, 2.0);
  IdentityReport r;
  for (int s = 0; s < samples; ++s) {
    const double x = ux(rng), xi = ux(rng), t = ut(rng), tau = 0.0;
    // 512 Gauss points over [0, pi].
    const double mass =
        gauss_integrate([&](double y) { return neumann(x, t, y, tau); }, 0.0, M_PI, 32, 16);
    r.mass = std::max(r.mass, std::fabs(mass - 1.0));
    r.green_boundary = std::max({r.green_boundary, std::fabs(green(0.0, t, xi, tau)),
                                 std::fabs(green(M_PI, t, xi, tau))});
    r.derivative_identity =
        std::max(r.derivative_identity, std::fabs(dgreen_dx(x, t, xi, tau) + dneumann_dxi(x, t, xi, tau)));
    if (s < 20) {
      const double mid = 0.5 * t;
      const double ck = gauss_integrate(
          [&](double y) { return neumann(x, t, y, mid) * neumann(y, mid, xi, tau); }, 0.0, M_PI, 32, 16);
      r.chapman_kolmogorov = std::max(r.chapman_kolmogorov, std::fabs(ck - neumann(x, t, xi, tau)));
    }
  }
  return r;
}

}  // namespace plc::heat
