#pragma once

namespace plc::heat {

enum class Kernel { Green, Neumann };

/// Free-space heat kernel (1 / (2 sqrt(pi (t - tau)))) exp(-(x - xi)^2 / (4 (t - tau))).
/// Throws NonpositiveTimeGap for t <= tau.
double g0(double x, double t, double xi, double tau);

/// Number of image pairs kept for time gap `gap`: twice the first n >= 2 at
/// which exp(-((2n-2)^2 - 4) pi^2 / (4 gap)) drops below tol.
int image_count(double gap, double tol = 1e-12);
/// The tail bound above evaluated at n.
double tail_bound(int n, double gap);

/// Interval kernels by images over the period 2 pi:
///   sum_n [G0(x - xi - 2 n pi) -+ G0(x + xi - 2 n pi)].
double green(double x, double t, double xi, double tau, double tol = 1e-12);
double neumann(double x, double t, double xi, double tau, double tol = 1e-12);
double kernel(Kernel k, double x, double t, double xi, double tau, double tol = 1e-12);

double dgreen_dxi(double x, double t, double xi, double tau, double tol = 1e-12);
double dneumann_dxi(double x, double t, double xi, double tau, double tol = 1e-12);
double dgreen_dx(double x, double t, double xi, double tau, double tol = 1e-12);
double dneumann_dx(double x, double t, double xi, double tau, double tol = 1e-12);
double dkernel_dxi(Kernel k, double x, double t, double xi, double tau, double tol = 1e-12);

/// Worst deviations found by the kernel self-checks, all from seeded random
/// arguments: Neumann mass int_0^pi N dxi - 1, Green values at the walls,
/// dG/dx + dN/dxi, and the Chapman-Kolmogorov composition of N.
struct IdentityReport {
  double mass = 0.0;
  double green_boundary = 0.0;
  double derivative_identity = 0.0;
  double chapman_kolmogorov = 0.0;
};

IdentityReport check_identities(int samples = 100, unsigned seed = 1);

}  // namespace plc::heat
