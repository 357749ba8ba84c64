#pragma once

#include <functional>
#include <vector>

namespace plc {

struct GaussRule {
  std::vector<double> nodes;    ///< on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n); cached per n.
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] with `panels` equal panels of an n-point rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int panels = 1,
                       int n = 16);

/// Composite Simpson over uniform samples f[0..m] with spacing h. For an odd
/// number of intervals the last three intervals use the 3/8 rule.
double simpson(const std::vector<double>& f, double h);
double simpson(const double* f, int m, double h);

/// Composite trapezoid over uniform samples.
double trapezoid(const double* f, int m, double h);

}  // namespace plc
