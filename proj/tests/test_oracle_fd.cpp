#include <doctest.h>

#include <cmath>

#include "plc/errors.hpp"
#include "plc/oracle_fd.hpp"

using namespace plc;

namespace {

ValidatedProblem modal() {
  ProblemSpec p;
  p.bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 0.0);
  p.data.theta0 = Sampler::sine_series({{false, 0.5, 1.0}});
  return validate(p);
}

}  // namespace

TEST_CASE("damped mode at n = 1024") {
  fd::FDOptions o;
  o.n = 1024;
  o.u_equation = false;
  PhysGrid g = fd::run(modal(), 1.0, o, 32, 8);
  CHECK(std::fabs(g.theta[g.index(g.nt, g.nx)] - 0.930294794098041) < 2e-3);
}

TEST_CASE("damped mode error is second order") {
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    fd::FDOptions o;
    o.n = n;
    o.u_equation = false;
    PhysGrid g = fd::run(modal(), 1.0, o, 16, 4);
    double err = 0.0;
    for (int k = 0; k <= g.nt; ++k)
      for (int i = 0; i <= g.nx; ++i) {
        const double r = std::sqrt(0.75), s1 = -1 + r, s2 = -1 - r, A = s2 / (s2 - s1), t = g.t(k);
        const double ref = std::sin(0.5 * g.x(i)) * (A * std::exp(s1 * t) + (1 - A) * std::exp(s2 * t));
        err = std::max(err, std::fabs(g.theta[g.index(k, i)] - ref));
      }
    if (prev > 0.0) CHECK(prev / err > 3.5);
    prev = err;
  }
}

TEST_CASE("coupled fields converge at second order under refinement") {
  ProblemSpec p;
  p.model = MaterialModel(1.0, 1.2);
  p.bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 1.0);
  p.data.theta0 = Sampler::sine_series({{true, 2, -0.05}}, 0.05);
  p.data.u0 = Sampler::sine_series({{false, 1, 0.1}});
  ValidatedProblem vp = validate(p);
  std::vector<PhysGrid> g;
  for (int n : {32, 64, 128, 256}) {
    fd::FDOptions o;
    o.n = n;
    g.push_back(fd::run(vp, 0.5, o, 16, 4));
  }
  auto diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
  };
  for (int f = 0; f < 2; ++f) {
    const double d1 = diff(f ? g[0].u : g[0].theta, f ? g[1].u : g[1].theta);
    const double d2 = diff(f ? g[1].u : g[1].theta, f ? g[2].u : g[2].theta);
    const double d3 = diff(f ? g[2].u : g[2].theta, f ? g[3].u : g[3].theta);
    CHECK(d1 / d2 > 3.0);
    CHECK(d2 / d3 > 3.0);
  }
  for (int k = 0; k <= g[3].nt; ++k) {
    CHECK(std::fabs(g[3].u[g[3].index(k, 0)]) < 1e-15);
    CHECK(std::fabs(g[3].u[g[3].index(k, g[3].nx)]) < 1e-15);
  }
}

TEST_CASE("step above the CFL bound is rejected") {
  fd::FDOptions o;
  o.n = 64;
  o.dt = 2.0 * fd::cfl_limit(MaterialModel(), M_PI / 64);
  try {
    fd::run(modal(), 0.5, o, 16, 4);
    FAIL("expected CFLViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CFLViolation);
  }
}

TEST_CASE("output resolution must divide the solver resolution") {
  fd::FDOptions o;
  o.n = 100;
  CHECK_THROWS_AS(fd::run(modal(), 0.1, o, 16, 2), Error);
}

TEST_CASE("robin walls hold theta_x = -iota theta") {
  ProblemSpec p;
  p.model = MaterialModel(1.0, 1.2);
  p.bc = BoundarySpec::dirichlet_robin(USide::StressFree, 2.0);
  p.data.theta0 = Sampler::sine_series({{true, 2, -0.05}}, 0.05);
  p.data.u0 = Sampler::sine_series({{true, 1, 0.1}});
  fd::FDOptions o;
  o.n = 128;
  PhysGrid g = fd::run(validate(p), 0.3, o, 32, 6);
  for (int k = 0; k <= g.nt; ++k) {
    const std::size_t id = g.index(k, g.nx);
    CHECK(std::fabs(g.theta_x[id] + 2.0 * g.theta[id]) < 1e-12);
    CHECK(std::fabs(g.theta[g.index(k, 0)]) < 1e-15);
  }
}
