#include <doctest.h>

#include <cmath>
#include <random>

#include "plc/errors.hpp"
#include "plc/model.hpp"
#include "plc/sampler.hpp"

using namespace plc;

TEST_CASE("sampler derivatives agree with central differences") {
  Sampler s = Sampler::sine_series({{false, 1.5, 0.3}, {true, 2.0, -0.2}}, 0.1);
  Sampler p = Sampler::polynomial({1.0, -2.0, 0.5, 0.25});
  for (double x : {0.1, 1.0, 2.2, 3.0}) {
    const double h = 1e-6;
    CHECK(s.derivative(x) == doctest::Approx((s.value(x + h) - s.value(x - h)) / (2 * h)).epsilon(1e-7));
    CHECK(p.derivative(x) == doctest::Approx((p.value(x + h) - p.value(x - h)) / (2 * h)).epsilon(1e-7));
  }
  Sampler l = Sampler::piecewise_linear({{0.0, 0.0}, {1.0, 2.0}, {M_PI, 1.0}});
  CHECK(l.value(0.5) == doctest::Approx(1.0));
  CHECK(l.derivative(0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(Sampler::piecewise_linear({{0.0, 0.0}, {0.0, 1.0}, {M_PI, 1.0}}), Error);
}

TEST_CASE("material model rejects nonpositive constants") {
  CHECK_THROWS_AS(MaterialModel(0.0, 1.0), Error);
  CHECK_THROWS_AS(MaterialModel(1.0, -1.0), Error);
  CHECK_THROWS_AS(MaterialModel(NAN, 1.0), Error);
  try {
    MaterialModel(1.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidCoefficients);
  }
}

TEST_CASE("wave speed bounds and exact derivative bound") {
  MaterialModel m(1.0, 1.2);
  CHECK(m.c_lower() == doctest::Approx(1.0));
  CHECK(m.c_upper() == doctest::Approx(std::sqrt(1.2)));
  CHECK(m.c1() == doctest::Approx(0.095445115010332149).epsilon(1e-14));
  CHECK(m.c1() <= m.c1_coarse());
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) worst = std::max(worst, std::fabs(m.wave_speed(i * M_PI / 20000).cprime));
  CHECK(worst <= m.c1() * (1 + 1e-12));
  CHECK(worst >= m.c1() * (1 - 1e-6));
  const double h = 1e-6, th = 0.7;
  CHECK(m.wave_speed(th).cprime == doctest::Approx((m.speed(th + h) - m.speed(th - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("boundary energy integral") {
  ProblemSpec p;
  p.model = MaterialModel(1.0, 1.2);
  p.bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 2.0);
  CHECK(p.boundary_energy_left(0.5) == 0.0);
  CHECK(p.boundary_energy_right(0.5) == doctest::Approx(2.0 * 0.1279556677330991).epsilon(1e-13));
  p.model = MaterialModel(1.0, 1.0);
  CHECK(p.boundary_energy_right(0.3) == doctest::Approx(2.0 * 0.045).epsilon(1e-13));
}

TEST_CASE("riemann variables round trip and compression") {
  MaterialModel m(1.0, 1.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int s = 0; s < 200; ++s) {
    const double tt = u(rng), tx = u(rng), th = u(rng);
    auto [R, S] = riemann_from_fields(tt, tx, th, m);
    CHECK(R == doctest::Approx(tt + m.speed(th) * tx));
    CHECK(S == doctest::Approx(tt - m.speed(th) * tx));
    auto [a, b] = fields_from_riemann(R, S, th, m);
    CHECK(a == doctest::Approx(tt));
    CHECK(b == doctest::Approx(tx));
    const Decompressed d = decompress(compress(R));
    CHECK_FALSE(d.cusp);
    CHECK(d.value == doctest::Approx(R).epsilon(1e-10));
  }
  CHECK(decompress(M_PI).cusp);
  CHECK(std::fabs(decompress(-M_PI + 1e-9).value) == doctest::Approx(cusp_magnitude()));
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI / 2) == doctest::Approx(-M_PI / 2));
}

namespace {
ProblemSpec compatible(USide side) {
  ProblemSpec p;
  p.model = MaterialModel(1.0, 1.2);
  p.bc = BoundarySpec::dirichlet_robin(side, 1.0);
  p.data.theta0 = Sampler::sine_series({{true, 2, -0.05}}, 0.05);
  p.data.u0 = side == USide::Nonslip ? Sampler::sine_series({{false, 1, 0.1}})
                                     : Sampler::sine_series({{true, 1, 0.1}});
  return p;
}
}  // namespace

TEST_CASE("compatible data validate in both velocity regimes") {
  for (USide side : {USide::Nonslip, USide::StressFree}) {
    ValidatedProblem vp = validate(compatible(side));
    CHECK_FALSE(vp.extension);
    CHECK(vp.J0_table.size() == 1025);
    CHECK(vp.J0_table[0] == doctest::Approx(compatible(side).data.J0(0.0)));
  }
}

TEST_CASE("nonslip velocity must vanish at the walls") {
  ProblemSpec p = compatible(USide::Nonslip);
  p.data.u0 = Sampler::sine_series({{false, 1, 0.1}}, 0.2);
  try {
    validate(p);
    FAIL("expected CompatibilityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CompatibilityViolation);
  }
  CHECK_FALSE(check(p).empty());
}

TEST_CASE("strong anchoring requires theta0(0) = 0 and theta1(0) = 0") {
  ProblemSpec p = compatible(USide::Nonslip);
  p.data.theta1 = Sampler::constant(0.1);
  CHECK_THROWS_AS(validate(p), Error);
  p.data.theta1 = Sampler::zero();
  p.data.theta0 = Sampler::sine_series({{true, 1, 0.1}});
  CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("boundary combinations outside strong/weak anchoring are flagged as extensions") {
  ProblemSpec p = compatible(USide::Nonslip);
  p.bc.iota1 = 0.0;
  p.bc.iota2 = 1.0;  // Neumann on the left
  p.data.theta0 = Sampler::sine_series({{true, 2, -0.05}}, 0.05);
  ValidatedProblem vp = validate(p);
  CHECK(vp.extension);
}
