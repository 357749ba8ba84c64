#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plc/config.hpp"
#include "plc/errors.hpp"
#include "plc/output.hpp"
#include "plc/pipeline.hpp"

using namespace plc;
using nlohmann::json;

namespace {

ErrorCode code_of(const json& j) {
  try {
    cfg::parse(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("default configuration is valid and round-trips") {
  cfg::RunConfig c = cfg::default_config();
  CHECK(c.mode == coupling::Mode::Coupled);
  json j = cfg::to_json(c);
  cfg::RunConfig d = cfg::parse(j);
  CHECK(cfg::to_json(d) == j);
  CHECK_NOTHROW(validate(d.problem));
}

TEST_CASE("malformed configurations name the offending key") {
  CHECK(code_of(json::array()) == ErrorCode::ConfigError);
  CHECK(code_of({{"T", -1.0}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"mode", "spectral"}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"grids", {{"K", 7}}}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"grids", {{"nx", 16}, {"fd_n", 40}}}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"data", {{"preset", "unknown"}}}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"data", {{"alpha", 0.25}}}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"model", {{"K1", 0.0}}}}) == ErrorCode::InvalidCoefficients);
  try {
    cfg::parse({{"grids", {{"nx", "sixty"}}}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("grids.nx") != std::string::npos);
  }
}

TEST_CASE("sampler forms") {
  CHECK(cfg::parse_sampler(2.5, "x").value(1.0) == doctest::Approx(2.5));
  CHECK(cfg::parse_sampler(nullptr, "x").value(1.0) == 0.0);
  Sampler s = cfg::parse_sampler({{"sine", {{{"k", 2}, {"a", 0.5}}}}, {"offset", 1.0}}, "x");
  CHECK(s.value(0.3) == doctest::Approx(1.0 + 0.5 * std::sin(0.6)));
  Sampler p = cfg::parse_sampler({{"poly", {1.0, 0.0, 2.0}}}, "x");
  CHECK(p.value(2.0) == doctest::Approx(9.0));
  Sampler l = cfg::parse_sampler({{"pwl", {{0.0, 0.0}, {M_PI, 1.0}}}}, "x");
  CHECK(l.value(M_PI / 2) == doctest::Approx(0.5));
  for (const Sampler& x : {s, p, l}) CHECK(cfg::sampler_json(cfg::parse_sampler(cfg::sampler_json(x), "x")) == cfg::sampler_json(x));
  CHECK_THROWS_AS(cfg::parse_sampler("sin", "x"), Error);
  CHECK_THROWS_AS(cfg::parse_sampler({{"pwl", {{0.0}}}}, "x"), Error);
}

TEST_CASE("presets respect the velocity walls") {
  for (const char* side : {"nonslip", "stress-free"})
    for (const char* preset : {"zero", "smooth-compatible", "modal", "heat", "cusp"}) {
      json j = {{"boundary", {{"u", side}, {"iota", 0.0}}}, {"data", {{"preset", preset}}}};
      cfg::RunConfig c = cfg::parse(j);
      CAPTURE(preset);
      CHECK_NOTHROW(validate(c.problem));
    }
}

TEST_CASE("dotted paths create nested objects") {
  json j = {{"boundary", {{"u", "nonslip"}}}};
  cfg::set_path(j, "boundary.iota", 5.0);
  cfg::set_path(j, "grids.nx", 32);
  CHECK(j["boundary"]["iota"] == 5.0);
  CHECK(j["boundary"]["u"] == "nonslip");
  CHECK(j["grids"]["nx"] == 32);
  CHECK_THROWS_AS(cfg::set_path(j, "", 1), Error);
}

TEST_CASE("seventeen significant digits") {
  CHECK(out::fmt(0.1) == "0.10000000000000001");
  CHECK(std::stod(out::fmt(M_PI)) == M_PI);
}

TEST_CASE("zero data simulate to zero fields and pass") {
  json j = {{"data", {{"preset", "zero"}}}, {"grids", {{"K", 64}, {"nx", 8}}}, {"T", 0.2}};
  pipeline::RunResult r = pipeline::run(cfg::parse(j));
  CHECK(r.pass());
  CHECK(r.summary["pass"] == true);
  const PhysGrid& g = r.bundle.grid;
  for (const auto* f : {&g.theta, &g.theta_t, &g.theta_x, &g.u, &g.J})
    for (double v : *f) CHECK(v == 0.0);
}

TEST_CASE("damped-mode closed form is offered only where it applies") {
  cfg::RunConfig c = cfg::parse({{"data", {{"preset", "modal"}}}, {"boundary", {{"iota", 0.0}}}});
  CHECK(pipeline::closed_form(c.problem, coupling::Mode::WaveOnly).has_value());
  CHECK_FALSE(pipeline::closed_form(c.problem, coupling::Mode::Coupled).has_value());
  auto ref = pipeline::closed_form(c.problem, coupling::Mode::WaveOnly);
  CHECK(ref->f(M_PI, 1.0) == doctest::Approx(0.930294794098041).epsilon(1e-12));
  c.problem.bc.iota3 = 1.0;  // Robin with iota != 0: sin(x/2) is no longer a mode
  CHECK_FALSE(pipeline::closed_form(c.problem, coupling::Mode::WaveOnly).has_value());
}

TEST_CASE("artifacts are written and reproducible") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "plc_test_artifacts";
  fs::remove_all(root);
  json j = {{"data", {{"preset", "smooth-compatible"}}},
            {"boundary", {{"iota", 1.0}}},
            {"grids", {{"K", 128}, {"nx", 8}}},
            {"T", 0.2}};
  for (const char* sub : {"a", "b"}) {
    cfg::RunConfig c = cfg::parse(j);
    pipeline::write_artifacts(pipeline::run(c), (root / sub).string());
  }
  for (const char* f : {"fields.csv", "energy.csv", "summary.json", "plots/theta_snapshots.svg", "plots/energy.svg",
                        "plots/J_heatline.svg"}) {
    CAPTURE(f);
    const std::string a = slurp((root / "a" / f).string());
    CHECK_FALSE(a.empty());
    CHECK(a == slurp((root / "b" / f).string()));
  }
  CHECK(slurp((root / "a" / "fields.csv").string()).rfind("t,x,theta,theta_t,theta_x,u,J\n", 0) == 0);
  CHECK(slurp((root / "a" / "energy.csv").string()).rfind("t,E,B0,Bpi,D,residual\n", 0) == 0);
  fs::remove_all(root);
}

TEST_CASE("sweep records each combination and tolerates failures") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "plc_test_sweep";
  fs::remove_all(root);
  json j = {{"data", {{"preset", "smooth-compatible"}}},
            {"grids", {{"K", 64}, {"nx", 8}}},
            {"T", 0.1},
            {"sweep", {{"boundary.iota", {0.0, 1.0}}, {"model.K3", {1.2, -1.0}}}}};
  CHECK(pipeline::sweep(cfg::parse(j), root.string()) == 2);
  std::istringstream in(slurp((root / "index.csv").string()));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("run,boundary.iota,model.K3,dir,status", 0) == 0);
  int rows = 0, bad = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("InvalidCoefficients") != std::string::npos) ++bad;
  }
  CHECK(rows == 4);
  CHECK(bad == 2);
  CHECK(fs::exists(root / "run_000" / "summary.json"));
  fs::remove_all(root);
}

TEST_CASE("exit codes separate input errors from solver errors") {
  CHECK(pipeline::exit_code(ErrorCode::CompatibilityViolation) == 2);
  CHECK(pipeline::exit_code(ErrorCode::ConfigError) == 2);
  CHECK(pipeline::exit_code(ErrorCode::CFLViolation) == 3);
  CHECK(pipeline::exit_code(ErrorCode::WindowCollapsed) == 3);
}
