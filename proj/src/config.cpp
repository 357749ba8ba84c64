#include "plc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "plc/errors.hpp"

namespace plc::cfg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "cli", where + ": " + what);
}

double num(const json& j, const std::string& key, double def, const std::string& where) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, int def, const std::string& where) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::string str(const json& j, const std::string& key, const std::string& def, const std::string& where) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

const json& object(const json& j, const std::string& key, const std::string& where) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  const json& v = j.at(key);
  if (!v.is_object()) fail(where + "." + key, "expected an object");
  return v;
}

Sampler sine(std::vector<Sampler::Term> terms, double offset = 0.0) {
  return Sampler::sine_series(std::move(terms), offset);
}

// a sin^8 x as a cosine series; concentrated around x = pi / 2.
Sampler sin8(double a) {
  return sine({{true, 2, -56 * a / 128}, {true, 4, 28 * a / 128}, {true, 6, -8 * a / 128}, {true, 8, a / 128}},
              35 * a / 128);
}

// c0 d/dx (a sin^8 x): makes R = theta_t + c theta_x the dominant family.
Sampler sin8_push(double a, double c0) {
  const Sampler bump = sin8(a);
  std::vector<Sampler::Term> t;
  for (const auto& term : bump.terms()) t.push_back({false, term.k, -c0 * term.k * term.amplitude});
  return sine(std::move(t));
}

void apply_preset(const std::string& name, const json& p, ProblemSpec& spec) {
  const bool sf = spec.bc.u_side == USide::StressFree;
  InitialData& d = spec.data;
  const double a = num(p, "amplitude", name == "cusp" ? 1.5 : 0.1, "data");
  if (name == "zero") {
    d.theta0 = d.theta1 = d.u0 = Sampler::zero();
  } else if (name == "smooth") {
    d.theta0 = sine({{false, 1, a}});
    d.theta1 = Sampler::zero();
    d.u0 = sf ? sine({{true, 1, a}}) : sine({{false, 1, a}});
  } else if (name == "smooth-compatible") {
    d.theta0 = sine({{true, 2, -0.5 * a}}, 0.5 * a);  // a sin^2 x
    d.theta1 = Sampler::zero();
    d.u0 = sf ? sine({{true, 1, a}}) : sine({{false, 1, a}});
  } else if (name == "modal") {
    d.theta0 = sine({{false, 0.5, num(p, "amplitude", 1.0, "data")}});
    d.theta1 = d.u0 = Sampler::zero();
  } else if (name == "heat") {
    d.theta0 = d.theta1 = Sampler::zero();
    const double b = num(p, "amplitude", 1.0, "data");
    d.u0 = sf ? sine({{true, 1, b}}) : sine({{false, 1, b}});
  } else if (name == "cusp") {
    // A bump pushed towards x = 0 along one characteristic family. Where
    // K3 != K1 the backward variable steepens and reaches w = pi in finite
    // time, away from the weak-anchoring wall.
    d.theta0 = sin8(a);
    d.theta1 = sin8_push(a, spec.model.speed(0.5 * a));
    d.u0 = Sampler::zero();
  } else {
    fail("data.preset", "unknown preset '" + name + "'");
  }
}

}  // namespace

const char* mode_name(coupling::Mode m) {
  switch (m) {
    case coupling::Mode::Coupled: return "coupled";
    case coupling::Mode::WaveOnly: return "wave-only";
    case coupling::Mode::FdOnly: return "fd-only";
  }
  return "coupled";
}

coupling::Mode parse_mode(const std::string& s) {
  if (s == "coupled") return coupling::Mode::Coupled;
  if (s == "wave-only") return coupling::Mode::WaveOnly;
  if (s == "fd-only") return coupling::Mode::FdOnly;
  fail("mode", "expected coupled, wave-only or fd-only, got '" + s + "'");
}

Sampler parse_sampler(const json& j, const std::string& where) {
  if (j.is_null()) return Sampler::zero();
  if (j.is_number()) return Sampler::constant(j.get<double>());
  if (!j.is_object()) fail(where, "expected a number or an object");
  try {
    if (j.contains("sine")) {
      std::vector<Sampler::Term> terms;
      for (const json& t : j.at("sine")) {
        Sampler::Term term;
        term.k = num(t, "k", 1.0, where);
        term.amplitude = num(t, "a", 0.0, where);
        term.cosine = t.value("cos", false);
        terms.push_back(term);
      }
      return Sampler::sine_series(std::move(terms), num(j, "offset", 0.0, where));
    }
    if (j.contains("poly")) return Sampler::polynomial(j.at("poly").get<std::vector<double>>());
    if (j.contains("pwl")) {
      std::vector<std::pair<double, double>> pts;
      for (const json& p : j.at("pwl")) {
        if (!p.is_array() || p.size() != 2) fail(where, "pwl entries are [x, y] pairs");
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      return Sampler::piecewise_linear(std::move(pts));
    }
    if (j.value("zero", false)) return Sampler::zero();
  } catch (const json::exception& e) {
    fail(where, e.what());
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where, "expected one of sine, poly, pwl, zero");
}

json sampler_json(const Sampler& s) {
  switch (s.kind()) {
    case Sampler::Kind::SineSeries: {
      json terms = json::array();
      for (const auto& t : s.terms()) terms.push_back({{"k", t.k}, {"a", t.amplitude}, {"cos", t.cosine}});
      return {{"sine", terms}, {"offset", s.offset()}};
    }
    case Sampler::Kind::Polynomial: return {{"poly", s.coeffs()}};
    case Sampler::Kind::PiecewiseLinear: {
      json pts = json::array();
      for (const auto& [x, y] : s.points()) pts.push_back({x, y});
      return {{"pwl", pts}};
    }
  }
  return nullptr;
}

void set_path(json& j, const std::string& path, const json& value) {
  json* cur = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) fail("sweep", "empty parameter path");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur->contains(parts[i]) || !(*cur)[parts[i]].is_object()) (*cur)[parts[i]] = json::object();
    cur = &(*cur)[parts[i]];
  }
  (*cur)[parts.back()] = value;
}

RunConfig parse(const json& j) {
  if (!j.is_object()) fail("config", "top level must be an object");
  RunConfig c;
  c.source = j;
  c.label = str(j, "label", c.label, "config");
  c.mode = parse_mode(str(j, "mode", "coupled", "config"));
  c.T = num(j, "T", c.T, "config");
  if (!(c.T > 0.0) || !std::isfinite(c.T)) fail("T", "horizon must be positive");

  const json& m = object(j, "model", "config");
  c.problem.model = MaterialModel(num(m, "K1", 1.0, "model"), num(m, "K3", 1.0, "model"));

  const json& b = object(j, "boundary", "config");
  const std::string side = str(b, "u", "nonslip", "boundary");
  USide us;
  if (side == "nonslip")
    us = USide::Nonslip;
  else if (side == "stress-free")
    us = USide::StressFree;
  else
    fail("boundary.u", "expected nonslip or stress-free");
  if (b.contains("iota1") || b.contains("iota2") || b.contains("iota3") || b.contains("iota4")) {
    BoundarySpec bc;
    bc.u_side = us;
    bc.iota1 = num(b, "iota1", 1.0, "boundary");
    bc.iota2 = num(b, "iota2", 0.0, "boundary");
    bc.iota3 = num(b, "iota3", 0.0, "boundary");
    bc.iota4 = num(b, "iota4", 1.0, "boundary");
    c.problem.bc = bc;
  } else {
    c.problem.bc = BoundarySpec::dirichlet_robin(us, num(b, "iota", 0.0, "boundary"));
  }

  const json& d = object(j, "data", "config");
  c.preset = str(d, "preset", "", "data");
  if (!c.preset.empty()) apply_preset(c.preset, d, c.problem);
  if (d.contains("theta0")) c.problem.data.theta0 = parse_sampler(d.at("theta0"), "data.theta0");
  if (d.contains("theta1")) c.problem.data.theta1 = parse_sampler(d.at("theta1"), "data.theta1");
  if (d.contains("u0")) c.problem.data.u0 = parse_sampler(d.at("u0"), "data.u0");
  c.problem.data.alpha = num(d, "alpha", c.problem.data.alpha, "data");
  if (!(c.problem.data.alpha > 0.0 && c.problem.data.alpha < 0.25)) fail("data.alpha", "must lie in (0, 1/4)");

  const json& g = object(j, "grids", "config");
  c.grids.K = integer(g, "K", c.grids.K, "grids");
  c.grids.h_char = num(g, "h_char", 0.0, "grids");
  c.grids.nx = integer(g, "nx", c.grids.nx, "grids");
  c.grids.nt = integer(g, "nt", c.grids.nt, "grids");
  c.grids.fd_n = integer(g, "fd_n", c.grids.fd_n, "grids");
  c.grids.dt_fd = num(g, "dt_fd", 0.0, "grids");
  c.grids.sweeps = integer(g, "sweeps", c.grids.sweeps, "grids");
  c.grids.gauss = integer(g, "gauss", c.grids.gauss, "grids");
  if (c.grids.K < 4 || c.grids.K % 2 || c.grids.nx < 2 || c.grids.nt < 0 || c.grids.fd_n < 0 ||
      c.grids.dt_fd < 0 || c.grids.h_char < 0 || c.grids.sweeps < 0)
    fail("grids", "grid parameters must be positive (K even, nx >= 2)");
  if (c.grids.fd_n && c.grids.fd_n % c.grids.nx)
    fail("grids.fd_n", "must be a multiple of nx");

  const json& f = object(j, "fixed_point", "config");
  c.fixed_point.delta = num(f, "delta", c.fixed_point.delta, "fixed_point");
  c.fixed_point.tol = num(f, "tol", c.fixed_point.tol, "fixed_point");
  c.fixed_point.max_iter = integer(f, "max_iter", c.fixed_point.max_iter, "fixed_point");
  c.fixed_point.max_halvings = integer(f, "max_halvings", c.fixed_point.max_halvings, "fixed_point");
  c.fixed_point.K_guard = num(f, "K_guard", c.fixed_point.K_guard, "fixed_point");
  if (!(c.fixed_point.delta > 0) || !(c.fixed_point.tol > 0) || c.fixed_point.max_iter < 1)
    fail("fixed_point", "delta and tol must be positive, max_iter >= 1");

  const json& s = object(j, "slack", "config");
  c.slack.rel = num(s, "rel", c.slack.rel, "slack");
  c.slack.abs = num(s, "abs", c.slack.abs, "slack");

  const json& k = object(j, "checks", "config");
  c.checks.reconcile_C = num(k, "reconcile_C", c.checks.reconcile_C, "checks");
  c.checks.weak_C = num(k, "weak_C", c.checks.weak_C, "checks");
  c.checks.boundary_C = num(k, "boundary_C", c.checks.boundary_C, "checks");
  c.checks.weak_m = integer(k, "weak_m", c.checks.weak_m, "checks");
  c.checks.oracle_tol = num(k, "oracle_tol", c.checks.oracle_tol, "checks");
  c.checks.modal_tol = num(k, "modal_tol", c.checks.modal_tol, "checks");
  c.checks.pq_floor = num(k, "pq_floor", c.checks.pq_floor, "checks");

  const json& o = object(j, "output", "config");
  c.out_dir = str(o, "dir", c.out_dir, "output");
  c.check_level = str(j, "check_level", c.check_level, "config");
  if (c.check_level != "fast" && c.check_level != "full") fail("check_level", "expected fast or full");
  if (j.contains("sweep")) {
    if (!j.at("sweep").is_object()) fail("sweep", "expected an object of path -> array");
    for (const auto& [key, val] : j.at("sweep").items())
      if (!val.is_array() || val.empty()) fail("sweep." + key, "expected a non-empty array");
    c.sweep = j.at("sweep");
  }
  return c;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cli", "cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "cli", path + ": " + e.what());
  }
  return parse(j);
}

RunConfig default_config() {
  json j = {{"label", "default"},
            {"mode", "coupled"},
            {"T", 0.5},
            {"model", {{"K1", 1.0}, {"K3", 1.2}}},
            {"boundary", {{"u", "nonslip"}, {"iota", 1.0}}},
            {"data", {{"preset", "smooth-compatible"}}},
            {"grids", {{"K", 1024}, {"nx", 64}}}};
  return parse(j);
}

json to_json(const RunConfig& c) {
  const BoundarySpec& bc = c.problem.bc;
  json j;
  j["label"] = c.label;
  j["mode"] = mode_name(c.mode);
  j["T"] = c.T;
  j["model"] = {{"K1", c.problem.model.k1()}, {"K3", c.problem.model.k3()}};
  j["boundary"] = {{"u", bc.u_side == USide::Nonslip ? "nonslip" : "stress-free"},
                   {"iota1", bc.iota1},
                   {"iota2", bc.iota2},
                   {"iota3", bc.iota3},
                   {"iota4", bc.iota4}};
  j["data"] = {{"theta0", sampler_json(c.problem.data.theta0)},
               {"theta1", sampler_json(c.problem.data.theta1)},
               {"u0", sampler_json(c.problem.data.u0)},
               {"alpha", c.problem.data.alpha}};
  if (!c.preset.empty()) j["data"]["preset"] = c.preset;
  j["grids"] = {{"K", c.grids.K},       {"h_char", c.grids.h_char}, {"nx", c.grids.nx},
                {"nt", c.grids.nt},     {"fd_n", c.grids.fd_n},     {"dt_fd", c.grids.dt_fd},
                {"sweeps", c.grids.sweeps}, {"gauss", c.grids.gauss}};
  j["fixed_point"] = {{"delta", c.fixed_point.delta},
                      {"tol", c.fixed_point.tol},
                      {"max_iter", c.fixed_point.max_iter},
                      {"max_halvings", c.fixed_point.max_halvings},
                      {"K_guard", c.fixed_point.K_guard}};
  j["slack"] = {{"rel", c.slack.rel}, {"abs", c.slack.abs}};
  j["checks"] = {{"reconcile_C", c.checks.reconcile_C}, {"weak_C", c.checks.weak_C},
                 {"boundary_C", c.checks.boundary_C},   {"weak_m", c.checks.weak_m},
                 {"oracle_tol", c.checks.oracle_tol},   {"modal_tol", c.checks.modal_tol},
                 {"pq_floor", c.checks.pq_floor}};
  j["check_level"] = c.check_level;
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

}  // namespace plc::cfg
