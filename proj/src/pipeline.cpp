#include "plc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "plc/charwave.hpp"
#include "plc/errors.hpp"
#include "plc/heatkernel.hpp"
#include "plc/oracle_fd.hpp"
#include "plc/output.hpp"
#include "plc/parallel.hpp"

namespace plc::pipeline {

using nlohmann::json;

namespace {

Check upper(const std::string& name, double value, double bound) {
  return {name, value, bound, false, std::isfinite(value) && value <= bound};
}

Check lower(const std::string& name, double value, double bound) {
  return {name, value, bound, true, std::isfinite(value) && value > bound};
}

bool is_zero(const Sampler& s) {
  if (s.kind() == Sampler::Kind::Polynomial) {
    for (double c : s.coeffs())
      if (c != 0.0) return false;
    return true;
  }
  if (s.kind() == Sampler::Kind::SineSeries) {
    if (s.offset() != 0.0) return false;
    for (const auto& t : s.terms())
      if (t.amplitude != 0.0) return false;
    return true;
  }
  for (const auto& p : s.points())
    if (p.second != 0.0) return false;
  return true;
}

bool integer_valued(double k) { return std::fabs(k - std::round(k)) < 1e-12; }

// Time factor of a damped mode: T'' + 2 T' + w2 T = 0, T(0) = 1, T'(0) = 0.
double damped_mode(double w2, double t) {
  const double disc = 1.0 - w2;
  if (disc > 1e-14) {
    const double r = std::sqrt(disc), s1 = -1 + r, s2 = -1 - r;
    const double A = s2 / (s2 - s1);
    return A * std::exp(s1 * t) + (1 - A) * std::exp(s2 * t);
  }
  if (disc < -1e-14) {
    const double om = std::sqrt(-disc);
    return std::exp(-t) * (std::cos(om * t) + std::sin(om * t) / om);
  }
  return (1 + t) * std::exp(-t);
}

double reflection_residual(const ProblemSpec& spec, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uw(-3.0, 3.0), up(0.5, 2.0), uth(-1.0, 1.0);
  const MaterialModel& m = spec.model;
  const double iota = spec.bc.right_dirichlet() ? 1.0 : spec.bc.iota_right();
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const double w = uw(rng), p = up(rng), th = uth(rng);
    // Strong anchoring at x = 0 forces theta_t = 0 there.
    auto [z, q] = charwave::apply_boundary_L0(w, p);
    auto f0 = fields_from_riemann(std::tan(0.5 * w), std::tan(0.5 * z), 0.0, m);
    worst = std::max({worst, std::fabs(f0.first), std::fabs(q - p)});
    // Weak anchoring at x = pi: theta_x = -iota theta.
    auto [w2, p2] = charwave::apply_boundary_Lpi(w, p, th, iota, m);
    const double R = std::tan(0.5 * w2), S = std::tan(0.5 * w);
    auto f1 = fields_from_riemann(R, S, th, m);
    const double scale = 1.0 + std::fabs(R) + std::fabs(S);
    worst = std::max(worst, std::fabs(f1.second + iota * th) / scale);
    if (!(p2 > 0.0)) worst = HUGE_VAL;
  }
  return worst;
}

}  // namespace

bool RunResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

int exit_code(ErrorCode code) { return is_validation_error(code) ? 2 : 3; }

std::optional<Reference> closed_form(const ProblemSpec& spec, coupling::Mode mode) {
  const InitialData& d = spec.data;
  const BoundarySpec& bc = spec.bc;
  const MaterialModel& m = spec.model;
  if (mode == coupling::Mode::WaveOnly) {
    if (m.k1() != m.k3() || !is_zero(d.theta1) || !bc.left_dirichlet()) return std::nullopt;
    if (!bc.right_dirichlet() && bc.iota_right() != 0.0) return std::nullopt;
    if (d.theta0.kind() != Sampler::Kind::SineSeries || d.theta0.offset() != 0.0) return std::nullopt;
    for (const auto& t : d.theta0.terms()) {
      if (t.cosine) return std::nullopt;
      const double shift = bc.right_dirichlet() ? 0.0 : 0.5;
      if (!integer_valued(t.k - shift)) return std::nullopt;
    }
    const double c2 = m.k1();
    std::vector<Sampler::Term> terms = d.theta0.terms();
    return Reference{"theta", [terms, c2](double x, double t) {
                       double v = 0.0;
                       for (const auto& tm : terms) v += tm.amplitude * std::sin(tm.k * x) * damped_mode(c2 * tm.k * tm.k, t);
                       return v;
                     }};
  }
  return std::nullopt;
}

RunResult run(const cfg::RunConfig& config) {
  RunResult r;
  r.config = config;
  ValidatedProblem vp = validate(config.problem);
  const cfg::GridSpec& gs = config.grids;
  coupling::GridConfig gc;
  gc.K = gs.K;
  gc.nx = gs.nx;
  gc.nt = gs.nt;
  gc.sweeps = gs.sweeps;
  gc.gauss = gs.gauss;
  if (gs.h_char > 0.0) {
    const double xt = charwave::Gamma0Curve::build(vp.spec.data, vp.spec.model).xtil();
    gc.K = std::max(4, 2 * static_cast<int>(std::lround(xt / gs.h_char / 2.0)));
  }
  const int nt = gc.nt > 0 ? gc.nt : coupling::default_nt(gc.nx, config.T);
  fd::FDOptions fo;
  fo.n = gs.fd_n > 0 ? gs.fd_n : 4 * gs.nx;
  fo.dt = gs.dt_fd;
  fo.u_equation = config.mode != coupling::Mode::WaveOnly;

  coupling::SolutionBundle& b = r.bundle;
  if (config.mode == coupling::Mode::FdOnly) {
    b.mode = coupling::Mode::FdOnly;
    b.problem = vp;
    b.grid = fd::run(vp, config.T, fo, gc.nx, nt);
  } else {
    gc.nt = nt;
    b = coupling::extend_to_horizon(vp, config.fixed_point, gc, config.T, config.mode);
  }
  const PhysGrid& g = b.grid;
  const bool full = config.check_level == "full";
  const cfg::CheckSpec& cs = config.checks;

  r.energy = diag::dissipation_report(b, config.slack);
  std::vector<Check>& ch = r.checks;
  ch.push_back(upper("energy_inequality", r.energy.max_residual, r.energy.slack));

  json s;
  s["label"] = config.label;
  s["mode"] = cfg::mode_name(config.mode);
  s["T"] = config.T;
  s["config"] = cfg::to_json(config);
  s["config"].erase("output");  // artifacts must not depend on where they are written
  s["grid"] = {{"nx", g.nx}, {"nt", g.nt}, {"dx", g.dx}, {"dt", g.dt}};
  s["extension"] = vp.extension;
  json warnings = json::array();
  for (const auto& w : vp.warnings)
    warnings.push_back({{"endpoint", w.endpoint}, {"identity", w.identity}, {"residual", w.residual}});
  s["warnings"] = warnings;

  if (b.mode == coupling::Mode::Coupled) {
    double worst = 0.0;
    int iters = 0;
    json wins = json::array();
    for (const auto& w : b.windows) {
      worst = std::max(worst, w.residual);
      iters += w.iterations;
      wins.push_back({{"t0", w.t0}, {"t1", w.t1}, {"iterations", w.iterations}, {"halvings", w.halvings},
                      {"residual", w.residual}});
    }
    s["windows"] = wins;
    s["iterations_total"] = iters;
    s["fixed_point_residual"] = b.fixed_point_residual;
    s["seam_jump_theta"] = b.seam_jump_theta;
    s["seam_jump_J"] = b.seam_jump_J;
    ch.push_back(upper("fixed_point_residual", worst, config.fixed_point.tol));
    ch.push_back(upper("seam_continuity", std::max(b.seam_jump_theta, b.seam_jump_J),
                       10.0 * config.fixed_point.tol));
  }
  if (b.has_char()) {
    const charwave::CharGrid& cg = *b.char_grid;
    diag::CharMetrics cm = diag::char_consistency(cg, config.T);
    s["char"] = {{"K", cg.K},
                 {"h", cg.h},
                 {"p_min", cm.min_p},
                 {"p_max", cm.max_p},
                 {"q_min", cm.min_q},
                 {"q_max", cm.max_q},
                 {"cusp_nodes", cm.cusp_nodes},
                 {"cusp_cells", cm.degenerate_cells},
                 {"hit_cells", cm.hit_cells},
                 {"degenerate_reach", cm.degenerate_reach},
                 {"mismatch_x", cm.mismatch_x},
                 {"mismatch_t", cm.mismatch_t},
                 {"max_tile", cg.max_tile},
                 {"theta_x_max", cm.theta_x_max}};
    ch.push_back(lower("pq_positive", std::min(cm.min_p, cm.min_q), cs.pq_floor));
    ch.push_back(upper("cusp_tag_consistency", cm.degenerate_mismatch, 0.0));
  }
  coupling::ReconcileReport rec = coupling::reconcile_J(b);
  s["reconcile"] = {{"l2", rec.l2}, {"sup", rec.sup}, {"excluded", rec.excluded}};
  ch.push_back(upper("reconcile_J", rec.l2, cs.reconcile_C * g.dx));
  diag::BoundaryTraces bt = diag::boundary_traces(b);
  s["boundary_traces"] = {{"theta_left", bt.theta_left},
                          {"theta_right", bt.theta_right},
                          {"u_left", bt.u_left},
                          {"u_right", bt.u_right}};
  ch.push_back(upper("boundary_traces", bt.max(), cs.boundary_C * g.dx));

  if (auto ref = closed_form(vp.spec, b.mode)) {
    const std::vector<double>& f = ref->field == "theta" ? g.theta : g.u;
    double e = 0.0;
    for (int k = 0; k <= g.nt; ++k)
      for (int i = 0; i <= g.nx; ++i) e = std::max(e, std::fabs(f[g.index(k, i)] - ref->f(g.x(i), g.t(k))));
    s["reference_field"] = ref->field;
    s["reference_error"] = e;
    ch.push_back(upper("closed_form_reference", e, cs.modal_tol));
  }

  double thx = 0.0;
  for (std::size_t id = 0; id < g.size(); ++id)
    if (!g.cusp[id]) thx = std::max(thx, std::fabs(g.theta_x[id]));
  s["theta_x_max"] = thx;
  // Resolved gradient: bounded for smooth theta, ~ dx^{-1/2} at a cusp and
  // ~ 1 / dx at a jump.
  double dq = 0.0;
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i < g.nx; ++i)
      dq = std::max(dq, std::fabs(g.theta[g.index(k, i + 1)] - g.theta[g.index(k, i)]) / g.dx);
  s["theta_dq_max"] = dq;
  s["theta_pi_T"] = g.theta[g.index(g.nt, g.nx)];
  s["E0"] = r.energy.E[0];
  s["E_T"] = r.energy.E.back();
  s["Bpi_T"] = r.energy.Bpi.back();
  s["energy_residual_max"] = r.energy.max_residual;
  s["energy_slack"] = r.energy.slack;
  s["energy_flagged_rows"] = r.energy.flagged.size();

  if (full) {
    heat::IdentityReport ir = heat::check_identities();
    s["kernel"] = {{"mass", ir.mass},
                   {"green_boundary", ir.green_boundary},
                   {"derivative_identity", ir.derivative_identity},
                   {"chapman_kolmogorov", ir.chapman_kolmogorov}};
    ch.push_back(upper("kernel_mass", ir.mass, 1e-8));
    ch.push_back(upper("kernel_green_boundary", ir.green_boundary, 1e-10));
    ch.push_back(upper("kernel_derivative_identity", ir.derivative_identity, 1e-8));
    ch.push_back(upper("kernel_chapman_kolmogorov", ir.chapman_kolmogorov, 1e-6));
    if (vp.spec.bc.proved_case()) {
      const double refl = reflection_residual(vp.spec, 7);
      s["reflection_residual"] = refl;
      ch.push_back(upper("reflection_laws", refl, 1e-10));
    }
    diag::WeakResidual wr = diag::weak_residual(b, cs.weak_m);
    s["weak_residual"] = {{"r_u", wr.r_u}, {"r_theta", wr.r_theta}};
    ch.push_back(upper("weak_residual", std::max(wr.r_u, wr.r_theta), cs.weak_C * g.dx));
    s["holder_quotient"] = diag::holder_quotient(g, g.theta);
    s["initial_trace_l1"] = diag::initial_trace_l1(b);
    const bool classical = !b.has_char() || b.char_grid->cusp_nodes == 0;
    if (b.mode != coupling::Mode::FdOnly && classical) {
      PhysGrid o = fd::run(vp, config.T, fo, g.nx, g.nt);
      double e = 0.0;
      for (std::size_t id = 0; id < g.size(); ++id) e = std::max(e, std::fabs(o.theta[id] - g.theta[id]));
      s["oracle_sup_theta"] = e;
      s["oracle_n"] = fo.n;
      ch.push_back(upper("oracle_cross_check", e, cs.oracle_tol));
    }
  }

  json checks = json::array();
  for (const auto& c : ch)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound},
                      {"relation", c.lower ? ">" : "<="}, {"pass", c.pass}});
  s["checks"] = checks;
  s["pass"] = r.pass();
  r.summary = s;
  return r;
}

void write_artifacts(const RunResult& r, const std::string& dir) {
  out::ensure_dir(dir + "/plots");
  const PhysGrid& g = r.bundle.grid;
  out::write_fields_csv(dir + "/fields.csv", g);
  out::write_energy_csv(dir + "/energy.csv", r.energy);
  out::write_json(dir + "/summary.json", r.summary);

  std::vector<out::Series> snaps;
  for (int s = 0; s <= 4; ++s) {
    const int k = static_cast<int>(std::lround(s * g.nt / 4.0));
    out::Series ser;
    char name[32];
    std::snprintf(name, sizeof name, "t = %.3g", g.t(k));
    ser.name = name;
    for (int i = 0; i <= g.nx; ++i) {
      ser.x.push_back(g.x(i));
      ser.y.push_back(g.theta[g.index(k, i)]);
    }
    snaps.push_back(ser);
  }
  out::write_text(dir + "/plots/theta_snapshots.svg", out::svg_lines("theta(x, t)", "x", "theta", snaps));

  const diag::EnergyTrace& tr = r.energy;
  out::Series E{"E", tr.times, tr.E}, D{"D", tr.times, tr.D}, ED{"E + D", tr.times, {}};
  for (std::size_t k = 0; k < tr.times.size(); ++k) ED.y.push_back(tr.E[k] + tr.D[k]);
  out::write_text(dir + "/plots/energy.svg", out::svg_lines("energy trace", "t", "energy", {E, D, ED}));
  out::write_text(dir + "/plots/J_heatline.svg", out::svg_heatmap("J(x, t)", g, g.J));
}

std::string check_table(const std::vector<Check>& checks) {
  std::ostringstream o;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %14s %4s %12s  %s\n", "check", "value", "", "bound", "result");
  o << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-28s %14.6e %4s %12.4e  %s\n", c.name.c_str(), c.value,
                  c.lower ? ">" : "<=", c.bound, c.pass ? "PASS" : "FAIL");
    o << line;
  }
  return o.str();
}

int sweep(const cfg::RunConfig& config, const std::string& dir) {
  if (!config.sweep.is_object() || config.sweep.empty())
    throw Error(ErrorCode::ConfigError, "cli", "sweep: config has no 'sweep' object");
  std::vector<std::string> keys;
  std::vector<std::vector<json>> values;
  for (const auto& [key, val] : config.sweep.items()) {
    keys.push_back(key);
    values.emplace_back(val.begin(), val.end());
  }
  std::size_t total = 1;
  for (const auto& v : values) total *= v.size();
  out::ensure_dir(dir);

  struct Row {
    std::vector<std::string> params;
    std::string status = "ok", message, sub;
    json summary;
  };
  std::vector<Row> rows(total);
  parallel_for(static_cast<int>(total), [&](int idx) {
    Row& row = rows[idx];
    json j = config.source;
    j.erase("sweep");
    std::size_t rem = static_cast<std::size_t>(idx);
    for (std::size_t p = keys.size(); p-- > 0;) {
      const json& v = values[p][rem % values[p].size()];
      rem /= values[p].size();
      cfg::set_path(j, keys[p], v);
    }
    for (std::size_t p = 0; p < keys.size(); ++p) {
      // Recover the value again in key order for the index.
      std::size_t r2 = static_cast<std::size_t>(idx);
      for (std::size_t q = keys.size(); q-- > p + 1;) r2 /= values[q].size();
      row.params.push_back(values[p][r2 % values[p].size()].dump());
    }
    char sub[32];
    std::snprintf(sub, sizeof sub, "run_%03d", idx);
    row.sub = sub;
    try {
      cfg::RunConfig c = cfg::parse(j);
      c.out_dir = dir + "/" + row.sub;
      RunResult rr = run(c);
      write_artifacts(rr, c.out_dir);
      row.summary = rr.summary;
      if (!rr.pass()) row.status = "checks_failed";
    } catch (const Error& e) {
      row.status = error_name(e.code());
      row.message = e.what();
    }
  });

  std::ostringstream o;
  o << "run";
  for (const auto& k : keys) o << ',' << k;
  o << ",dir,status,E0,energy_residual_max,Bpi_T,theta_pi_T,reconcile_l2,reference_error,oracle_sup_theta,"
       "iterations,pass\n";
  int failed = 0;
  auto field = [](const json& s, const char* key) -> std::string {
    if (!s.is_object() || !s.contains(key) || !s.at(key).is_number()) return "";
    return out::fmt(s.at(key).get<double>());
  };
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Row& row = rows[idx];
    if (row.status != "ok" && row.status != "checks_failed") ++failed;
    o << idx;
    for (const auto& p : row.params) {
      std::string v = p;
      std::replace(v.begin(), v.end(), ',', ';');
      o << ',' << v;
    }
    const json& s = row.summary;
    std::string iters = s.is_object() && s.contains("iterations_total") ? std::to_string(s["iterations_total"].get<int>()) : "";
    std::string rec = s.is_object() && s.contains("reconcile") ? out::fmt(s["reconcile"]["l2"].get<double>()) : "";
    o << ',' << row.sub << ',' << row.status << ',' << field(s, "E0") << ',' << field(s, "energy_residual_max")
      << ',' << field(s, "Bpi_T") << ',' << field(s, "theta_pi_T") << ',' << rec << ','
      << field(s, "reference_error") << ',' << field(s, "oracle_sup_theta") << ',' << iters << ','
      << (s.is_object() && s.value("pass", false) ? "true" : "false") << '\n';
    if (!row.message.empty()) std::fprintf(stderr, "%s: %s\n", row.sub.c_str(), row.message.c_str());
  }
  out::write_text(dir + "/index.csv", o.str());
  return failed;
}

}  // namespace plc::pipeline
