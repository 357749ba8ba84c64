#include "plc/plc.h"

#include <exception>
#include <new>
#include <string>

#include "plc/config.hpp"
#include "plc/errors.hpp"
#include "plc/heatkernel.hpp"
#include "plc/pipeline.hpp"

struct plc_config {
  plc::cfg::RunConfig c;
  std::string json_text;
};

struct plc_run {
  plc::pipeline::RunResult r;
  std::string summary;
  std::string table;
};

namespace {

thread_local std::string g_last_error;

template <class F>
plc_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return PLC_OK;
  } catch (const plc::Error& e) {
    g_last_error = e.what();
    return static_cast<plc_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "Internal: out of memory";
  } catch (const std::exception& e) {
    g_last_error = std::string("Internal: ") + e.what();
  } catch (...) {
    g_last_error = "Internal: unknown exception";
  }
  return PLC_INTERNAL;
}

plc_status null_arg(const char* what) {
  g_last_error = std::string("InvalidArgument: null ") + what;
  return PLC_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* plc_version(void) { return "1.0.0"; }

plc_status plc_config_default(plc_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new plc_config{plc::cfg::default_config(), {}}; });
}

plc_status plc_config_load(const char* path, plc_config** out) {
  if (!path || !out) return null_arg("argument");
  return guarded([&] { *out = new plc_config{plc::cfg::load(path), {}}; });
}

plc_status plc_config_from_json(const char* text, plc_config** out) {
  if (!text || !out) return null_arg("argument");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw plc::Error(plc::ErrorCode::ConfigError, "cli", e.what());
    }
    *out = new plc_config{plc::cfg::parse(j), {}};
  });
}

void plc_config_free(plc_config* cfg) { delete cfg; }

plc_status plc_config_set_mode(plc_config* cfg, const char* mode) {
  if (!cfg || !mode) return null_arg("argument");
  return guarded([&] { cfg->c.mode = plc::cfg::parse_mode(mode); });
}

plc_status plc_config_set_out(plc_config* cfg, const char* dir) {
  if (!cfg || !dir) return null_arg("argument");
  return guarded([&] { cfg->c.out_dir = dir; });
}

plc_status plc_config_set_check_level(plc_config* cfg, const char* level) {
  if (!cfg || !level) return null_arg("argument");
  return guarded([&] {
    std::string l = level;
    if (l != "fast" && l != "full")
      throw plc::Error(plc::ErrorCode::ConfigError, "cli", "check level must be fast or full");
    cfg->c.check_level = l;
  });
}

const char* plc_config_out(const plc_config* cfg) { return cfg ? cfg->c.out_dir.c_str() : ""; }

const char* plc_config_json(plc_config* cfg) {
  if (!cfg) return "";
  cfg->json_text = plc::cfg::to_json(cfg->c).dump(2);
  return cfg->json_text.c_str();
}

plc_status plc_run_create(const plc_config* cfg, plc_run** out) {
  if (!cfg || !out) return null_arg("argument");
  return guarded([&] {
    auto* r = new plc_run{plc::pipeline::run(cfg->c), {}, {}};
    r->summary = r->r.summary.dump(2);
    r->table = plc::pipeline::check_table(r->r.checks);
    *out = r;
  });
}

void plc_run_free(plc_run* run) { delete run; }

plc_status plc_run_write(const plc_run* run, const char* dir) {
  if (!run || !dir) return null_arg("argument");
  return guarded([&] { plc::pipeline::write_artifacts(run->r, dir); });
}

const char* plc_run_summary_json(const plc_run* run) { return run ? run->summary.c_str() : ""; }

int plc_run_pass(const plc_run* run) { return run && run->r.pass() ? 1 : 0; }

int plc_run_check_count(const plc_run* run) { return run ? static_cast<int>(run->r.checks.size()) : 0; }

plc_status plc_run_check(const plc_run* run, int index, const char** name, double* value, double* bound,
                         int* pass) {
  if (!run) return null_arg("run");
  if (index < 0 || index >= static_cast<int>(run->r.checks.size())) {
    g_last_error = "InvalidArgument: check index out of range";
    return PLC_INVALID_ARGUMENT;
  }
  const auto& c = run->r.checks[index];
  if (name) *name = c.name.c_str();
  if (value) *value = c.value;
  if (bound) *bound = c.bound;
  if (pass) *pass = c.pass ? 1 : 0;
  return PLC_OK;
}

const char* plc_run_check_table(const plc_run* run) { return run ? run->table.c_str() : ""; }

plc_status plc_sweep(const plc_config* cfg, const char* dir, int* failed) {
  if (!cfg || !dir) return null_arg("argument");
  return guarded([&] {
    const int n = plc::pipeline::sweep(cfg->c, dir);
    if (failed) *failed = n;
  });
}

const char* plc_last_error(void) { return g_last_error.c_str(); }

const char* plc_error_name(plc_status code) { return plc::error_name(static_cast<plc::ErrorCode>(code)); }

int plc_exit_code(plc_status code) {
  if (code == PLC_OK) return 0;
  return plc::pipeline::exit_code(static_cast<plc::ErrorCode>(code));
}

plc_status plc_heat_kernel(int kind, double x, double t, double xi, double tau, double* out) {
  if (!out) return null_arg("out");
  if (kind != 0 && kind != 1) {
    g_last_error = "InvalidArgument: kernel kind must be 0 or 1";
    return PLC_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = plc::heat::kernel(kind == 0 ? plc::heat::Kernel::Green : plc::heat::Kernel::Neumann, x, t, xi, tau);
  });
}

}  // extern "C"
