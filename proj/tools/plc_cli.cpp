// poiseuille-lc: command-line front end over the C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "plc/plc.h"

namespace {

struct Options {
  std::string config, out, mode, level;
};

int fail(plc_status s) {
  std::fprintf(stderr, "error: %s\n", plc_last_error());
  return plc_exit_code(s);
}

// Loads the config and applies the command-line overrides.
plc_status prepare(const Options& o, plc_config** cfg) {
  plc_status s = o.config.empty() ? plc_config_default(cfg) : plc_config_load(o.config.c_str(), cfg);
  if (s != PLC_OK) return s;
  if (!o.mode.empty() && (s = plc_config_set_mode(*cfg, o.mode.c_str())) != PLC_OK) return s;
  if (!o.out.empty() && (s = plc_config_set_out(*cfg, o.out.c_str())) != PLC_OK) return s;
  if (!o.level.empty() && (s = plc_config_set_check_level(*cfg, o.level.c_str())) != PLC_OK) return s;
  return PLC_OK;
}

int simulate(const Options& o) {
  plc_config* cfg = nullptr;
  plc_status s = prepare(o, &cfg);
  if (s != PLC_OK) {
    plc_config_free(cfg);
    return fail(s);
  }
  plc_run* run = nullptr;
  s = plc_run_create(cfg, &run);
  if (s == PLC_OK) s = plc_run_write(run, plc_config_out(cfg));
  if (s != PLC_OK) {
    plc_run_free(run);
    plc_config_free(cfg);
    return fail(s);
  }
  std::printf("%s", plc_run_check_table(run));
  std::printf("wrote %s (pass=%s)\n", plc_config_out(cfg), plc_run_pass(run) ? "true" : "false");
  plc_run_free(run);
  plc_config_free(cfg);
  return 0;
}

int verify(Options o, bool write) {
  if (o.level.empty()) o.level = "full";
  plc_config* cfg = nullptr;
  plc_status s = prepare(o, &cfg);
  if (s != PLC_OK) {
    plc_config_free(cfg);
    return fail(s);
  }
  plc_run* run = nullptr;
  s = plc_run_create(cfg, &run);
  if (s == PLC_OK && write) s = plc_run_write(run, plc_config_out(cfg));
  if (s != PLC_OK) {
    plc_run_free(run);
    plc_config_free(cfg);
    return fail(s);
  }
  std::printf("%s", plc_run_check_table(run));
  int code = 0;
  for (int i = 0, n = plc_run_check_count(run); i < n; ++i) {
    const char* name = nullptr;
    int pass = 0;
    plc_run_check(run, i, &name, nullptr, nullptr, &pass);
    if (!pass) {
      std::fprintf(stderr, "verify failed: %s\n", name);
      code = 1;
      break;
    }
  }
  if (code == 0) std::printf("all checks passed\n");
  plc_run_free(run);
  plc_config_free(cfg);
  return code;
}

int sweep(const Options& o) {
  plc_config* cfg = nullptr;
  plc_status s = prepare(o, &cfg);
  int failed = 0;
  if (s == PLC_OK) s = plc_sweep(cfg, plc_config_out(cfg), &failed);
  if (s != PLC_OK) {
    plc_config_free(cfg);
    return fail(s);
  }
  std::printf("wrote %s/index.csv (%d failed runs)\n", plc_config_out(cfg), failed);
  plc_config_free(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poiseuille flow of nematic liquid crystals: solver and verification suite"};
  app.set_version_flag("--version", plc_version());
  app.require_subcommand(1);

  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file (built-in default if omitted)");
    sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    sub->add_option("--mode", o.mode, "solver mode")->check(CLI::IsMember({"coupled", "wave-only", "fd-only"}));
    sub->add_option("--check-level", o.level, "checks to evaluate")->check(CLI::IsMember({"fast", "full"}));
  };
  CLI::App* sim = app.add_subcommand("simulate", "solve and write fields, energy, summary and plots");
  CLI::App* ver = app.add_subcommand("verify", "run the invariant suite and print a pass/fail table");
  CLI::App* swp = app.add_subcommand("sweep", "run the cross product of the config's sweep ranges");
  add_common(sim);
  add_common(ver);
  add_common(swp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (sim->parsed()) return simulate(o);
  if (ver->parsed()) return verify(o, !o.out.empty());
  return sweep(o);
}
