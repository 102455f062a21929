// Experiment runner: loads a key-value config, applies overrides, and runs
// one of the named experiments (or validates the config, or sweeps a key).
//
// Exit codes: 0 success, 2 ran-but-failed-acceptance-threshold, 1 error.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "mflab/experiments.hpp"

namespace {

int run_one(mflab::KeyValueConfig kv, const std::string& out_dir) {
  std::vector<mflab::Diagnostic> diag;
  mflab::ExperimentConfig cfg = mflab::resolve_config(kv, diag);
  if (!diag.empty()) {
    for (const auto& d : diag)
      std::cerr << "config error: " << d.field << ": " << d.message << "\n";
    return 1;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  const mflab::ExperimentOutcome out = mflab::run_experiment(cfg);
  for (const auto& c : out.checks)
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.claim
              << "  measured=" << c.measured << "\n";
  std::cout << (out.ok ? "RESULT: PASS" : "RESULT: FAIL") << "  (" << cfg.out_dir
            << ")\n";
  return out.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bulk-interface dislocation dynamics laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, sweep_spec;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--override", overrides,
                    "section.key=value (repeatable)");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common(run);
  CLI::App* validate =
      app.add_subcommand("validate", "dry-run config diagnostics");
  add_common(validate);
  CLI::App* sweep =
      app.add_subcommand("sweep", "run one experiment per swept value");
  add_common(sweep);
  sweep->add_option("--sweep", sweep_spec, "section.key=v1,v2,... ")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    mflab::KeyValueConfig kv = mflab::KeyValueConfig::parse_file(config_path);
    for (const auto& o : overrides) kv.set_override(o);

    if (validate->parsed()) {
      const auto diag = mflab::validate_config(kv);
      if (diag.empty()) {
        std::vector<mflab::Diagnostic> d2;
        const mflab::ExperimentConfig cfg = mflab::resolve_config(kv, d2);
        std::cout << "ok: " << mflab::to_string(cfg.kind) << " on "
                  << cfg.grid.nx << "x" << cfg.grid.ny << " grid, dt="
                  << cfg.scheme.dt << ", out=" << cfg.out_dir << "\n";
        return 0;
      }
      for (const auto& d : diag)
        std::cout << "diagnostic: " << d.field << ": " << d.message << "\n";
      return 1;
    }

    if (sweep->parsed()) {
      const size_t eq = sweep_spec.find('=');
      if (eq == std::string::npos) {
        std::cerr << "sweep spec must be section.key=v1,v2,...\n";
        return 1;
      }
      const std::string key = sweep_spec.substr(0, eq);
      std::stringstream vals(sweep_spec.substr(eq + 1));
      std::string val;
      int worst = 0;
      int index = 0;
      while (std::getline(vals, val, ',')) {
        mflab::KeyValueConfig kvi = kv;
        kvi.set_override(key + "=" + val);
        std::string dir = out_dir.empty() ? "sweep" : out_dir;
        dir += "/" + std::to_string(index++) + "_" + val;
        std::cout << "== " << key << " = " << val << " -> " << dir << "\n";
        worst = std::max(worst, run_one(std::move(kvi), dir));
      }
      return worst;
    }

    return run_one(std::move(kv), out_dir);
  } catch (const mflab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
