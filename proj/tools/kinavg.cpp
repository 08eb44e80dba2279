#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinavg/config.hpp"
#include "kinavg/errors.hpp"
#include "kinavg/runner.hpp"

namespace {

std::string flag_for(std::string key) {
  std::replace(key.begin(), key.end(), '.', '-');
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> keys;
};

const std::vector<Command> commands{
    {"thresholds", "exponent thresholds over a (q, r) lattice", {"d", "kappa", "grid_qr"}},
    {"constants", "sharp constant of the L2 smoothing estimate", {"d", "beta_minus"}},
    {"radon", "Radon transform of the kappa weight, closed form vs quadrature", {"d", "kappa", "samples"}},
    {"average",
     "velocity average snapshot and cone support check",
     {"d", "grid.n", "grid.len", "grid.n_t", "grid.len_t", "measure", "measure.nodes", "kappa", "symbol"}},
    {"duality-check",
     "duality identity residuals on random band-limited data",
     {"d", "grid.n", "measure", "kappa", "symbol", "seed", "seeds"}},
    {"knapp-scan", "Knapp plate scan against delta", {"d", "q", "r", "alpha", "deltas"}},
    {"dyadic-scan", "dyadic cone piece scan against 2^k", {"d", "q", "r", "ks"}},
    {"rho-scan", "dyadic cone pieces applied to velocity averages", {"d", "data", "ks"}},
    {"funk-hecke",
     "series vs slice quadrature for data radial in x",
     {"d", "modes", "grid.n", "grid.len", "grid.n_t", "grid.len_t", "measure.nodes"}},
    {"sharp-radial", "radial sharp constant and the I_k chain", {"d", "beta_plus", "beta_minus"}},
    {"extremiser", "extremiser convergence sequence, d = 2", {"levels"}},
    {"strichartz-probe",
     "half-wave mixed norms under grid refinement",
     {"d", "q", "r", "levels", "grid.len", "t_span", "steps", "seed", "radial"}},
    {"selftest", "run the acceptance criteria", {"criteria"}},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Velocity averaging experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_file, output_dir;
  bool deterministic = false, show_config = false, print_schema = false;
  app.add_option("-c,--config", config_file, "key = value config file; flags override its values");
  app.add_option("-o,--output-dir", output_dir, "report directory");
  app.add_flag("--deterministic", deterministic, "omit timestamps from reports");
  app.add_flag("--show-config", show_config, "print the resolved configuration and exit");
  app.add_flag("--print-schema", print_schema, "print the config schema as JSON and exit");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    for (const auto& key : cmd.keys) {
      sub->add_option(flag_for(key), values[cmd.name][key], kinavg::config_key(key).help)
          ->default_str(kinavg::config_key(key).fallback);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (print_schema) {
    std::cout << kinavg::schema_json().dump(2) << "\n";
    return 0;
  }

  try {
    kinavg::ExperimentConfig cfg = config_file.empty() ? kinavg::ExperimentConfig{}
                                                       : kinavg::ExperimentConfig::load(config_file);
    const auto chosen = app.get_subcommands();
    if (!chosen.empty()) {
      const std::string name = chosen.front()->get_name();
      cfg.set("command", name, "command line");
      for (const auto& [key, value] : values[name]) {
        if (subs[name]->count(flag_for(key)) > 0) cfg.set(key, value, flag_for(key));
      }
    } else if (!cfg.is_set("command") && !show_config) {
      throw kinavg::InputError("no command given; see --help");
    }
    if (!output_dir.empty()) cfg.set("output_dir", output_dir, "--output-dir");
    if (deterministic) cfg.set("deterministic", "true", "--deterministic");

    if (show_config) {
      std::cout << cfg.dump();
      return 0;
    }
    return kinavg::run(cfg, std::cout, std::cerr);
  } catch (const kinavg::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
