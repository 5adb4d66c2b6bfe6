#include "liouspec/cli/run.hpp"

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "liouspec/cli/commands.hpp"
#include "liouspec/cli/config.hpp"

namespace liouspec::cli {

namespace {

void add_common_options(CLI::App* sub, std::string& config_path, Overrides& o) {
  // -h would collide with --h (the field), so help is long-form only.
  sub->set_help_flag("--help", "print this help message and exit");
  sub->add_option("--config", config_path, "JSON config file (defaults apply without one)");
  sub->add_option("--j", o.j, "spin length j (half-integer); also replaces sweep.j");
  sub->add_option("--p", o.p, "bath polarization p; also replaces sweep.p and eigs.p");
  sub->add_option("--gamma", o.gamma, "collective rate Gamma");
  sub->add_option("--gamma0", o.gamma0, "dephasing rate Gamma0");
  sub->add_option("--h", o.h, "field h");
  sub->add_option("--threshold", o.threshold, "near-degeneracy threshold");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "single random-source seed (replaces random_seeds)");
  sub->add_option("--window-mult", o.window_mult, "fit window half-width in units of the HWHM");
  sub->add_option("--grid-min", o.grid_min, "lowest frequency");
  sub->add_option("--grid-max", o.grid_max, "highest frequency");
  sub->add_option("--grid-n", o.grid_n, "number of frequencies");
  sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Liouvillian emission spectra and exceptional-point line-shape diagnostics"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&);
  };
  const Command commands[] = {
      {"eigs", "full Liouvillian spectrum per p with near-degeneracy flags", cmd_eigs},
      {"spectrum", "emission spectra and line-shape fits per source", cmd_spectrum},
      {"sweep", "EP diagnostics over the (p, j, source) grid", cmd_sweep},
      {"synthetic", "Jordan-block oracle demonstrations", cmd_synthetic},
      {"config", "print the resolved configuration as JSON",
       [](const RunConfig& cfg) {
         std::cout << config_to_json(cfg).dump(2) << '\n';
         return int{kOk};
       }},
  };
  for (const auto& c : commands) add_common_options(app.add_subcommand(c.name, c.help), config_path, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    apply_overrides(cfg, overrides);
    for (const auto& c : commands) {
      if (app.got_subcommand(c.name)) return c.fn(cfg);
    }
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace liouspec::cli
