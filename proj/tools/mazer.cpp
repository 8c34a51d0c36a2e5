// Command-line front end: amplitude tables, phase-time sweeps, wave-packet
// densities and split/delay reports, written as CSV/JSON.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mazer/run.hpp"

namespace {

const char *describe(const std::string &name) {
  if (name == "amplitudes") return "transmission and reflection amplitudes per channel";
  if (name == "phase-sweep") return "phase time against mean wavenumber";
  if (name == "phase-function") return "unwrapped phase and phase function on a grid";
  if (name == "packet") return "transmitted density against time, cavity and free";
  return "channel peaks, weights and delay as JSON";
}

void add_run_options(CLI::App *app, mazer::RunConfig &cfg, std::string &config_path,
                     std::string &format) {
  app->add_option("--preset", cfg.preset, "figure preset (fig3..fig9)");
  app->add_option("--L", cfg.length_k0L, "cavity length k0*L");
  app->add_option("--n", cfg.photons_n, "photon number");
  app->add_option("--channel", cfg.channel, "excited|ground");
  app->add_option("--k", cfg.k, "single incident wavenumber (amplitudes)");
  app->add_option("--k-min", cfg.k_min, "first wavenumber of the grid");
  app->add_option("--k-max", cfg.k_max, "last wavenumber of the grid");
  app->add_option("--dk", cfg.dk, "wavenumber grid step");
  app->add_option("--k-bar", cfg.k_bar, "mean wavenumber of the packet");
  app->add_option("--sigma", cfg.sigma, "spectral width of the packet");
  app->add_option("--t-min", cfg.t_min, "first time sample, t/t_cl");
  app->add_option("--t-max", cfg.t_max, "last time sample, t/t_cl");
  app->add_option("--t-samples", cfg.t_samples, "number of time samples");
  app->add_option("--nodes", cfg.nodes, "initial Gauss-Legendre node count");
  app->add_option("--fd-step", cfg.h, "initial finite-difference step for the phase time");
  app->add_option("--output,-o", cfg.output, "output file (default stdout)");
  app->add_option("--format", format, "csv|json");
  app->add_option("--config", config_path, "JSON sidecar of a previous run");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Ultra-cold atom transmission through a vacuum-induced cavity potential"};
  app.require_subcommand(0, 1);

  mazer::RunConfig flags;
  std::string config_path;
  std::string format;
  for (const std::string &name : mazer::subcommands())
    add_run_options(app.add_subcommand(name, describe(name)), flags, config_path, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  for (const std::string &name : mazer::subcommands())
    if (app.got_subcommand(name)) flags.subcommand = name;

  try {
    mazer::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw mazer::ConfigError("cannot read " + config_path);
      cfg = mazer::config_from_json(nlohmann::json::parse(in));
    }
    cfg = mazer::merge(cfg, flags);
    if (!format.empty()) cfg.format = format;
    mazer::run(cfg);
  } catch (const mazer::ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    if (flags.subcommand.empty() && config_path.empty()) std::cerr << app.help();
    return 1;
  } catch (const mazer::DomainError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mazer::ConvergenceError &e) {
    std::cerr << "error [" << e.module() << "] at sample " << e.sample() << ": " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "error: malformed config: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
