// nmcoh: simulate, measure, verify, plot.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmcoh/app.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "key=value config file");
  cmd->add_option("-p,--preset", o.preset, "benchmark preset (fig1..fig5)");
  cmd->add_option("-s,--set", o.overrides, "override a config key, key=value (repeatable)");
}

// Defaults, then preset, then file, then --set.
nmcoh::RunConfig build_config(const CommonOptions& o) {
  nmcoh::RunConfig cfg;
  if (!o.preset.empty()) cfg.apply_preset(o.preset);
  if (!o.config_path.empty()) cfg.load_file(o.config_path);
  for (const auto& kv : o.overrides) cfg.set_assignment(kv);
  return cfg;
}

int with_config(const CommonOptions& o, auto&& body) {
  return nmcoh::app::guarded(std::cerr, [&] { return body(build_config(o)); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence-based non-Markovianity of qubit channels"};
  app.require_subcommand(1);

  CommonOptions sim_opt, meas_opt, ver_opt;
  auto* sim = app.add_subcommand("simulate", "coherence trajectories to CSV (and SVG)");
  add_common(sim, sim_opt);
  auto* meas = app.add_subcommand("measure", "non-Markovianity measure with state search");
  add_common(meas, meas_opt);
  auto* ver = app.add_subcommand("verify", "sign certifications, oracle and equivalence checks");
  add_common(ver, ver_opt);
  std::string suite = "all";
  ver->add_option("suite", suite, "signs | oracles | equivalence | prop1 | all");
  auto* plot = app.add_subcommand("plot", "render a simulate CSV as SVG");
  std::string csv_in, svg_out, title;
  plot->add_option("csv", csv_in, "input CSV")->required();
  plot->add_option("-o,--output", svg_out, "output SVG")->required();
  plot->add_option("-t,--title", title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nmcoh::app::kConfigError;
  }

  if (*sim) return with_config(sim_opt, [](const auto& cfg) { return nmcoh::app::cmd_simulate(cfg, std::cout, std::cerr); });
  if (*meas) return with_config(meas_opt, [](const auto& cfg) { return nmcoh::app::cmd_measure(cfg, std::cout, std::cerr); });
  if (*ver)
    return with_config(ver_opt, [&](const auto& cfg) { return nmcoh::app::cmd_verify(suite, cfg, std::cout, std::cerr); });
  return nmcoh::app::cmd_plot(csv_in, svg_out, title, std::cout, std::cerr);
}
