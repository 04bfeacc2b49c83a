// adiabus command-line front end.
//
//   adiabus <experiment> --config cfg.json [--out dir] [--workers n] [--seed n]
//   adiabus plot --csv data.csv [--template line|loglog|heatmap] [--out script.gp]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "adiabus/experiment.hpp"
#include "adiabus/plot.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfigError = 2, kIoError = 3 };

int exit_code(const adiabus::Error& e) {
  switch (e.code()) {
    case adiabus::Errc::ParseError:
    case adiabus::Errc::ValidationError:
      return kConfigError;
    case adiabus::Errc::IoError:
    case adiabus::Errc::SchemaMismatch:
      return kIoError;
    default:
      return kFailure;
  }
}

std::optional<int> env_workers() {
  const char* v = std::getenv("ADIABUS_WORKERS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    std::cerr << "adiabus: ignoring ADIABUS_WORKERS=" << v << "\n";
    return std::nullopt;
  }
  return static_cast<int>(n);
}

struct RunArgs {
  std::string config;
  std::string out = ".";
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

int run(adiabus::ExperimentKind kind, const RunArgs& args) {
  auto cfg = adiabus::load_config(args.config);
  if (cfg.experiment != kind)
    throw adiabus::ConfigError(adiabus::Errc::ValidationError, "experiment",
                               "config describes " + std::string(adiabus::to_string(cfg.experiment)) +
                                   " but the subcommand is " + std::string(adiabus::to_string(kind)));
  // Precedence: --workers, then ADIABUS_WORKERS, then the config file.
  if (const auto w = env_workers()) cfg.workers = *w;
  if (args.workers) cfg.workers = *args.workers;
  if (args.seed) cfg.solver.eig.seed = *args.seed;

  const auto out = adiabus::run_experiment(cfg, args.out);
  std::size_t incomplete = 0;
  for (const auto& p : out.points)
    if (p.status != "ok" && p.status != "Reached") ++incomplete;
  std::cerr << "adiabus: wrote " << (std::filesystem::path(args.out) / cfg.csv_name).string() << " ("
            << out.points.size() << " points, " << incomplete << " incomplete)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic quantum data bus simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(adiabus::version()));

  RunArgs run_args;
  std::optional<adiabus::ExperimentKind> chosen;
  for (auto kind : {adiabus::ExperimentKind::Spectrum, adiabus::ExperimentKind::GapScan,
                    adiabus::ExperimentKind::FidelityCurve, adiabus::ExperimentKind::AnnealTime,
                    adiabus::ExperimentKind::Transport, adiabus::ExperimentKind::DegeneracyCheck}) {
    auto* sub = app.add_subcommand(std::string(adiabus::to_string(kind)), "Run a " +
                                                                               std::string(adiabus::to_string(kind)) +
                                                                               " experiment");
    sub->add_option("--config", run_args.config, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", run_args.out, "Output directory")->capture_default_str();
    sub->add_option("--workers", run_args.workers, "Worker threads")->check(CLI::Range(1, 4096));
    sub->add_option("--seed", run_args.seed, "Eigensolver start-vector seed");
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  std::string csv;
  std::string template_name;
  std::string script_out;
  std::string label = "param";
  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for a result CSV");
  plot->add_option("--csv", csv, "Result CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--template", template_name, "line, loglog or heatmap (default from the CSV kind)")
      ->check(CLI::IsMember({"line", "loglog", "heatmap"}));
  plot->add_option("--out", script_out, "Script path (default: standard output)");
  plot->add_option("--label", label, "Axis label for the param column")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (chosen) return run(*chosen, run_args);

    auto t = adiabus::PlotTemplate::Line;
    if (!template_name.empty()) {
      t = *adiabus::plot_template_from_string(template_name);
    } else {
      std::ifstream in(csv);
      std::string header;
      std::getline(in, header);
      if (header.rfind("s,param,gap", 0) == 0) t = adiabus::PlotTemplate::HeatMap;
    }
    const auto script = adiabus::emit_plot_script(csv, t, label);
    if (script_out.empty()) {
      std::cout << script;
    } else {
      std::ofstream f(script_out);
      if (!(f << script)) throw adiabus::Error(adiabus::Errc::IoError, "cannot write " + script_out);
    }
    return kOk;
  } catch (const adiabus::Error& e) {
    std::cerr << "adiabus: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "adiabus: " << e.what() << "\n";
    return kFailure;
  }
}
