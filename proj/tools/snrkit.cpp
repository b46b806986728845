#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "snrkit/commands.hpp"
#include "snrkit/csv.hpp"
#include "snrkit/version.hpp"

namespace {

// Accepts plain radians or a multiple of pi such as "0.3pi".
double parse_angle(std::string text) {
  double scale = 1.0;
  if (text.ends_with("pi")) {
    text.resize(text.size() - 2);
    scale = std::numbers::pi;
    if (text.empty()) text = "1";
  }
  return snrkit::parse_double(text) * scale;
}

}  // namespace

int main(int argc, char** argv) {
  using snrkit::Command;
  snrkit::RunConfig config;
  std::string phi_text = "0.3pi";

  CLI::App app{"Signal-to-noise diagnostics for ensemble forecasts"};
  app.set_version_flag("--version", std::string(snrkit::kVersion));
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Write a synthetic ensemble archive");
  synth->add_option("--output", config.output_path, "CSV to write")->required();
  synth->add_option("--phi", phi_text, "Signal angle in radians, or a multiple like 0.3pi")
      ->capture_default_str();
  synth->add_option("--c", config.c, "Forecast signal scaling")->capture_default_str();
  synth->add_option("--members", config.members, "Ensemble size K")->capture_default_str();
  synth->add_option("--length", config.length, "Number of time steps N")->capture_default_str();
  synth->add_option("--seed", config.seed, "Random seed")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Compute the diagnostics report");
  analyze->add_option("--input", config.input_path, "Archive CSV")->required();
  analyze->add_option("--output", config.output_path, "JSON report (default: stdout)");

  auto* boot = app.add_subcommand("bootstrap", "Bootstrap the RPC and RSS estimators");
  boot->add_option("--input", config.input_path, "Archive CSV")->required();
  boot->add_option("--output", config.output_path, "JSON report; CSVs go next to it")->required();
  boot->add_option("--replicates", config.replicates, "Bootstrap replicates B")
      ->capture_default_str();
  boot->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  boot->add_option("--quantiles", config.quantile_probs, "Comma-separated probabilities")
      ->delimiter(',')
      ->capture_default_str();
  boot->add_option("--bins", config.bins, "Histogram bins")->capture_default_str();
  boot->add_option("--threads", config.threads, "Worker threads (0: all cores)")
      ->capture_default_str();

  for (auto* sub : {analyze, boot}) {
    sub->add_option("--threshold", config.threshold, "Event threshold for the binary score")
        ->capture_default_str();
    sub->add_option("--epsilon", config.epsilon, "Probability clamp of the logit map")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
    config.phi = parse_angle(phi_text);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << snrkit::error_json(snrkit::ErrorCode::InvalidArgument, e.what()).dump() << '\n';
    return 2;
  } catch (const snrkit::Error& e) {
    std::cerr << snrkit::error_json(e.code(), "--phi: " + std::string(e.what())).dump() << '\n';
    return 2;
  }

  if (synth->parsed())
    config.command = Command::Synth;
  else if (boot->parsed())
    config.command = Command::Bootstrap;
  else
    config.command = Command::Analyze;
  return snrkit::run(config, std::cout, std::cerr);
}
