#include "snrkit/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "snrkit/csv.hpp"
#include "snrkit/synthetic.hpp"
#include "snrkit/version.hpp"

namespace snrkit {

namespace fs = std::filesystem;

namespace {

void check_output_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw Error(ErrorCode::IoError, "output directory does not exist: " + parent.string());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

Json header_json(std::string_view schema, const RunConfig& config) {
  Json j;
  j["schema"] = schema;
  j["schema_version"] = kReportSchemaVersion;
  j["version"] = kVersion;
  j["config"] = config_json(config);
  return j;
}

Json archive_json(const Archive& archive) {
  return std::visit(
      [](const auto& a) -> Json {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, EnsembleArchive>)
          return Json{{"schema", "ensemble"}, {"rows", a.size()}, {"members", a.ensemble_size()}};
        else
          return Json{{"schema", "binary"}, {"rows", a.size()}, {"base_rate", a.base_rate()}};
      },
      archive);
}

struct NamedStatistic {
  std::string name;
  std::function<double(const Archive&)> fn;
};

std::vector<NamedStatistic> statistics_for(const Archive& archive, const RunConfig& config) {
  const double thr = config.threshold;
  const double eps = config.epsilon;
  if (std::holds_alternative<BinaryArchive>(archive))
    return {{"rss_ls", [eps](const Archive& a) {
               return rss_ls(std::get<BinaryArchive>(a), eps).ratio;
             }}};
  return {
      {"rpc_classical",
       [](const Archive& a) { return classical_rpc(std::get<EnsembleArchive>(a)); }},
      {"rss_crps", [](const Archive& a) { return rss_crps(std::get<EnsembleArchive>(a)).ratio; }},
      {"rss_ls",
       [thr, eps](const Archive& a) {
         return rss_ls(binarize(std::get<EnsembleArchive>(a), thr), eps).ratio;
       }},
  };
}

BootstrapDistribution bootstrap_one(const Archive& archive, const NamedStatistic& stat,
                                    const BootstrapOptions& options) {
  return std::visit(
      [&](const auto& a) {
        return bootstrap_statistic(
            a, [&](const auto& sub) { return stat.fn(Archive(sub)); }, stat.name, options);
      },
      archive);
}

}  // namespace

std::string_view command_name(Command command) noexcept {
  switch (command) {
    case Command::Synth: return "synth";
    case Command::Analyze: return "analyze";
    case Command::Bootstrap: return "bootstrap";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (command == Command::Synth) {
    SyntheticConfig{phi, c, members, length, seed}.validate();
  } else {
    if (input_path.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
    if (!fs::is_regular_file(input_path))
      throw Error(ErrorCode::IoError, "input file not found: " + input_path);
    if (!std::isfinite(threshold))
      throw Error(ErrorCode::InvalidArgument, "threshold must be finite");
    if (!(epsilon > 0.0 && epsilon < 0.5))
      throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 0.5)");
  }
  if (command == Command::Bootstrap) {
    if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
    if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
    if (quantile_probs.empty())
      throw Error(ErrorCode::InvalidArgument, "at least one quantile probability is required");
    for (double p : quantile_probs)
      if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "quantile probabilities must lie in [0, 1]");
  }
  if (command != Command::Analyze && output_path.empty())
    throw Error(ErrorCode::InvalidArgument, "--output is required");
  if (!output_path.empty()) check_output_dir(output_path);
}

Json config_json(const RunConfig& config) {
  Json j;
  j["command"] = command_name(config.command);
  switch (config.command) {
    case Command::Synth:
      j["output"] = config.output_path;
      j["phi"] = config.phi;
      j["c"] = config.c;
      j["members"] = config.members;
      j["length"] = config.length;
      j["seed"] = config.seed;
      break;
    case Command::Bootstrap:
      j["input"] = config.input_path;
      j["output"] = config.output_path;
      j["threshold"] = config.threshold;
      j["epsilon"] = config.epsilon;
      j["replicates"] = config.replicates;
      j["seed"] = config.seed;
      j["quantiles"] = config.quantile_probs;
      j["bins"] = config.bins;
      break;
    case Command::Analyze:
      j["input"] = config.input_path;
      j["output"] = config.output_path.empty() ? Json(nullptr) : Json(config.output_path);
      j["threshold"] = config.threshold;
      j["epsilon"] = config.epsilon;
      break;
  }
  return j;
}

void cmd_synth(const RunConfig& config, std::ostream& out) {
  const SyntheticConfig sc{config.phi, config.c, config.members, config.length, config.seed};
  const EnsembleArchive archive = generate(sc);
  {
    auto file = open_output(config.output_path);
    write_ensemble_csv(file, archive);
  }
  if (sc.c == 0.0) {
    out << "analytic_rpc undefined\n";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", analytic_rpc(sc));
  out << "analytic_rpc " << buf << '\n';
}

CommandResult cmd_analyze(const RunConfig& config) {
  const Archive archive = read_archive_file(config.input_path);
  const DiagnosticsOptions options{config.threshold, config.epsilon};
  const DiagnosticsReport report =
      std::visit([&](const auto& a) { return diagnose(a, options); }, archive);

  CommandResult result;
  result.report = header_json("snrkit.analyze", config);
  result.report["archive"] = archive_json(archive);
  const Json diagnostics = to_json(report);
  for (const auto& [key, value] : diagnostics.items()) result.report[key] = value;
  result.failures = report.failures;
  return result;
}

CommandResult cmd_bootstrap(const RunConfig& config) {
  const Archive archive = read_archive_file(config.input_path);
  const BootstrapOptions options{config.replicates, config.seed, config.threads};
  const fs::path output(config.output_path);
  const fs::path dir = output.parent_path();
  const std::string stem = output.stem().string();

  CommandResult result;
  result.report = header_json("snrkit.bootstrap", config);
  result.report["archive"] = archive_json(archive);
  Json stats;
  for (const auto& stat : statistics_for(archive, config)) {
    try {
      const BootstrapDistribution dist = bootstrap_one(archive, stat, options);
      Json j = to_json(dist, config.quantile_probs);

      const std::string hist_name = stem + "_" + stat.name + "_hist.csv";
      const std::string reps_name = stem + "_" + stat.name + "_replicates.csv";
      {
        auto f = open_output(dir / hist_name);
        write_histogram_csv(f, histogram(dist, config.bins));
      }
      {
        auto f = open_output(dir / reps_name);
        write_replicates(f, dist);
      }
      j["histogram_file"] = hist_name;
      j["replicates_file"] = reps_name;
      stats[stat.name] = std::move(j);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      stats[stat.name] = Json{{"error", Json{{"code", std::string(code_name(e.code()))},
                                            {"message", e.what()}}}};
      result.failures.push_back({stat.name, e.code(), e.what()});
    }
  }
  result.report["statistics"] = std::move(stats);
  result.report["complete"] = result.failures.empty();
  return result;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.command == Command::Synth) {
      cmd_synth(config, out);
      return 0;
    }
    const CommandResult result =
        config.command == Command::Analyze ? cmd_analyze(config) : cmd_bootstrap(config);
    const std::string text = result.report.dump(2) + "\n";
    if (config.output_path.empty()) {
      out << text;
    } else {
      auto f = open_output(config.output_path);
      f << text;
      if (!f) throw Error(ErrorCode::IoError, "write failed: " + config.output_path);
    }
    if (!result.failures.empty()) {
      err << error_json(result.failures, "report incomplete").dump() << '\n';
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << error_json(e.code(), e.what()).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << error_json(ErrorCode::IoError, e.what()).dump() << '\n';
    return 1;
  }
}

}  // namespace snrkit
