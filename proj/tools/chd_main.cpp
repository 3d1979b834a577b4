// Command-line runner for the CHD classification pipeline.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chd/error.hpp"
#include "chd/eval.hpp"
#include "chd/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

struct StageArgs {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::string mode;
};

void add_stage_options(CLI::App* cmd, StageArgs& args) {
  cmd->add_option("--config", args.config, "Pipeline config (JSON); the embedded default when omitted");
  cmd->add_option("--output", args.output, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", args.seed, "Master seed (overrides seed)");
  cmd->add_option("--mode", args.mode, "SMOTE placement")
      ->check(CLI::IsMember({"none", "paper-faithful", "leakage-free"}));
}

int exit_code(const chd::Error& e) {
  switch (chd::category(e.code())) {
    case chd::ErrorCategory::Config: return kExitConfig;
    case chd::ErrorCategory::Io: return kExitIo;
    case chd::ErrorCategory::Data: return kExitData;
  }
  return kExitData;
}

int run_stage(const StageArgs& args, chd::Stage stage) {
  chd::PipelineConfig config =
      args.config.empty() ? chd::PipelineConfig::defaults() : chd::PipelineConfig::from_file(args.config);
  if (!args.output.empty()) config.output_dir = args.output;
  if (args.seed) config.seed = *args.seed;
  if (!args.mode.empty()) config.smote_mode = chd::smote_mode_from_string(args.mode);

  const auto report = chd::run_pipeline(config, stage);
  const auto files = chd::emit_tables(report, stage, config.output_dir);
  std::cerr << "chd " << chd::to_string(stage) << ": " << report.raw_rows << " raw rows, "
            << report.clean.rows() << " after cleaning";
  if (report.timings.contains("total")) std::cerr << ", " << report.timings.at("total") << " s";
  std::cerr << "\n";
  for (const auto& f : files) std::cout << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coronary heart disease classification pipeline"};
  app.require_subcommand(1);

  StageArgs args;
  struct Entry {
    const char* name;
    const char* help;
    chd::Stage stage;
  };
  const Entry entries[] = {
      {"run", "Run every stage and write all tables", chd::Stage::Run},
      {"clean", "Ingest and clean, then stop", chd::Stage::Clean},
      {"score-features", "Stop after mutual-information scoring", chd::Stage::ScoreFeatures},
      {"evaluate", "Stop after cross-validation", chd::Stage::Evaluate},
  };
  std::optional<chd::Stage> chosen;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_stage_options(cmd, args);
    cmd->callback([&chosen, stage = e.stage] { chosen = stage; });
  }
  bool print_config = false;
  app.add_subcommand("default-config", "Print the embedded default config")->callback([&] { print_config = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (print_config) {
      std::cout << chd::PipelineConfig::default_json() << "\n";
      return 0;
    }
    return run_stage(args, *chosen);
  } catch (const chd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
