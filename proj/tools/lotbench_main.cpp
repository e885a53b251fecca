// lotbench command line: runs the benchmark pipeline stage by stage or end
// to end. See README.md for the artifact layout and configuration schema.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lotbench/pipeline.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::string classes;
  lotbench::RunConfig config;
  bool seed_set = false;
  bool stride_set = false;
  std::string dedup_mode;
  std::uint64_t seed = 7;
  int stride = 5;
};

void add_common_flags(CLI::App* cmd, CliOptions& options) {
  cmd->add_option("--config", options.config_path,
                  "JSON config file; flags override its values");
  cmd->add_option("--seed", options.seed, "master seed for all sampling")
      ->each([&options](const std::string&) { options.seed_set = true; });
  cmd->add_option("--stride", options.stride,
                  "constant stride for classes 3..5 (classes 1..2 use 1)")
      ->each([&options](const std::string&) { options.stride_set = true; });
  cmd->add_option("--dedup-mode", options.dedup_mode,
                  "similarity aggregation: summed | per-vector");
  cmd->add_option("--classes", options.classes,
                  "complexity class range, e.g. 1..5 or 3");
  cmd->add_option("--concepts-per-class", options.config.concepts_per_class,
                  "concepts sampled per class");
  cmd->add_option("--prompts-per-concept", options.config.prompts_per_concept,
                  "prompts per concept (half true, half false answers)");
  cmd->add_option("--learner", options.config.learner, "mdl | majority | remote");
  cmd->add_option("--endpoint-config", options.config.endpoint_config_path,
                  "endpoint JSON for the remote learner");
  cmd->add_option("--out-dir", options.config.out_dir, "artifact directory");
  cmd->add_option("--preset", options.preset, "desk | full");
  cmd->add_option("--threads", options.config.threads,
                  "worker threads (0 = hardware)");
  cmd->add_option("--max-in-flight", options.config.max_in_flight,
                  "concurrent remote requests");
  cmd->add_option("--class-size-cap", options.config.class_size_cap,
                  "enumeration size limit per class");
}

lotbench::RunConfig resolve_config(const CliOptions& options,
                                   const CLI::App& cmd) {
  lotbench::RunConfig config;
  if (!options.config_path.empty()) {
    config = lotbench::load_run_config(options.config_path);
  }
  if (!options.preset.empty()) {
    lotbench::apply_preset(config, options.preset);
  }
  // Explicit flags win over both the file and the preset.
  if (options.seed_set) config.seed = options.seed;
  if (options.stride_set) config.stride = options.stride;
  if (!options.dedup_mode.empty()) {
    auto mode = lotbench::dedup_mode_from_text(options.dedup_mode);
    if (!mode) {
      throw lotbench::ConfigError("unknown dedup mode '" + options.dedup_mode + "'");
    }
    config.dedup_mode = *mode;
  }
  if (!options.classes.empty()) lotbench::parse_class_range(options.classes, config);
  if (cmd.count("--concepts-per-class") > 0) {
    config.concepts_per_class = options.config.concepts_per_class;
  }
  if (cmd.count("--prompts-per-concept") > 0) {
    config.prompts_per_concept = options.config.prompts_per_concept;
  }
  if (cmd.count("--learner") > 0) config.learner = options.config.learner;
  if (cmd.count("--endpoint-config") > 0) {
    config.endpoint_config_path = options.config.endpoint_config_path;
  }
  if (cmd.count("--out-dir") > 0) config.out_dir = options.config.out_dir;
  if (cmd.count("--threads") > 0) config.threads = options.config.threads;
  if (cmd.count("--max-in-flight") > 0) {
    config.max_in_flight = options.config.max_in_flight;
  }
  if (cmd.count("--class-size-cap") > 0) {
    config.class_size_cap = options.config.class_size_cap;
  }
  lotbench::validate_config(config);
  return config;
}

void print_result(const lotbench::StageResult& result) {
  std::printf("%-10s %s%s\n", result.stage.c_str(),
              result.skipped ? "[skipped] " : "", result.summary.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lotbench: concept-learning benchmark generator and evaluator"};
  app.require_subcommand(1);

  CliOptions options;
  CLI::App* enumerate_cmd =
      app.add_subcommand("enumerate", "generate complexity classes");
  CLI::App* dedup_cmd = app.add_subcommand("dedup", "deduplicate concept classes");
  CLI::App* prompts_cmd =
      app.add_subcommand("prompts", "sample concepts and emit prompt sets");
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "run the configured learner on all prompts");
  CLI::App* stats_cmd = app.add_subcommand("stats", "aggregate accuracies");
  CLI::App* all_cmd = app.add_subcommand("all", "run the whole pipeline");
  for (CLI::App* cmd :
       {enumerate_cmd, dedup_cmd, prompts_cmd, evaluate_cmd, stats_cmd, all_cmd}) {
    add_common_flags(cmd, options);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    const lotbench::RunConfig config = resolve_config(options, *active);
    if (active == enumerate_cmd) {
      print_result(lotbench::run_enumerate_stage(config));
    } else if (active == dedup_cmd) {
      print_result(lotbench::run_dedup_stage(config));
    } else if (active == prompts_cmd) {
      print_result(lotbench::run_prompts_stage(config));
    } else if (active == evaluate_cmd) {
      print_result(lotbench::run_evaluate_stage(config));
    } else if (active == stats_cmd) {
      print_result(lotbench::run_stats_stage(config));
    } else {
      for (const auto& result : lotbench::run_all_stages(config)) {
        print_result(result);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
