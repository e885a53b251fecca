#ifndef LOTBENCH_PIPELINE_HPP
#define LOTBENCH_PIPELINE_HPP

// End-to-end pipeline: enumerate -> dedup -> prompts -> evaluate -> stats.
//
// Every stage is a pure function of the resolved configuration and its
// input artifacts. A manifest of content hashes makes completed stages
// no-ops on rerun, and all writes go through atomic renames, so a crashed
// run never leaves a partial artifact behind.
//
// Artifact layout under out_dir:
//   run_config.json                    resolved configuration + seed
//   manifest.json                      stage fingerprints + output hashes
//   enumerated/concepts_class{k}.jsonl raw canonical classes
//   deduped/concepts_class{k}.jsonl    statuses + signatures after dedup
//   deduped/dedup_audit.jsonl          per-discard audit trail
//   prompts/sampled_concepts.json      per-class samples + seeds
//   prompts/prompts_{id}.jsonl         rendered prompt sets
//   prompts/prompt_meta.json           pool sizes, question-reuse flags
//   eval/records_{learner}.jsonl       per-prompt outcomes
//   stats/{results.csv, class_means.csv, summary.json, table.txt}

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lotbench/dedup.hpp"
#include "lotbench/enumerate.hpp"
#include "lotbench/stats.hpp"

namespace lotbench {

struct RunConfig {
  std::uint64_t seed = 7;
  int stride = 5;  // constant stride for classes k >= 3; k <= 2 always use 1
  DedupMode dedup_mode = DedupMode::Summed;
  int class_min = 1;
  int class_max = 5;
  std::size_t concepts_per_class = 18;
  std::size_t prompts_per_concept = 1000;
  std::string learner = "mdl";  // mdl | majority | remote
  std::string endpoint_config_path;
  std::size_t class_size_cap = 10000000;
  AbstainPolicy abstain_policy = AbstainPolicy::CountIncorrect;
  int threads = 0;        // 0 = hardware concurrency
  int max_in_flight = 4;  // remote learner only
  std::string preset;     // informational; "desk" or "full" when applied

  std::filesystem::path out_dir = "out";
};

// Presets bundle the knobs that trade fidelity for speed. "full" matches
// the benchmark-scale counts (18 concepts/class, 1000 prompts, stride 5);
// "desk" shrinks to 6 concepts/class, 100 prompts and stride 10 for
// CI-speed runs.
void apply_preset(RunConfig& config, const std::string& name);

void validate_config(const RunConfig& config);  // throws ConfigError

// Parses "1..5", "1-5" or "3" into the class range.
void parse_class_range(const std::string& text, RunConfig& config);

// Resolved config as JSON (excludes out_dir, which is location not content).
nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

struct StageResult {
  std::string stage;
  bool skipped = false;
  std::string summary;
};

StageResult run_enumerate_stage(const RunConfig& config);
StageResult run_dedup_stage(const RunConfig& config);
StageResult run_prompts_stage(const RunConfig& config);
StageResult run_evaluate_stage(const RunConfig& config);
StageResult run_stats_stage(const RunConfig& config);
std::vector<StageResult> run_all_stages(const RunConfig& config);

// Artifact readers, shared with the CLI and the acceptance suite.
std::vector<ConceptClass> load_concept_classes(const RunConfig& config,
                                               const std::string& stage_dir);
std::vector<Concept> load_sampled_concepts(const RunConfig& config);
std::vector<EvalRecord> load_eval_records(const std::filesystem::path& file);

// Per-concept derived seeds (exposed so tests can regenerate artifacts).
std::uint64_t example_seed(const RunConfig& config, std::uint64_t concept_id);
std::uint64_t prompt_set_seed(const RunConfig& config, std::uint64_t concept_id);

}  // namespace lotbench

#endif  // LOTBENCH_PIPELINE_HPP
