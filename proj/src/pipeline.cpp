#include "lotbench/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "lotbench/io_util.hpp"
#include "lotbench/llm_client.hpp"
#include "lotbench/parallel.hpp"
#include "lotbench/promptgen.hpp"
#include "lotbench/rng.hpp"

namespace lotbench {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void apply_preset(RunConfig& config, const std::string& name) {
  if (name == "desk") {
    config.concepts_per_class = 6;
    config.prompts_per_concept = 100;
    config.stride = 10;
  } else if (name == "full") {
    config.concepts_per_class = 18;
    config.prompts_per_concept = 1000;
    config.stride = 5;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected desk or full)");
  }
  config.preset = name;
}

void validate_config(const RunConfig& config) {
  if (config.class_min < 1 || config.class_max > 5 ||
      config.class_min > config.class_max) {
    throw ConfigError("class range must satisfy 1 <= min <= max <= 5");
  }
  if (config.stride < 1 || config.stride > 100) {
    throw ConfigError("stride must be in [1, 100]");
  }
  if (config.prompts_per_concept == 0 || config.prompts_per_concept % 2 != 0) {
    throw ConfigError("prompts_per_concept must be a positive even number");
  }
  if (config.concepts_per_class == 0) {
    throw ConfigError("concepts_per_class must be positive");
  }
  if (config.learner != "mdl" && config.learner != "majority" &&
      config.learner != "remote") {
    throw ConfigError("unknown learner '" + config.learner +
                      "' (expected mdl, majority or remote)");
  }
  if (config.learner == "remote" && config.endpoint_config_path.empty()) {
    throw ConfigError("the remote learner requires --endpoint-config");
  }
  if (config.max_in_flight < 1) {
    throw ConfigError("max_in_flight must be at least 1");
  }
}

void parse_class_range(const std::string& text, RunConfig& config) {
  std::size_t sep = text.find("..");
  std::size_t skip = 2;
  if (sep == std::string::npos) {
    sep = text.find('-');
    skip = 1;
  }
  try {
    if (sep == std::string::npos) {
      config.class_min = config.class_max = std::stoi(text);
    } else {
      config.class_min = std::stoi(text.substr(0, sep));
      config.class_max = std::stoi(text.substr(sep + skip));
    }
  } catch (const std::exception&) {
    throw ConfigError("cannot parse class range '" + text + "'");
  }
}

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json doc;
  doc["seed"] = config.seed;
  doc["stride"] = config.stride;
  doc["dedup_mode"] = std::string(dedup_mode_text(config.dedup_mode));
  doc["class_min"] = config.class_min;
  doc["class_max"] = config.class_max;
  doc["concepts_per_class"] = config.concepts_per_class;
  doc["prompts_per_concept"] = config.prompts_per_concept;
  doc["learner"] = config.learner;
  doc["endpoint_config"] = config.endpoint_config_path;
  doc["class_size_cap"] = config.class_size_cap;
  doc["abstain_policy"] =
      config.abstain_policy == AbstainPolicy::CountIncorrect ? "incorrect"
                                                             : "excluded";
  doc["threads"] = config.threads;
  doc["max_in_flight"] = config.max_in_flight;
  doc["preset"] = config.preset;
  return doc;
}

RunConfig config_from_json(const nlohmann::json& doc) {
  RunConfig config;
  config.seed = doc.value("seed", config.seed);
  config.stride = doc.value("stride", config.stride);
  if (doc.contains("dedup_mode")) {
    auto mode = dedup_mode_from_text(doc["dedup_mode"].get<std::string>());
    if (!mode) {
      throw ConfigError("unknown dedup_mode '" +
                        doc["dedup_mode"].get<std::string>() + "'");
    }
    config.dedup_mode = *mode;
  }
  config.class_min = doc.value("class_min", config.class_min);
  config.class_max = doc.value("class_max", config.class_max);
  config.concepts_per_class = doc.value("concepts_per_class", config.concepts_per_class);
  config.prompts_per_concept =
      doc.value("prompts_per_concept", config.prompts_per_concept);
  config.learner = doc.value("learner", config.learner);
  config.endpoint_config_path = doc.value("endpoint_config", config.endpoint_config_path);
  config.class_size_cap = doc.value("class_size_cap", config.class_size_cap);
  if (doc.contains("abstain_policy")) {
    const std::string policy = doc["abstain_policy"].get<std::string>();
    if (policy == "incorrect") {
      config.abstain_policy = AbstainPolicy::CountIncorrect;
    } else if (policy == "excluded") {
      config.abstain_policy = AbstainPolicy::Exclude;
    } else {
      throw ConfigError("unknown abstain_policy '" + policy + "'");
    }
  }
  config.threads = doc.value("threads", config.threads);
  config.max_in_flight = doc.value("max_in_flight", config.max_in_flight);
  config.preset = doc.value("preset", config.preset);
  return config;
}

RunConfig load_run_config(const fs::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  return config_from_json(doc);
}

std::uint64_t example_seed(const RunConfig& config, std::uint64_t concept_id) {
  return derive_seed(config.seed, "examples", concept_id);
}

std::uint64_t prompt_set_seed(const RunConfig& config, std::uint64_t concept_id) {
  return derive_seed(config.seed, "prompt-set", concept_id);
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

namespace {

fs::path manifest_path(const RunConfig& config) {
  return config.out_dir / "manifest.json";
}

nlohmann::json load_manifest(const RunConfig& config) {
  const fs::path path = manifest_path(config);
  if (!fs::exists(path)) return nlohmann::json{{"stages", nlohmann::json::object()}};
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.contains("stages")) {
    return nlohmann::json{{"stages", nlohmann::json::object()}};
  }
  return doc;
}

void save_manifest(const RunConfig& config, const nlohmann::json& manifest) {
  atomic_write_file(manifest_path(config), manifest.dump(2) + "\n");
}

std::string stage_fingerprint(const std::string& stage,
                              const nlohmann::json& inputs_config,
                              const std::vector<fs::path>& input_files,
                              const RunConfig& config) {
  std::uint64_t h = fnv1a64(stage);
  h = fnv1a64(inputs_config.dump(), h);
  for (const fs::path& file : input_files) {
    h = fnv1a64(fs::relative(file, config.out_dir).generic_string(), h);
    h = fnv1a64_mix(hash_file(file), h);
  }
  return to_hex_u64(h);
}

bool stage_is_current(const nlohmann::json& manifest, const std::string& stage,
                      const std::string& fingerprint, const RunConfig& config) {
  if (!manifest["stages"].contains(stage)) return false;
  const auto& entry = manifest["stages"][stage];
  if (entry.value("fingerprint", "") != fingerprint) return false;
  for (const auto& [rel, hash] : entry["outputs"].items()) {
    const fs::path path = config.out_dir / rel;
    if (!fs::exists(path)) return false;
    if (to_hex_u64(hash_file(path)) != hash.get<std::string>()) return false;
  }
  return true;
}

void commit_stage(nlohmann::json& manifest, const std::string& stage,
                  const std::string& fingerprint,
                  const std::vector<fs::path>& outputs, const RunConfig& config) {
  nlohmann::json entry;
  entry["fingerprint"] = fingerprint;
  entry["outputs"] = nlohmann::json::object();
  for (const fs::path& path : outputs) {
    entry["outputs"][fs::relative(path, config.out_dir).generic_string()] =
        to_hex_u64(hash_file(path));
  }
  manifest["stages"][stage] = std::move(entry);
  save_manifest(config, manifest);
}

void write_run_config(const RunConfig& config) {
  fs::create_directories(config.out_dir);
  atomic_write_file(config.out_dir / "run_config.json",
                    config_to_json(config).dump(2) + "\n");
}

fs::path enumerated_class_path(const RunConfig& config, int k) {
  return config.out_dir / "enumerated" /
         ("concepts_class" + std::to_string(k) + ".jsonl");
}

fs::path deduped_class_path(const RunConfig& config, int k) {
  return config.out_dir / "deduped" /
         ("concepts_class" + std::to_string(k) + ".jsonl");
}

std::vector<fs::path> class_paths(const RunConfig& config,
                                  const std::string& stage_dir) {
  std::vector<fs::path> paths;
  for (int k = config.class_min; k <= config.class_max; ++k) {
    paths.push_back(config.out_dir / stage_dir /
                    ("concepts_class" + std::to_string(k) + ".jsonl"));
  }
  return paths;
}

std::string concept_line(const Concept& c, int k, bool with_signature) {
  nlohmann::json line;
  line["id"] = c.id_hex();
  line["class"] = k;
  line["expr_text"] = c.text;
  line["status"] = std::string(concept_status_text(c.status));
  if (with_signature && c.signature) line["signature"] = c.signature->to_hex();
  return line.dump();
}

}  // namespace

// ---------------------------------------------------------------------------
// Artifact readers
// ---------------------------------------------------------------------------

std::vector<ConceptClass> load_concept_classes(const RunConfig& config,
                                               const std::string& stage_dir) {
  std::vector<ConceptClass> classes;
  for (int k = config.class_min; k <= config.class_max; ++k) {
    const fs::path path = config.out_dir / stage_dir /
                          ("concepts_class" + std::to_string(k) + ".jsonl");
    ConceptClass cls;
    cls.k = k;
    cls.generation_seed = config.seed;
    for (const std::string& raw : read_lines(path)) {
      nlohmann::json line = nlohmann::json::parse(raw);
      Concept c;
      c.text = line["expr_text"].get<std::string>();
      c.expr = parse_expression(c.text);
      c.complexity = line["class"].get<int>();
      c.id = std::stoull(line["id"].get<std::string>(), nullptr, 16);
      if (c.id != concept_id_for(c.text)) {
        throw IOError("concept id mismatch in " + path.string() + " for " + c.text);
      }
      if (c.complexity != k || count_operators(*c.expr) != k) {
        throw IOError("complexity mismatch in " + path.string() + " for " + c.text);
      }
      auto status = concept_status_from_text(line["status"].get<std::string>());
      if (!status) {
        throw IOError("unknown status in " + path.string() + ": " + raw);
      }
      c.status = *status;
      cls.concepts.push_back(std::move(c));
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<Concept> load_sampled_concepts(const RunConfig& config) {
  const fs::path path = config.out_dir / "prompts" / "sampled_concepts.json";
  nlohmann::json doc = nlohmann::json::parse(read_file(path));

  std::vector<Concept> sampled;
  for (const auto& entry : doc["classes"]) {
    const int k = entry["class"].get<int>();
    for (const auto& item : entry["concepts"]) {
      Concept c;
      c.text = item["expr_text"].get<std::string>();
      c.expr = parse_expression(c.text);
      c.id = std::stoull(item["id"].get<std::string>(), nullptr, 16);
      c.complexity = k;
      c.status = ConceptStatus::Retained;
      sampled.push_back(std::move(c));
    }
  }
  // Deterministic order: by class, then canonical text.
  std::sort(sampled.begin(), sampled.end(), [](const Concept& a, const Concept& b) {
    if (a.complexity != b.complexity) return a.complexity < b.complexity;
    return a.text < b.text;
  });
  return sampled;
}

std::vector<EvalRecord> load_eval_records(const fs::path& file) {
  std::vector<EvalRecord> records;
  for (const std::string& raw : read_lines(file)) {
    nlohmann::json line = nlohmann::json::parse(raw);
    EvalRecord record;
    record.concept_id = line["concept_id"].get<std::string>();
    record.complexity = line["complexity"].get<int>();
    record.prompt_index = line["prompt_index"].get<std::size_t>();
    record.answer = line["answer"].get<bool>();
    const std::string answer_text = line["prediction"].get<std::string>();
    if (answer_text == "yes") {
      record.prediction.answer = Prediction::Answer::Yes;
    } else if (answer_text == "no") {
      record.prediction.answer = Prediction::Answer::No;
    } else {
      record.prediction.answer = Prediction::Answer::Abstain;
    }
    record.prediction.raw_text = line.value("raw_text", "");
    if (line.contains("correct") && !line["correct"].is_null()) {
      record.correct = line["correct"].get<bool>();
    }
    record.error = line.value("error", "");
    records.push_back(std::move(record));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

StageResult run_enumerate_stage(const RunConfig& config) {
  validate_config(config);
  write_run_config(config);
  nlohmann::json manifest = load_manifest(config);

  const nlohmann::json stage_config = {{"stride", config.stride},
                                       {"class_min", config.class_min},
                                       {"class_max", config.class_max},
                                       {"class_size_cap", config.class_size_cap}};
  const std::string fingerprint =
      stage_fingerprint("enumerate", stage_config, {}, config);
  if (stage_is_current(manifest, "enumerate", fingerprint, config)) {
    return {"enumerate", true, "up to date"};
  }

  fs::create_directories(config.out_dir / "enumerated");
  EnumerationOptions options;
  options.stride_high = config.stride;
  options.class_size_cap = config.class_size_cap;

  std::vector<fs::path> outputs;
  std::size_t total = 0;
  for (int k = config.class_min; k <= config.class_max; ++k) {
    ConceptClass cls = enumerate_class(k, options);
    cls.generation_seed = config.seed;
    std::string body;
    for (const Concept& c : cls.concepts) {
      body += concept_line(c, k, false);
      body.push_back('\n');
    }
    const fs::path path = enumerated_class_path(config, k);
    atomic_write_file(path, body);
    outputs.push_back(path);
    total += cls.concepts.size();
  }
  commit_stage(manifest, "enumerate", fingerprint, outputs, config);
  return {"enumerate", false,
          std::to_string(total) + " concepts across classes " +
              std::to_string(config.class_min) + ".." +
              std::to_string(config.class_max)};
}

StageResult run_dedup_stage(const RunConfig& config) {
  validate_config(config);
  write_run_config(config);
  nlohmann::json manifest = load_manifest(config);

  const nlohmann::json stage_config = {
      {"dedup_mode", std::string(dedup_mode_text(config.dedup_mode))}};
  const std::string fingerprint = stage_fingerprint(
      "dedup", stage_config, class_paths(config, "enumerated"), config);
  if (stage_is_current(manifest, "dedup", fingerprint, config)) {
    return {"dedup", true, "up to date"};
  }

  std::vector<ConceptClass> classes = load_concept_classes(config, "enumerated");
  fs::create_directories(config.out_dir / "deduped");

  std::vector<DedupAuditEntry> audit;
  std::vector<const ConceptClass*> previous;
  for (ConceptClass& cls : classes) {
    compute_signatures(cls, config.threads);
    dedup_within_class(cls, &audit);
    dedup_across_classes(cls, previous, config.dedup_mode, config.threads, &audit);
    previous.push_back(&cls);
  }
  for (ConceptClass& cls : classes) {
    filter_eligibility(cls, config.threads, &audit);
  }

  std::vector<fs::path> outputs;
  std::size_t retained = 0;
  for (ConceptClass& cls : classes) {
    std::string body;
    for (const Concept& c : cls.concepts) {
      body += concept_line(c, cls.k, true);
      body.push_back('\n');
      retained += c.status == ConceptStatus::Retained;
    }
    const fs::path path = deduped_class_path(config, cls.k);
    atomic_write_file(path, body);
    outputs.push_back(path);
  }

  std::string audit_body;
  for (const DedupAuditEntry& entry : audit) {
    nlohmann::json line;
    line["discarded_id"] = entry.discarded_id;
    line["kept_id"] =
        entry.kept_id.empty() ? nlohmann::json() : nlohmann::json(entry.kept_id);
    line["distance"] =
        entry.distance < 0 ? nlohmann::json() : nlohmann::json(entry.distance);
    line["reason"] = entry.reason;
    audit_body += line.dump();
    audit_body.push_back('\n');
  }
  const fs::path audit_path = config.out_dir / "deduped" / "dedup_audit.jsonl";
  atomic_write_file(audit_path, audit_body);
  outputs.push_back(audit_path);

  commit_stage(manifest, "dedup", fingerprint, outputs, config);
  return {"dedup", false,
          std::to_string(retained) + " retained, " + std::to_string(audit.size()) +
              " discards"};
}

namespace {

// Retained concepts that can also hold out an unseen question on both
// sides; the sampling pool for the prompts stage.
std::vector<const Concept*> promptable_concepts(const ConceptClass& cls,
                                                std::size_t* infeasible) {
  std::vector<const Concept*> eligible;
  for (const Concept* c : cls.retained()) {
    if (holdout_feasible(*c->expr)) {
      eligible.push_back(c);
    } else if (infeasible != nullptr) {
      ++*infeasible;
    }
  }
  return eligible;
}

}  // namespace

StageResult run_prompts_stage(const RunConfig& config) {
  validate_config(config);
  write_run_config(config);
  nlohmann::json manifest = load_manifest(config);

  const nlohmann::json stage_config = {
      {"seed", config.seed},
      {"concepts_per_class", config.concepts_per_class},
      {"prompts_per_concept", config.prompts_per_concept}};
  const std::string fingerprint = stage_fingerprint(
      "prompts", stage_config, class_paths(config, "deduped"), config);
  if (stage_is_current(manifest, "prompts", fingerprint, config)) {
    return {"prompts", true, "up to date"};
  }

  std::vector<ConceptClass> classes = load_concept_classes(config, "deduped");
  fs::create_directories(config.out_dir / "prompts");

  nlohmann::json sampled_doc;
  sampled_doc["seed"] = config.seed;
  sampled_doc["classes"] = nlohmann::json::array();

  nlohmann::json meta;
  meta["in_context_per_label"] = kInContextPerLabel;
  meta["concepts"] = nlohmann::json::object();

  std::vector<fs::path> outputs;
  std::size_t prompt_count = 0;
  for (ConceptClass& cls : classes) {
    std::size_t infeasible = 0;
    std::vector<const Concept*> pool = promptable_concepts(cls, &infeasible);
    if (pool.size() < config.concepts_per_class) {
      throw InsufficientConcepts(
          "class " + std::to_string(cls.k) + " has only " +
          std::to_string(pool.size()) + " promptable concepts; " +
          std::to_string(config.concepts_per_class) + " requested");
    }
    const std::uint64_t sample_seed = derive_seed(config.seed, "sample", cls.k);
    SeededRng rng(sample_seed);
    std::vector<std::size_t> picks =
        rng.sample_indices(pool.size(), config.concepts_per_class);
    std::sort(picks.begin(), picks.end());

    nlohmann::json class_entry;
    class_entry["class"] = cls.k;
    class_entry["sample_seed"] = sample_seed;
    class_entry["infeasible_excluded"] = infeasible;
    class_entry["concepts"] = nlohmann::json::array();

    for (std::size_t pick : picks) {
      const Concept& c = *pool[pick];
      class_entry["concepts"].push_back(
          {{"id", c.id_hex()}, {"expr_text", c.text}});

      ExamplePool examples = generate_examples(*c.expr, example_seed(config, c.id));
      PromptSet set = build_prompt_set(c, examples, config.prompts_per_concept,
                                       prompt_set_seed(config, c.id));
      std::string body;
      for (std::size_t i = 0; i < set.prompts.size(); ++i) {
        const Prompt& prompt = set.prompts[i];
        nlohmann::json line;
        line["concept_id"] = prompt.concept_id;
        line["prompt_index"] = i;
        line["text"] = render_prompt(prompt);
        line["answer"] = prompt.answer;
        line["question_total"] = prompt.question.total;
        line["question_num"] = prompt.question.num;
        line["seed"] = prompt.render_seed;
        body += line.dump();
        body.push_back('\n');
      }
      const fs::path path =
          config.out_dir / "prompts" / ("prompts_" + c.id_hex() + ".jsonl");
      atomic_write_file(path, body);
      outputs.push_back(path);
      prompt_count += set.prompts.size();

      meta["concepts"][c.id_hex()] = {
          {"class", cls.k},
          {"positives", examples.positives.size()},
          {"negatives", examples.negatives.size()},
          {"reused_true_questions", set.reused_true_questions},
          {"reused_false_questions", set.reused_false_questions}};
    }
    sampled_doc["classes"].push_back(std::move(class_entry));
  }

  const fs::path sampled_path = config.out_dir / "prompts" / "sampled_concepts.json";
  atomic_write_file(sampled_path, sampled_doc.dump(2) + "\n");
  outputs.push_back(sampled_path);
  const fs::path meta_path = config.out_dir / "prompts" / "prompt_meta.json";
  atomic_write_file(meta_path, meta.dump(2) + "\n");
  outputs.push_back(meta_path);

  commit_stage(manifest, "prompts", fingerprint, outputs, config);
  return {"prompts", false, std::to_string(prompt_count) + " prompts emitted"};
}

namespace {

std::vector<EvalRecord> evaluate_with_reference_learner(
    const RunConfig& config, const Concept& c, const HypothesisSpace* space) {
  ExamplePool pool = generate_examples(*c.expr, example_seed(config, c.id));
  PromptSet set =
      build_prompt_set(c, pool, config.prompts_per_concept, prompt_set_seed(config, c.id));

  // Drift guard: the artifact on disk must match what we regenerate.
  const fs::path prompts_path =
      config.out_dir / "prompts" / ("prompts_" + c.id_hex() + ".jsonl");
  {
    const std::vector<std::string> lines = read_lines(prompts_path);
    if (lines.size() != set.prompts.size()) {
      throw IOError("prompt artifact " + prompts_path.string() +
                    " does not match the configured prompt count");
    }
    nlohmann::json first = nlohmann::json::parse(lines.front());
    if (first["text"].get<std::string>() != render_prompt(set.prompts.front())) {
      throw IOError("prompt artifact " + prompts_path.string() +
                    " was generated with a different seed or configuration");
    }
  }

  std::vector<EvalRecord> records(set.prompts.size());
  parallel_chunks(set.prompts.size(), config.threads,
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const Prompt& prompt = set.prompts[i];
                      const LearnerQuery query = make_query(prompt);
                      Prediction prediction;
                      if (space != nullptr) {
                        prediction = mdl_predict(query, *space);
                      } else {
                        prediction = majority_predict(
                            query, derive_seed(prompt_set_seed(config, c.id),
                                               "majority", i));
                      }
                      records[i] = score_record(c.id_hex(), c.complexity, i,
                                                prompt.answer, std::move(prediction));
                    }
                  });
  return records;
}

std::string record_line(const EvalRecord& record) {
  nlohmann::json line;
  line["concept_id"] = record.concept_id;
  line["complexity"] = record.complexity;
  line["prompt_index"] = record.prompt_index;
  line["answer"] = record.answer;
  line["prediction"] = std::string(prediction_answer_text(record.prediction.answer));
  if (!record.prediction.raw_text.empty()) {
    line["raw_text"] = record.prediction.raw_text;
  }
  line["correct"] =
      record.correct ? nlohmann::json(*record.correct) : nlohmann::json();
  if (!record.error.empty()) line["error"] = record.error;
  return line.dump();
}

}  // namespace

StageResult run_evaluate_stage(const RunConfig& config) {
  validate_config(config);
  write_run_config(config);
  nlohmann::json manifest = load_manifest(config);

  std::vector<fs::path> inputs = {config.out_dir / "prompts" /
                                  "sampled_concepts.json"};
  if (config.learner == "mdl") {
    for (const fs::path& path : class_paths(config, "deduped")) inputs.push_back(path);
  }
  nlohmann::json stage_config = {{"seed", config.seed},
                                 {"learner", config.learner},
                                 {"prompts_per_concept", config.prompts_per_concept}};
  if (config.learner == "remote") {
    const EndpointConfig endpoint = load_endpoint_config(config.endpoint_config_path);
    stage_config["endpoint"] = {{"base_url", endpoint.base_url},
                                {"model", endpoint.model}};
  }
  const std::string fingerprint =
      stage_fingerprint("evaluate", stage_config, inputs, config);
  if (stage_is_current(manifest, "evaluate", fingerprint, config)) {
    return {"evaluate", true, "up to date"};
  }

  const std::vector<Concept> sampled = load_sampled_concepts(config);

  HypothesisSpace space;
  if (config.learner == "mdl") {
    space = HypothesisSpace::from_classes(load_concept_classes(config, "deduped"));
  }

  std::string body;
  std::size_t evaluated = 0;
  for (const Concept& c : sampled) {
    std::vector<EvalRecord> records;
    if (config.learner == "remote") {
      const EndpointConfig endpoint = load_endpoint_config(config.endpoint_config_path);
      ExamplePool pool = generate_examples(*c.expr, example_seed(config, c.id));
      PromptSet set = build_prompt_set(c, pool, config.prompts_per_concept,
                                       prompt_set_seed(config, c.id));
      records = run_batch(set, c.complexity, endpoint, config.max_in_flight);
    } else {
      records = evaluate_with_reference_learner(
          config, c, config.learner == "mdl" ? &space : nullptr);
    }
    for (const EvalRecord& record : records) {
      body += record_line(record);
      body.push_back('\n');
      evaluated += record.evaluated();
    }
  }

  fs::create_directories(config.out_dir / "eval");
  const fs::path records_path =
      config.out_dir / "eval" / ("records_" + config.learner + ".jsonl");
  atomic_write_file(records_path, body);
  commit_stage(manifest, "evaluate", fingerprint, {records_path}, config);
  return {"evaluate", false,
          std::to_string(evaluated) + " prompts evaluated with " + config.learner};
}

StageResult run_stats_stage(const RunConfig& config) {
  validate_config(config);
  write_run_config(config);
  nlohmann::json manifest = load_manifest(config);

  std::vector<fs::path> record_files;
  const fs::path eval_dir = config.out_dir / "eval";
  if (fs::exists(eval_dir)) {
    for (const auto& entry : fs::directory_iterator(eval_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.starts_with("records_") && name.ends_with(".jsonl")) {
        record_files.push_back(entry.path());
      }
    }
  }
  std::sort(record_files.begin(), record_files.end());

  const nlohmann::json stage_config = {
      {"abstain_policy", config.abstain_policy == AbstainPolicy::CountIncorrect
                             ? "incorrect"
                             : "excluded"}};
  const std::string fingerprint =
      stage_fingerprint("stats", stage_config, record_files, config);
  if (stage_is_current(manifest, "stats", fingerprint, config)) {
    return {"stats", true, "up to date"};
  }

  std::map<std::string, LearnerReport> reports;
  for (const fs::path& file : record_files) {
    std::string learner = file.filename().string();
    learner = learner.substr(8, learner.size() - 8 - 6);  // records_<name>.jsonl
    const std::vector<EvalRecord> records = load_eval_records(file);
    reports[learner] = build_learner_report(records, config.abstain_policy);
  }

  const fs::path stats_dir = config.out_dir / "stats";
  emit_report(reports, stats_dir, config_to_json(config));

  std::vector<fs::path> outputs = {
      stats_dir / "results.csv", stats_dir / "class_means.csv",
      stats_dir / "summary.json", stats_dir / "table.txt"};
  commit_stage(manifest, "stats", fingerprint, outputs, config);
  return {"stats", false,
          std::to_string(reports.size()) + " learner report(s) emitted"};
}

std::vector<StageResult> run_all_stages(const RunConfig& config) {
  std::vector<StageResult> results;
  results.push_back(run_enumerate_stage(config));
  results.push_back(run_dedup_stage(config));
  results.push_back(run_prompts_stage(config));
  results.push_back(run_evaluate_stage(config));
  results.push_back(run_stats_stage(config));
  return results;
}

}  // namespace lotbench
