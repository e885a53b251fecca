// Acceptance suite. Runs the desk-scale pipeline through the real CLI and
// checks every acceptance criterion at its stated tolerance, printing one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lotbench/dedup.hpp"
#include "lotbench/io_util.hpp"
#include "lotbench/llm_client.hpp"
#include "lotbench/pipeline.hpp"
#include "lotbench/promptgen.hpp"
#include "lotbench/rng.hpp"
#include "lotbench/stats.hpp"
#include "mock_endpoint.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace lotbench;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

RunConfig desk_config(const fs::path& out_dir) {
  RunConfig config;
  apply_preset(config, "desk");
  config.seed = 7;
  config.learner = "mdl";
  config.out_dir = out_dir;
  return config;
}

bool run_cli(const std::string& cli, const fs::path& out_dir) {
  const std::string command = cli + " all --preset desk --seed 7 --out-dir " +
                              out_dir.string() + " > /dev/null";
  return std::system(command.c_str()) == 0;
}

std::map<std::string, std::uint64_t> tree_hashes(const fs::path& root) {
  std::map<std::string, std::uint64_t> hashes;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    hashes[fs::relative(entry.path(), root).generic_string()] =
        hash_file(entry.path());
  }
  return hashes;
}

// --------------------------------------------------------------------------
// Criterion 1: evaluator vs naive oracle, 50 concepts per class, all pairs.
// --------------------------------------------------------------------------
void criterion_1(const RunConfig& config) {
  Timer timer;
  std::size_t checked_concepts = 0;
  std::size_t mismatches = 0;
  try {
    const auto classes = load_concept_classes(config, "enumerated");
    SeededRng rng(2027);
    for (const auto& cls : classes) {
      std::vector<std::size_t> picks =
          rng.sample_indices(cls.concepts.size(), 50);
      for (std::size_t index : picks) {
        const Concept& c = cls.concepts[index];
        for (int total = kTotalMin; total <= kTotalMax; ++total) {
          for (int num = 0; num <= total; ++num) {
            mismatches += evaluate(*c.expr, total, num) !=
                          oracles::naive_eval(*c.expr, total, num);
          }
        }
        ++checked_concepts;
      }
    }
  } catch (const std::exception& e) {
    report(1, false, std::string("semantic oracle equivalence: ") + e.what());
    return;
  }
  const double elapsed = timer.seconds();
  const bool pass = mismatches == 0 && elapsed < 60.0;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "semantic oracle equivalence: %zu concepts x 5136 pairs, "
                "%zu mismatches (exact), %.1fs (< 60s)",
                checked_concepts, mismatches, elapsed);
  report(1, pass, detail);
}

// --------------------------------------------------------------------------
// Criterion 2: exhaustive dedup soundness scan over the retained sets.
// --------------------------------------------------------------------------
void criterion_2(const RunConfig& config) {
  Timer timer;
  std::size_t duplicate_violations = 0;
  std::size_t cross_violations = 0;
  std::size_t retained_count = 0;
  try {
    auto classes = load_concept_classes(config, "deduped");
    for (auto& cls : classes) compute_signatures(cls, config.threads);

    std::vector<std::vector<const Concept*>> retained;
    for (const auto& cls : classes) {
      retained.push_back(cls.retained());
      retained_count += retained.back().size();
    }

    // Within-class rule: no two retained members share a signature. Equality
    // grouping by hash is equivalent to the exhaustive distance-0 scan.
    for (const auto& members : retained) {
      std::unordered_map<MeaningSignature, std::size_t, MeaningSignature::Hash>
          groups;
      for (const Concept* c : members) {
        duplicate_violations += !groups.emplace(*c->signature, 1).second;
      }
    }

    // Cross-class rule: every retained pair from different classes is at
    // distance >= 3 (summed mode), checked pairwise and exhaustively.
    for (std::size_t hi = 1; hi < retained.size(); ++hi) {
      for (std::size_t lo = 0; lo < hi; ++lo) {
        for (const Concept* high : retained[hi]) {
          for (const Concept* low : retained[lo]) {
            cross_violations += signatures_similar(*high->signature,
                                                   *low->signature,
                                                   config.dedup_mode);
          }
        }
      }
    }
  } catch (const std::exception& e) {
    report(2, false, std::string("dedup soundness: ") + e.what());
    return;
  }
  const double elapsed = timer.seconds();
  const bool pass =
      duplicate_violations == 0 && cross_violations == 0 && elapsed < 300.0;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "dedup soundness: %zu retained, %zu duplicate and %zu "
                "cross-class violations (exact), %.1fs (< 300s)",
                retained_count, duplicate_violations, cross_violations, elapsed);
  report(2, pass, detail);
}

// --------------------------------------------------------------------------
// Criterion 3: prompt protocol over every emitted prompt, plus full-size
// 1000-prompt sets with the exact 500/500 answer balance.
// --------------------------------------------------------------------------
int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

bool prompt_text_ok(const std::string& text) {
  if (text.rfind("Let us define a new word, bnik.\n", 0) != 0) return false;
  if (count_occurrences(text, "? Yes.") != 10) return false;
  if (count_occurrences(text, "? No.") != 10) return false;
  if (text.empty() || text.back() != '?') return false;

  // The question pair must be unseen among the in-context examples.
  const auto question = mock::question_pair_of(text);
  int seen = 0;
  std::size_t pos = 0;
  while ((pos = text.find("There are ", pos)) != std::string::npos) {
    const std::string rest = text.substr(pos);
    seen += mock::question_pair_of("There are " +
                                   rest.substr(10, rest.find('\n') - 10)) ==
            question;
    ++pos;
  }
  return seen == 1;  // only the question's own statement line matches
}

void criterion_3(const RunConfig& config) {
  Timer timer;
  std::size_t prompts_checked = 0;
  std::size_t protocol_violations = 0;
  std::size_t balance_violations = 0;
  bool full_sets_ok = true;
  std::string failure;
  try {
    const auto sampled = load_sampled_concepts(config);
    for (const auto& sc : sampled) {
      const fs::path path =
          config.out_dir / "prompts" / ("prompts_" + sc.id_hex() + ".jsonl");
      std::size_t true_answers = 0;
      const auto lines = read_lines(path);
      for (const std::string& raw : lines) {
        const auto line = nlohmann::json::parse(raw);
        protocol_violations += !prompt_text_ok(line["text"].get<std::string>());
        true_answers += line["answer"].get<bool>();
        ++prompts_checked;
      }
      balance_violations += true_answers * 2 != lines.size();
    }

    // Full-count prompt sets: exactly 500 true and 500 false answers.
    for (const char* text : {"(x < 1/2 * n)", "(x < 1)"}) {
      Concept c;
      c.text = text;
      c.expr = parse_expression(text);
      c.id = concept_id_for(c.text);
      c.complexity = count_operators(*c.expr);
      ExamplePool pool = generate_examples(*c.expr, example_seed(config, c.id));
      PromptSet set = build_prompt_set(c, pool, 1000, prompt_set_seed(config, c.id));
      std::size_t true_answers = 0;
      std::size_t bad = 0;
      for (const Prompt& prompt : set.prompts) {
        true_answers += prompt.answer;
        bad += !prompt_text_ok(render_prompt(prompt));
      }
      full_sets_ok = full_sets_ok && set.prompts.size() == 1000 &&
                     true_answers == 500 && bad == 0;
      // (x < 1) has only 96 positives, so its 500 true questions must reuse.
      if (std::string(text) == "(x < 1)") {
        full_sets_ok = full_sets_ok && set.reused_true_questions &&
                       !set.reused_false_questions;
      }
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }
  const bool pass = failure.empty() && protocol_violations == 0 &&
                    balance_violations == 0 && full_sets_ok;
  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "prompt protocol: %zu desk prompts checked, %zu protocol and "
                "%zu balance violations; 1000-prompt sets balanced 500/500: "
                "%s%s%s (exact), %.1fs",
                prompts_checked, protocol_violations, balance_violations,
                full_sets_ok ? "yes" : "NO", failure.empty() ? "" : "; error: ",
                failure.c_str(), timer.seconds());
  report(3, pass, detail);
}

// --------------------------------------------------------------------------
// Criterion 4: byte-exact rendering of the worked example.
// --------------------------------------------------------------------------
void criterion_4() {
  const std::array<std::tuple<int, int, const char*, const char*, const char*, bool>,
                   10>
      rows = {{{17, 13, "Alice", "has", "plants", false},
               {99, 7, "Bob", "has", "trees", true},
               {40, 36, "Alice", "owns", "tables", false},
               {72, 9, "Bob", "owns", "chairs", true},
               {82, 47, "Bob", "has", "chairs", false},
               {100, 70, "Alice", "owns", "plants", false},
               {56, 3, "Alice", "owns", "chairs", true},
               {56, 37, "Bob", "owns", "birds", false},
               {84, 12, "Alice", "owns", "tables", true},
               {69, 32, "Alice", "owns", "bikes", true}}};
  auto subject_index = [](const std::string& s) {
    return static_cast<std::uint8_t>(s == "Bob" ? 1 : 0);
  };
  auto predicate_index = [](const std::string& p) {
    return static_cast<std::uint8_t>(p == "owns" ? 1 : 0);
  };
  auto object_index = [](const std::string& o) {
    for (std::size_t i = 0; i < kObjects.size(); ++i) {
      if (kObjects[i] == o) return static_cast<std::uint8_t>(i);
    }
    return static_cast<std::uint8_t>(0);
  };

  Prompt prompt;
  prompt.concept_id = "worked-example";
  for (const auto& [total, num, s, p, o, label] : rows) {
    prompt.examples.push_back(LabeledExample{
        total, num, subject_index(s), predicate_index(p), object_index(o), label});
  }
  prompt.question =
      LabeledExample{99, 3, subject_index("Alice"), predicate_index("has"),
                     object_index("apples"), true};
  prompt.answer = true;

  const std::string expected =
      "Let us define a new word, bnik.\n"
      "There are 17 plants. Alice has 13 of the plants.\n"
      "Does Alice have bnik of the plants? No.\n"
      "There are 99 trees. Bob has 7 of the trees.\n"
      "Does Bob have bnik of the trees? Yes.\n"
      "There are 40 tables. Alice owns 36 of the tables.\n"
      "Does Alice own bnik of the tables? No.\n"
      "There are 72 chairs. Bob owns 9 of the chairs.\n"
      "Does Bob own bnik of the chairs? Yes.\n"
      "There are 82 chairs. Bob has 47 of the chairs.\n"
      "Does Bob have bnik of the chairs? No.\n"
      "There are 100 plants. Alice owns 70 of the plants.\n"
      "Does Alice own bnik of the plants? No.\n"
      "There are 56 chairs. Alice owns 3 of the chairs.\n"
      "Does Alice own bnik of the chairs? Yes.\n"
      "There are 56 birds. Bob owns 37 of the birds.\n"
      "Does Bob own bnik of the birds? No.\n"
      "There are 84 tables. Alice owns 12 of the tables.\n"
      "Does Alice own bnik of the tables? Yes.\n"
      "There are 69 bikes. Alice owns 32 of the bikes.\n"
      "Does Alice own bnik of the bikes? Yes.\n"
      "There are 99 apples. Alice has 3 of the apples.\n"
      "Does Alice have bnik of the apples?";

  const std::string rendered = render_prompt(prompt);
  const bool pass = rendered == expected;
  report(4, pass,
         pass ? "template bit-exactness: worked example reproduced byte for byte"
              : "template bit-exactness: rendering differs from the reference text");
}

// --------------------------------------------------------------------------
// Criterion 5: correlation statistics anchors and the quadrature oracle.
// --------------------------------------------------------------------------
void criterion_5() {
  auto p_for_r = [](double r) {
    const double t = r * std::sqrt(3.0 / (1.0 - r * r));
    return student_t_two_sided_p(t, 3);
  };
  const double p1 = p_for_r(-0.961);
  const double p2 = p_for_r(-0.854);
  const bool anchors_ok =
      std::fabs(p1 - 0.009) < 0.005 && std::fabs(p2 - 0.065) < 0.005;

  double max_error = 0.0;
  for (int dof : {2, 3, 4, 6, 10, 28}) {
    for (double r : {-0.99, -0.961, -0.9, -0.854, -0.5, -0.2, 0.1, 0.6, 0.95}) {
      const double t = r * std::sqrt(dof / (1.0 - r * r));
      const double error = std::fabs(student_t_two_sided_p(t, dof) -
                                     oracles::t_two_sided_p_quadrature(t, dof));
      max_error = std::max(max_error, error);
    }
  }
  const bool quadrature_ok = max_error <= 1e-6;

  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "statistics anchors: p(-0.961)=%.4f vs 0.009, p(-0.854)=%.4f vs "
                "0.065 (two decimals); max |p - quadrature| = %.2e (<= 1e-6)",
                p1, p2, max_error);
  report(5, anchors_ok && quadrature_ok, detail);
}

// --------------------------------------------------------------------------
// Criterion 6: simplicity bias of the MDL learner on the desk preset.
// --------------------------------------------------------------------------
void criterion_6(const RunConfig& config, double pipeline_seconds) {
  bool pass = false;
  double r = 0.0;
  double slope = 0.0;
  double class1 = 0.0;
  std::string failure;
  try {
    const auto summary = nlohmann::json::parse(
        read_file(config.out_dir / "stats" / "summary.json"));
    const auto& block = summary.at("learners").at("mdl");
    r = block.at("pearson_r").get<double>();
    slope = block.at("slope").get<double>();
    for (const auto& entry : block.at("class_means")) {
      if (entry.at("class").get<int>() == 1) {
        class1 = entry.at("mean_accuracy").get<double>();
      }
    }
    pass = r < -0.8 && slope < 0.0 && class1 >= 0.95 && pipeline_seconds < 1800.0;
  } catch (const std::exception& e) {
    failure = e.what();
  }
  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "simplicity bias (mdl, desk preset): pearson r = %.3f (< -0.8), "
                "slope = %.4f (< 0), class-1 accuracy = %.3f (>= 0.95), "
                "pipeline %.0fs (< 1800s)%s%s",
                r, slope, class1, pipeline_seconds,
                failure.empty() ? "" : "; error: ", failure.c_str());
  report(6, pass && failure.empty(), detail);
}

// --------------------------------------------------------------------------
// Criterion 7: remote client contract against a scripted endpoint.
// --------------------------------------------------------------------------
void criterion_7() {
  bool pass = true;
  std::string note;
  try {
    Concept c;
    c.text = "(x < 1/2 * n)";
    c.expr = parse_expression(c.text);
    c.id = concept_id_for(c.text);
    c.complexity = 2;
    ExamplePool pool = generate_examples(*c.expr, 5);
    PromptSet set = build_prompt_set(c, pool, 12, 9);

    const auto fail_pair = std::pair<int, int>{set.prompts[0].question.total,
                                               set.prompts[0].question.num};
    const auto garbage_pair = std::pair<int, int>{set.prompts[1].question.total,
                                                  set.prompts[1].question.num};
    const auto flaky_pair = std::pair<int, int>{set.prompts[2].question.total,
                                                set.prompts[2].question.num};

    std::atomic<int> flaky_hits{0};
    auto script = [&](const nlohmann::json& body, int, httplib::Response& res) {
      const auto q = mock::question_pair_of(
          body["messages"][0]["content"].get<std::string>());
      if (q == fail_pair) {
        res.status = 500;
      } else if (q == garbage_pair) {
        mock::MockEndpoint::reply(res, "cannot tell");
      } else if (q == flaky_pair && ++flaky_hits <= 2) {
        res.status = 503;
      } else {
        // Fixed script: yes iff the question num is even.
        mock::MockEndpoint::reply(res, q.second % 2 == 0 ? "Yes." : "No.");
      }
    };

    mock::MockEndpoint endpoint(script);
    const auto sequential = run_batch(set, 2, endpoint.config(), 1);

    if (sequential.size() != set.prompts.size()) {
      pass = false;
      note = "wrong record count";
    }
    for (std::size_t i = 0; pass && i < sequential.size(); ++i) {
      const EvalRecord& record = sequential[i];
      const Prompt& prompt = set.prompts[i];
      if (record.prompt_index != i) {
        pass = false;
        note = "order not preserved";
        break;
      }
      const auto q = std::pair<int, int>{prompt.question.total, prompt.question.num};
      if (q == fail_pair) {
        if (record.evaluated() || record.error.empty()) {
          pass = false;
          note = "poisoned prompt was scored";
        }
      } else if (q == garbage_pair) {
        if (!record.evaluated() ||
            record.prediction.answer != Prediction::Answer::Abstain ||
            *record.correct) {
          pass = false;
          note = "garbage output did not abstain";
        }
      } else {
        const bool expect_yes = q.second % 2 == 0;
        const auto expected_answer =
            expect_yes ? Prediction::Answer::Yes : Prediction::Answer::No;
        if (!record.evaluated() || record.prediction.answer != expected_answer ||
            *record.correct != (expect_yes == prompt.answer)) {
          pass = false;
          note = "scripted prediction mismatch";
        }
      }
    }
    if (pass && flaky_hits.load() != 3) {
      pass = false;
      note = "expected exactly 3 attempts on the flaky prompt, saw " +
             std::to_string(flaky_hits.load());
    }

    // Concurrency must not change anything.
    flaky_hits = 0;
    mock::MockEndpoint endpoint2(script);
    const auto concurrent = run_batch(set, 2, endpoint2.config(), 8);
    for (std::size_t i = 0; pass && i < sequential.size(); ++i) {
      if (concurrent[i].prediction.answer != sequential[i].prediction.answer ||
          concurrent[i].correct != sequential[i].correct ||
          concurrent[i].evaluated() != sequential[i].evaluated()) {
        pass = false;
        note = "records differ between max_in_flight 1 and 8";
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    note = e.what();
  }
  report(7, pass,
         "remote-client contract: scripted yes/no, retries, garbage abstain, "
         "order under max_in_flight {1,8}" +
             (note.empty() ? std::string(" (exact)") : "; " + note));
}

// --------------------------------------------------------------------------
// Criterion 8: two CLI runs with the same seed are byte-identical.
// --------------------------------------------------------------------------
void criterion_8(const std::string& cli, const fs::path& run_a,
                 const fs::path& run_b) {
  Timer timer;
  bool pass = false;
  std::string note;
  try {
    if (!run_cli(cli, run_b)) {
      note = "second pipeline run failed";
    } else {
      const auto a = tree_hashes(run_a);
      const auto b = tree_hashes(run_b);
      if (a.empty()) {
        note = "no artifacts found";
      } else if (a == b) {
        pass = true;
        note = std::to_string(a.size()) + " artifacts identical";
      } else {
        std::size_t differing = 0;
        for (const auto& [path, hash] : a) {
          const auto it = b.find(path);
          if (it == b.end() || it->second != hash) {
            if (differing == 0) note = "first difference: " + path;
            ++differing;
          }
        }
        note += " (" + std::to_string(differing) + " files differ)";
      }
    }
  } catch (const std::exception& e) {
    note = e.what();
  }
  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "determinism: repeated 'all --preset desk --seed 7' runs; %s "
                "(%.0fs)",
                note.c_str(), timer.seconds());
  report(8, pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance_tests <path-to-lotbench-cli>\n");
    return 64;
  }
  const std::string cli = argv[1];
  const fs::path work = fs::temp_directory_path() / "lotbench_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path run_a = work / "run_a";
  const fs::path run_b = work / "run_b";

  std::printf("running desk pipeline: %s all --preset desk --seed 7\n", cli.c_str());
  std::fflush(stdout);
  Timer pipeline_timer;
  if (!run_cli(cli, run_a)) {
    std::printf("[FAIL] setup: desk pipeline run failed\n");
    return 1;
  }
  const double pipeline_seconds = pipeline_timer.seconds();
  std::printf("desk pipeline completed in %.0fs\n", pipeline_seconds);
  std::fflush(stdout);

  const RunConfig config = desk_config(run_a);
  criterion_1(config);
  criterion_2(config);
  criterion_3(config);
  criterion_4();
  criterion_5();
  criterion_6(config, pipeline_seconds);
  criterion_7();
  criterion_8(cli, run_a, run_b);

  fs::remove_all(work);
  std::printf("%s: %d of 8 criteria failed\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures);
  return g_failures;
}
