#include "lotbench/promptgen.hpp"

#include <algorithm>

#include "lotbench/rng.hpp"
#include "lotbench/semantics.hpp"

namespace lotbench {

ExamplePool generate_examples(const Expr& expr, std::uint64_t seed) {
  SeededRng rng(seed);
  ExamplePool pool;
  for (int total = kTotalMin; total <= kTotalMax; ++total) {
    for (int num = 0; num <= total; ++num) {
      LabeledExample ex;
      ex.total = total;
      ex.num = num;
      ex.subject = static_cast<std::uint8_t>(rng.uniform_index(kSubjects.size()));
      ex.predicate = static_cast<std::uint8_t>(rng.uniform_index(kPredicates.size()));
      ex.object = static_cast<std::uint8_t>(rng.uniform_index(kObjects.size()));
      ex.label = evaluate(expr, total, num);
      (ex.label ? pool.positives : pool.negatives).push_back(ex);
    }
  }
  return pool;
}

namespace {

bool same_pair(const LabeledExample& a, const LabeledExample& b) {
  return a.total == b.total && a.num == b.num;
}

// 10 + 10 in-context examples, sampled without replacement and excluding
// the question pair when one is prescribed, then shuffled.
std::vector<LabeledExample> sample_in_context(const ExamplePool& pool,
                                              const LabeledExample* question,
                                              SeededRng& rng) {
  std::vector<LabeledExample> picked;
  picked.reserve(2 * kInContextPerLabel);
  for (const auto* side : {&pool.positives, &pool.negatives}) {
    std::vector<std::size_t> candidates;
    candidates.reserve(side->size());
    for (std::size_t i = 0; i < side->size(); ++i) {
      if (question == nullptr || !same_pair((*side)[i], *question)) {
        candidates.push_back(i);
      }
    }
    if (candidates.size() < kInContextPerLabel) {
      throw PoolExhausted("concept offers only " + std::to_string(candidates.size()) +
                          " usable examples on one side; 10 required");
    }
    for (std::size_t i : rng.sample_indices(candidates.size(), kInContextPerLabel)) {
      picked.push_back((*side)[candidates[i]]);
    }
  }
  rng.shuffle(picked);
  return picked;
}

Prompt assemble_prompt(const ExamplePool& pool, bool answer_polarity,
                       const LabeledExample& question, std::uint64_t seed) {
  SeededRng rng(seed);
  Prompt prompt;
  prompt.examples = sample_in_context(pool, &question, rng);
  prompt.question = question;
  prompt.answer = answer_polarity;
  prompt.render_seed = seed;
  return prompt;
}

}  // namespace

Prompt build_prompt(const ExamplePool& pool, bool answer_polarity,
                    std::uint64_t seed) {
  SeededRng rng(seed);
  Prompt prompt;
  prompt.examples = sample_in_context(pool, nullptr, rng);
  const auto& side = answer_polarity ? pool.positives : pool.negatives;
  std::vector<std::size_t> unseen;
  unseen.reserve(side.size());
  for (std::size_t i = 0; i < side.size(); ++i) {
    const bool used = std::any_of(prompt.examples.begin(), prompt.examples.end(),
                                  [&](const LabeledExample& ex) {
                                    return same_pair(ex, side[i]);
                                  });
    if (!used) unseen.push_back(i);
  }
  if (unseen.empty()) {
    throw PoolExhausted(std::string("no unseen ") +
                        (answer_polarity ? "positive" : "negative") +
                        " example remains for the question");
  }
  prompt.question = side[unseen[rng.uniform_index(unseen.size())]];
  prompt.answer = answer_polarity;
  prompt.render_seed = seed;
  return prompt;
}

PromptSet build_prompt_set(const Concept& target, const ExamplePool& pool,
                           std::size_t count, std::uint64_t seed) {
  if (count % 2 != 0) {
    throw ConfigError("prompt count must be even to balance answers, got " +
                      std::to_string(count));
  }
  if (pool.positives.size() <= kInContextPerLabel ||
      pool.negatives.size() <= kInContextPerLabel) {
    throw PoolExhausted("concept " + target.id_hex() +
                        " cannot hold out a question on both sides");
  }

  PromptSet set;
  set.concept_id = target.id_hex();
  set.prompts.reserve(count);

  // Per-polarity question queues: a seeded permutation consumed without
  // replacement, then uniform redraws once empty.
  SeededRng queue_rng(derive_seed(seed, "question-queue"));
  std::array<std::vector<std::size_t>, 2> queue;
  std::array<std::size_t, 2> queue_pos = {0, 0};
  for (int polarity = 0; polarity < 2; ++polarity) {
    const auto& side = polarity ? pool.positives : pool.negatives;
    auto& q = queue[static_cast<std::size_t>(polarity)];
    q.resize(side.size());
    for (std::size_t i = 0; i < side.size(); ++i) q[i] = i;
    queue_rng.shuffle(q);
  }

  for (std::size_t index = 0; index < count; ++index) {
    const bool polarity = index % 2 == 0;  // even prompts answer yes
    const auto& side = polarity ? pool.positives : pool.negatives;
    auto& q = queue[polarity ? 1 : 0];
    auto& pos = queue_pos[polarity ? 1 : 0];
    std::size_t question_index;
    if (pos < q.size()) {
      question_index = q[pos++];
    } else {
      question_index = queue_rng.uniform_index(side.size());
      (polarity ? set.reused_true_questions : set.reused_false_questions) = true;
    }
    Prompt prompt = assemble_prompt(pool, polarity, side[question_index],
                                    derive_seed(seed, "prompt", index));
    prompt.concept_id = set.concept_id;
    set.prompts.push_back(std::move(prompt));
  }
  return set;
}

bool holdout_feasible(const Expr& expr) noexcept {
  const int floor = kInContextPerLabel + 1;
  int positives = 0;
  int negatives = 0;
  int remaining = 5136;
  for (int total = kTotalMin; total <= kTotalMax; ++total) {
    for (int num = 0; num <= total; ++num) {
      (evaluate(expr, total, num) ? positives : negatives) += 1;
      --remaining;
      if (positives >= floor && negatives >= floor) return true;
      if (positives + remaining < floor || negatives + remaining < floor) {
        return false;
      }
    }
  }
  return positives >= floor && negatives >= floor;
}

std::string render_statement_line(const LabeledExample& ex) {
  std::string out = "There are ";
  out += std::to_string(ex.total);
  out.push_back(' ');
  out += kObjects[ex.object];
  out += ". ";
  out += kSubjects[ex.subject];
  out.push_back(' ');
  out += kPredicates[ex.predicate][0];
  out.push_back(' ');
  out += std::to_string(ex.num);
  out += " of the ";
  out += kObjects[ex.object];
  out.push_back('.');
  return out;
}

std::string render_question_line(const LabeledExample& ex, bool with_answer) {
  std::string out = "Does ";
  out += kSubjects[ex.subject];
  out.push_back(' ');
  out += kPredicates[ex.predicate][1];
  out.push_back(' ');
  out += kNonceWord;
  out += " of the ";
  out += kObjects[ex.object];
  out.push_back('?');
  if (with_answer) {
    out += ex.label ? " Yes." : " No.";
  }
  return out;
}

std::string render_prompt(const Prompt& prompt) {
  std::string out{kIntroLine};
  for (const LabeledExample& ex : prompt.examples) {
    out.push_back('\n');
    out += render_statement_line(ex);
    out.push_back('\n');
    out += render_question_line(ex, true);
  }
  out.push_back('\n');
  out += render_statement_line(prompt.question);
  out.push_back('\n');
  out += render_question_line(prompt.question, false);
  return out;
}

}  // namespace lotbench
