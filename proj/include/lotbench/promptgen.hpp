#ifndef LOTBENCH_PROMPTGEN_HPP
#define LOTBENCH_PROMPTGEN_HPP

// Prompt construction for in-context concept learning.
//
// Every admissible (total, num) pair yields one labeled example whose
// lexical slots (subject, predicate, object) are drawn uniformly from a
// fixed lexicon. A prompt holds the intro line, 10 positive and 10 negative
// examples in shuffled order, and one held-out question whose pair appears
// nowhere among the in-context examples. A prompt set holds an equal number
// of true-answer and false-answer prompts; question pairs are consumed
// without replacement per polarity until the pool runs dry, after which
// they repeat (recorded on the set).
//
// Rendering is byte-exact:
//   There are 17 plants. Alice has 13 of the plants.
//   Does Alice have bnik of the plants? No.
// with the bare interrogative line, answerless, closing the prompt.

#include <cstdint>
#include <string>
#include <vector>

#include "lotbench/enumerate.hpp"
#include "lotbench/grammar.hpp"

namespace lotbench {

inline constexpr std::string_view kIntroLine = "Let us define a new word, bnik.";
inline constexpr std::string_view kNonceWord = "bnik";

inline constexpr std::array<std::string_view, 2> kSubjects = {"Alice", "Bob"};
// Third-person form for statements, base form after "Does".
inline constexpr std::array<std::array<std::string_view, 2>, 2> kPredicates = {
    {{"has", "have"}, {"owns", "own"}}};
inline constexpr std::array<std::string_view, 8> kObjects = {
    "tables", "chairs", "apples", "bikes", "trees", "fish", "birds", "plants"};

struct LabeledExample {
  int total = 0;
  int num = 0;
  std::uint8_t subject = 0;
  std::uint8_t predicate = 0;
  std::uint8_t object = 0;
  bool label = false;
};

struct ExamplePool {
  std::vector<LabeledExample> positives;
  std::vector<LabeledExample> negatives;

  std::size_t size() const noexcept { return positives.size() + negatives.size(); }
};

// One labeled example per (total, num) pair, 5136 in all, partitioned by
// truth value. Deterministic in the seed.
ExamplePool generate_examples(const Expr& expr, std::uint64_t seed);

inline constexpr int kInContextPerLabel = 10;  // m = n = 10

struct Prompt {
  std::string concept_id;
  std::vector<LabeledExample> examples;  // shuffled, 10 per label
  LabeledExample question;               // label withheld when rendered
  bool answer = false;
  std::uint64_t render_seed = 0;
};

// Samples the in-context examples and picks an unseen question of the given
// polarity. Throws PoolExhausted when the polarity side has no example left
// to hold out.
Prompt build_prompt(const ExamplePool& pool, bool answer_polarity,
                    std::uint64_t seed);

struct PromptSet {
  std::string concept_id;
  std::vector<Prompt> prompts;
  int positives_in_context = kInContextPerLabel;
  int negatives_in_context = kInContextPerLabel;
  // Set when a polarity ran out of fresh question pairs and reuse began.
  bool reused_true_questions = false;
  bool reused_false_questions = false;
};

// `count` prompts, half true-answer and half false-answer, alternating.
// `count` must be even.
PromptSet build_prompt_set(const Concept& target, const ExamplePool& pool,
                           std::size_t count, std::uint64_t seed);

// A balanced set needs 10 in-context examples plus one held-out question on
// each side. Concepts with exactly 10 examples on a side pass the
// eligibility floor but can never hold out a question there.
bool holdout_feasible(const Expr& expr) noexcept;

std::string render_statement_line(const LabeledExample& ex);
std::string render_question_line(const LabeledExample& ex, bool with_answer);

// Full prompt text, lines joined with '\n', no trailing newline.
std::string render_prompt(const Prompt& prompt);

}  // namespace lotbench

#endif  // LOTBENCH_PROMPTGEN_HPP
