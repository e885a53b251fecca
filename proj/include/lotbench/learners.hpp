#ifndef LOTBENCH_LEARNERS_HPP
#define LOTBENCH_LEARNERS_HPP

// Learner contract and the built-in reference learners.
//
// The MDL learner keeps the full retained concept set as its hypothesis
// space. Given a prompt it drops every hypothesis inconsistent with the 20
// in-context pairs, restricts to the lowest complexity class that still has
// survivors, and answers with their majority vote on the question pair.
// It prefers short descriptions by construction, which is exactly the
// simplicity bias the harness measures.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lotbench/enumerate.hpp"
#include "lotbench/promptgen.hpp"

namespace lotbench {

struct LearnerQuery {
  struct Example {
    int total = 0;
    int num = 0;
    bool label = false;
  };

  std::vector<Example> in_context;
  int question_total = 0;
  int question_num = 0;
  std::string rendered_text;  // for text-interface learners
};

LearnerQuery make_query(const Prompt& prompt);

struct Prediction {
  enum class Answer : std::uint8_t { Yes, No, Abstain };

  Answer answer = Answer::Abstain;
  std::string raw_text;

  bool matches(bool expected) const noexcept {
    return answer == (expected ? Answer::Yes : Answer::No);
  }
};

std::string_view prediction_answer_text(Prediction::Answer a) noexcept;

// First standalone yes/no token decides, case-insensitively; anything else
// abstains with the raw text preserved. Total on all strings.
Prediction parse_answer(std::string_view raw_text);

// Retained concepts ordered by (complexity, canonical text).
struct HypothesisSpace {
  std::vector<Concept> hypotheses;

  static HypothesisSpace from_classes(const std::vector<ConceptClass>& classes);
};

Prediction mdl_predict(const LearnerQuery& query, const HypothesisSpace& space);

// Majority in-context label; a seeded coin on a tie; abstains on an empty
// context.
Prediction majority_predict(const LearnerQuery& query, std::uint64_t seed);

}  // namespace lotbench

#endif  // LOTBENCH_LEARNERS_HPP
