#include "lotbench/learners.hpp"

#include <algorithm>
#include <cctype>

#include "lotbench/rng.hpp"
#include "lotbench/semantics.hpp"

namespace lotbench {

LearnerQuery make_query(const Prompt& prompt) {
  LearnerQuery query;
  query.in_context.reserve(prompt.examples.size());
  for (const LabeledExample& ex : prompt.examples) {
    query.in_context.push_back({ex.total, ex.num, ex.label});
  }
  query.question_total = prompt.question.total;
  query.question_num = prompt.question.num;
  query.rendered_text = render_prompt(prompt);
  return query;
}

std::string_view prediction_answer_text(Prediction::Answer a) noexcept {
  switch (a) {
    case Prediction::Answer::Yes:
      return "yes";
    case Prediction::Answer::No:
      return "no";
    case Prediction::Answer::Abstain:
      return "abstain";
  }
  return "abstain";
}

Prediction parse_answer(std::string_view raw_text) {
  Prediction prediction;
  prediction.raw_text = std::string(raw_text);
  std::string token;
  for (std::size_t i = 0; i <= raw_text.size(); ++i) {
    const bool is_letter =
        i < raw_text.size() && std::isalpha(static_cast<unsigned char>(raw_text[i]));
    if (is_letter) {
      token.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(raw_text[i]))));
      continue;
    }
    if (token == "yes") {
      prediction.answer = Prediction::Answer::Yes;
      return prediction;
    }
    if (token == "no") {
      prediction.answer = Prediction::Answer::No;
      return prediction;
    }
    token.clear();
  }
  prediction.answer = Prediction::Answer::Abstain;
  return prediction;
}

HypothesisSpace HypothesisSpace::from_classes(const std::vector<ConceptClass>& classes) {
  HypothesisSpace space;
  std::vector<const ConceptClass*> ordered;
  for (const ConceptClass& cls : classes) ordered.push_back(&cls);
  std::sort(ordered.begin(), ordered.end(),
            [](const ConceptClass* a, const ConceptClass* b) { return a->k < b->k; });
  for (const ConceptClass* cls : ordered) {
    for (const Concept* c : cls->retained()) space.hypotheses.push_back(*c);
  }
  return space;
}

namespace {

bool consistent(const Expr& expr, const std::vector<LearnerQuery::Example>& examples) {
  for (const auto& ex : examples) {
    if (evaluate(expr, ex.total, ex.num) != ex.label) return false;
  }
  return true;
}

// 1-nearest-neighbour on (total, num); nearest positive wins distance ties.
Prediction nearest_neighbour(const LearnerQuery& query) {
  Prediction prediction;
  if (query.in_context.empty()) return prediction;  // abstain
  long best = -1;
  bool best_label = false;
  for (const auto& ex : query.in_context) {
    const long dt = ex.total - query.question_total;
    const long dn = ex.num - query.question_num;
    const long d2 = dt * dt + dn * dn;
    if (best < 0 || d2 < best) {
      best = d2;
      best_label = ex.label;
    } else if (d2 == best && ex.label) {
      best_label = true;
    }
  }
  prediction.answer = best_label ? Prediction::Answer::Yes : Prediction::Answer::No;
  return prediction;
}

}  // namespace

Prediction mdl_predict(const LearnerQuery& query, const HypothesisSpace& space) {
  // Hypotheses are ordered by complexity, so the first consistent class is
  // the minimal one; classes beyond it never need scanning.
  const Concept* first_consistent = nullptr;
  int yes_votes = 0;
  int no_votes = 0;
  for (const Concept& hypothesis : space.hypotheses) {
    if (first_consistent != nullptr &&
        hypothesis.complexity != first_consistent->complexity) {
      break;
    }
    if (!consistent(*hypothesis.expr, query.in_context)) continue;
    if (first_consistent == nullptr) first_consistent = &hypothesis;
    const bool vote =
        evaluate(*hypothesis.expr, query.question_total, query.question_num);
    (vote ? yes_votes : no_votes) += 1;
  }

  Prediction prediction;
  if (first_consistent == nullptr) {
    return nearest_neighbour(query);
  }
  if (yes_votes != no_votes) {
    prediction.answer = yes_votes > no_votes ? Prediction::Answer::Yes
                                             : Prediction::Answer::No;
  } else {
    // Tie: the lexicographically first minimal hypothesis decides.
    const bool vote = evaluate(*first_consistent->expr, query.question_total,
                               query.question_num);
    prediction.answer = vote ? Prediction::Answer::Yes : Prediction::Answer::No;
  }
  return prediction;
}

Prediction majority_predict(const LearnerQuery& query, std::uint64_t seed) {
  Prediction prediction;
  if (query.in_context.empty()) return prediction;  // abstain
  int yes = 0;
  int no = 0;
  for (const auto& ex : query.in_context) {
    (ex.label ? yes : no) += 1;
  }
  bool answer;
  if (yes != no) {
    answer = yes > no;
  } else {
    answer = SeededRng(seed).coin();
  }
  prediction.answer = answer ? Prediction::Answer::Yes : Prediction::Answer::No;
  return prediction;
}

}  // namespace lotbench
