#include "lotbench/promptgen.hpp"

#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "lotbench/semantics.hpp"

using namespace lotbench;

namespace {

Concept make_concept(const std::string& text) {
  Concept c;
  c.text = text;
  c.expr = parse_expression(text);
  c.complexity = count_operators(*c.expr);
  c.id = concept_id_for(text);
  c.status = ConceptStatus::Retained;
  return c;
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// The worked example: ten in-context examples of "less than half" plus a
// held-out question, with its exact slot values.
Prompt table_prompt() {
  auto subject = [](const char* s) {
    return static_cast<std::uint8_t>(std::string(s) == "Bob" ? 1 : 0);
  };
  auto pred = [](const char* p) {
    return static_cast<std::uint8_t>(std::string(p) == "owns" ? 1 : 0);
  };
  auto object = [](const char* o) {
    const auto it = std::find(kObjects.begin(), kObjects.end(), std::string_view(o));
    return static_cast<std::uint8_t>(it - kObjects.begin());
  };
  auto ex = [&](int total, int num, const char* s, const char* p, const char* o,
                bool label) {
    return LabeledExample{total, num, subject(s), pred(p), object(o), label};
  };

  Prompt prompt;
  prompt.concept_id = "example";
  prompt.examples = {
      ex(17, 13, "Alice", "has", "plants", false),
      ex(99, 7, "Bob", "has", "trees", true),
      ex(40, 36, "Alice", "owns", "tables", false),
      ex(72, 9, "Bob", "owns", "chairs", true),
      ex(82, 47, "Bob", "has", "chairs", false),
      ex(100, 70, "Alice", "owns", "plants", false),
      ex(56, 3, "Alice", "owns", "chairs", true),
      ex(56, 37, "Bob", "owns", "birds", false),
      ex(84, 12, "Alice", "owns", "tables", true),
      ex(69, 32, "Alice", "owns", "bikes", true),
  };
  prompt.question = ex(99, 3, "Alice", "has", "apples", true);
  prompt.answer = true;
  return prompt;
}

constexpr const char* kTablePromptText =
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

}  // namespace

TEST_CASE("example pool covers every pair exactly once") {
  Concept c = make_concept("(x == 0)");
  ExamplePool pool = generate_examples(*c.expr, 11);
  CHECK(pool.size() == 5136);
  CHECK(pool.positives.size() == 96);
  CHECK(pool.negatives.size() == 5040);

  std::set<std::pair<int, int>> pairs;
  for (const auto* side : {&pool.positives, &pool.negatives}) {
    for (const LabeledExample& ex : *side) {
      CHECK(ex.label == evaluate(*c.expr, ex.total, ex.num));
      pairs.insert({ex.total, ex.num});
    }
  }
  CHECK(pairs.size() == 5136);

  // determinism
  ExamplePool again = generate_examples(*c.expr, 11);
  REQUIRE(again.positives.size() == pool.positives.size());
  for (std::size_t i = 0; i < pool.positives.size(); ++i) {
    CHECK(pool.positives[i].subject == again.positives[i].subject);
    CHECK(pool.positives[i].predicate == again.positives[i].predicate);
    CHECK(pool.positives[i].object == again.positives[i].object);
  }

  ExamplePool shifted = generate_examples(*c.expr, 12);
  bool any_difference = false;
  for (std::size_t i = 0; i < pool.positives.size(); ++i) {
    any_difference = any_difference ||
                     pool.positives[i].subject != shifted.positives[i].subject ||
                     pool.positives[i].object != shifted.positives[i].object;
  }
  CHECK(any_difference);
}

TEST_CASE("single prompts are balanced with an unseen question") {
  Concept c = make_concept("(x < 1/2 * n)");
  ExamplePool pool = generate_examples(*c.expr, 3);

  for (bool polarity : {true, false}) {
    Prompt prompt = build_prompt(pool, polarity, 99);
    REQUIRE(prompt.examples.size() == 20);
    int positive = 0;
    for (const LabeledExample& ex : prompt.examples) positive += ex.label;
    CHECK(positive == 10);
    CHECK(prompt.answer == polarity);
    CHECK(prompt.question.label == polarity);
    for (const LabeledExample& ex : prompt.examples) {
      CHECK((ex.total != prompt.question.total || ex.num != prompt.question.num));
    }
    // in-context pairs are distinct (sampling without replacement)
    std::set<std::pair<int, int>> pairs;
    for (const LabeledExample& ex : prompt.examples) {
      pairs.insert({ex.total, ex.num});
    }
    CHECK(pairs.size() == 20);
  }
}

TEST_CASE("a ten-positive concept cannot host a true question") {
  Concept c = make_concept("(x == 91)");  // exactly 10 positives
  ExamplePool pool = generate_examples(*c.expr, 5);
  REQUIRE(pool.positives.size() == 10);
  CHECK_THROWS_AS(build_prompt(pool, true, 1), PoolExhausted);
  CHECK_FALSE(holdout_feasible(*c.expr));
  CHECK(holdout_feasible(*make_concept("(x == 90)").expr));  // 11 positives

  CHECK_THROWS_AS(build_prompt_set(c, pool, 10, 1), PoolExhausted);
}

TEST_CASE("prompt sets are balanced and reuse questions only when exhausted") {
  Concept c = make_concept("(x == 0)");  // 96 positives
  ExamplePool pool = generate_examples(*c.expr, 21);

  PromptSet set = build_prompt_set(c, pool, 1000, 77);
  REQUIRE(set.prompts.size() == 1000);
  int true_answers = 0;
  for (const Prompt& p : set.prompts) true_answers += p.answer;
  CHECK(true_answers == 500);

  // 500 true questions from 96 positives forces reuse; 5040 negatives do not.
  CHECK(set.reused_true_questions);
  CHECK_FALSE(set.reused_false_questions);

  // Before exhaustion the true question pairs are pairwise distinct.
  std::set<std::pair<int, int>> seen;
  int duplicates_before_exhaustion = 0;
  int seen_true = 0;
  for (const Prompt& p : set.prompts) {
    if (!p.answer) continue;
    ++seen_true;
    if (seen_true > 96) break;
    if (!seen.insert({p.question.total, p.question.num}).second) {
      ++duplicates_before_exhaustion;
    }
  }
  CHECK(duplicates_before_exhaustion == 0);

  // False questions: 500 distinct pairs, no reuse needed.
  std::set<std::pair<int, int>> false_questions;
  for (const Prompt& p : set.prompts) {
    if (!p.answer) false_questions.insert({p.question.total, p.question.num});
  }
  CHECK(false_questions.size() == 500);

  // Every in-context list is balanced and never contains its own question.
  for (const Prompt& p : set.prompts) {
    int positive = 0;
    for (const LabeledExample& ex : p.examples) {
      positive += ex.label;
      REQUIRE((ex.total != p.question.total || ex.num != p.question.num));
    }
    REQUIRE(positive == 10);
  }

  // Full determinism of the set.
  PromptSet again = build_prompt_set(c, pool, 1000, 77);
  std::size_t text_mismatches = 0;
  for (std::size_t i = 0; i < set.prompts.size(); ++i) {
    text_mismatches +=
        render_prompt(set.prompts[i]) != render_prompt(again.prompts[i]);
  }
  CHECK(text_mismatches == 0);
}

TEST_CASE("rendering matches the worked example byte for byte") {
  const Prompt prompt = table_prompt();
  CHECK(render_prompt(prompt) == kTablePromptText);

  // The slot labels are what the underlying concept assigns.
  auto half = parse_expression("(x < 1/2 * n)");
  for (const LabeledExample& ex : prompt.examples) {
    CHECK(ex.label == evaluate(*half, ex.total, ex.num));
  }
  CHECK(evaluate(*half, prompt.question.total, prompt.question.num) == prompt.answer);
}

TEST_CASE("rendered prompts have the required shape") {
  Concept c = make_concept("(x > 2/3 * n)");
  ExamplePool pool = generate_examples(*c.expr, 8);
  Prompt prompt = build_prompt(pool, false, 4);
  const std::string text = render_prompt(prompt);

  CHECK(text.rfind("Let us define a new word, bnik.\n", 0) == 0);
  CHECK(count_occurrences(text, "? Yes.") == 10);
  CHECK(count_occurrences(text, "? No.") == 10);
  CHECK(count_occurrences(text, "?") == 21);
  CHECK(text.back() == '?');
  CHECK(count_occurrences(text, "\n") == 42);  // 43 lines
  CHECK(text.find("bnik") != std::string::npos);
}
