#ifndef LOTBENCH_STATS_HPP
#define LOTBENCH_STATS_HPP

// Accuracy aggregation and the complexity-accuracy correlation analysis.
//
// Class means weight each concept equally. The correlation between class
// index and class mean accuracy is the sample Pearson coefficient, with a
// two-sided p-value from the exact Student-t transform
// t = r * sqrt((n-2) / (1-r^2)) on n-2 degrees of freedom, computed via the
// regularized incomplete beta function.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lotbench/learners.hpp"

namespace lotbench {

struct EvalRecord {
  std::string concept_id;
  int complexity = 0;
  std::size_t prompt_index = 0;
  bool answer = false;
  Prediction prediction;
  std::optional<bool> correct;  // empty when the prompt was never evaluated
  std::string error;            // transport failure, if any

  bool evaluated() const noexcept { return correct.has_value(); }
};

EvalRecord score_record(std::string concept_id, int complexity,
                        std::size_t prompt_index, bool answer,
                        Prediction prediction);

enum class AbstainPolicy : std::uint8_t {
  CountIncorrect,  // default: a refusal is a wrong answer
  Exclude,         // drop abstentions from the denominator
};

// correct / evaluated under the policy. Throws NoData when no record was
// evaluated (or, under Exclude, when every evaluated record abstained).
double concept_accuracy(std::span<const EvalRecord> records,
                        AbstainPolicy policy = AbstainPolicy::CountIncorrect);

struct ClassStats {
  int complexity = 0;
  std::vector<std::pair<std::string, double>> concept_accuracies;
  double mean_accuracy = 0.0;

  std::size_t concept_count() const noexcept { return concept_accuracies.size(); }
};

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;
};

// Sample Pearson correlation with two-sided p. Requires at least three
// points; throws DegenerateInput when either side has zero variance.
PearsonResult pearson(std::span<const double> xs, std::span<const double> ys);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least-squares line. Requires two points and non-constant xs.
OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys);

// Numerical kernels, exposed for verification against quadrature oracles.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, int dof);

struct LearnerReport {
  std::vector<ClassStats> classes;  // ascending complexity
  std::optional<PearsonResult> correlation;
  std::optional<OlsFit> fit;
  std::size_t no_data_concepts = 0;  // concepts with zero evaluated records
};

// Groups records by (complexity, concept) and aggregates. Record order does
// not affect the result.
LearnerReport build_learner_report(std::span<const EvalRecord> records,
                                   AbstainPolicy policy = AbstainPolicy::CountIncorrect);

// Writes results.csv, class_means.csv, summary.json and table.txt into
// `dir`. `config_echo` is embedded in the summary for provenance.
void emit_report(const std::map<std::string, LearnerReport>& reports,
                 const std::filesystem::path& dir,
                 const nlohmann::json& config_echo);

}  // namespace lotbench

#endif  // LOTBENCH_STATS_HPP
