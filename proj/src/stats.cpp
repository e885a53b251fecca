#include "lotbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lotbench/io_util.hpp"

namespace lotbench {

EvalRecord score_record(std::string concept_id, int complexity,
                        std::size_t prompt_index, bool answer,
                        Prediction prediction) {
  EvalRecord record;
  record.concept_id = std::move(concept_id);
  record.complexity = complexity;
  record.prompt_index = prompt_index;
  record.answer = answer;
  record.correct = prediction.matches(answer);
  record.prediction = std::move(prediction);
  return record;
}

double concept_accuracy(std::span<const EvalRecord> records, AbstainPolicy policy) {
  std::size_t evaluated = 0;
  std::size_t correct = 0;
  std::size_t abstained = 0;
  for (const EvalRecord& r : records) {
    if (!r.evaluated()) continue;
    ++evaluated;
    if (r.prediction.answer == Prediction::Answer::Abstain) ++abstained;
    if (*r.correct) ++correct;
  }
  if (evaluated == 0) throw NoData("no evaluated records for this concept");
  if (policy == AbstainPolicy::Exclude) {
    if (evaluated == abstained) throw NoData("every evaluated record abstained");
    evaluated -= abstained;
  }
  return static_cast<double>(correct) / static_cast<double>(evaluated);
}

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

namespace {

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Continued fraction for the incomplete beta (Lentz's method).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEpsilon = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int dof) {
  if (dof < 1) throw DegenerateInput("degrees of freedom must be positive");
  const double nu = static_cast<double>(dof);
  const double x = nu / (nu + t * t);
  // P(|T| >= |t|) for T ~ Student-t(nu).
  return regularized_incomplete_beta(nu / 2.0, 0.5, x);
}

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DegenerateInput("pearson requires equally many xs and ys");
  }
  const std::size_t n = xs.size();
  if (n < 3) throw DegenerateInput("pearson requires at least 3 points");

  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateInput("pearson is undefined for constant inputs");
  }

  PearsonResult result;
  result.r = sxy / std::sqrt(sxx * syy);
  if (result.r > 1.0) result.r = 1.0;
  if (result.r < -1.0) result.r = -1.0;
  const int dof = static_cast<int>(n) - 2;
  if (std::fabs(result.r) >= 1.0) {
    result.p_value = 0.0;
  } else {
    const double t = result.r * std::sqrt(dof / (1.0 - result.r * result.r));
    result.p_value = student_t_two_sided_p(t, dof);
  }
  return result;
}

OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DegenerateInput("ols_fit requires at least 2 paired points");
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[i] - my);
  }
  if (sxx == 0.0) throw DegenerateInput("ols_fit is undefined for constant xs");
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

// ---------------------------------------------------------------------------
// Aggregation and report files
// ---------------------------------------------------------------------------

LearnerReport build_learner_report(std::span<const EvalRecord> records,
                                   AbstainPolicy policy) {
  // (complexity, concept_id) -> records, ordered for stable output.
  std::map<std::pair<int, std::string>, std::vector<const EvalRecord*>> grouped;
  for (const EvalRecord& r : records) {
    grouped[{r.complexity, r.concept_id}].push_back(&r);
  }

  LearnerReport report;
  std::map<int, ClassStats> classes;
  for (const auto& [key, group] : grouped) {
    std::vector<EvalRecord> copy;
    copy.reserve(group.size());
    for (const EvalRecord* r : group) copy.push_back(*r);
    double accuracy;
    try {
      accuracy = concept_accuracy(copy, policy);
    } catch (const NoData&) {
      ++report.no_data_concepts;
      continue;
    }
    ClassStats& cls = classes[key.first];
    cls.complexity = key.first;
    cls.concept_accuracies.emplace_back(key.second, accuracy);
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (auto& [k, cls] : classes) {
    double sum = 0.0;
    for (const auto& [id, accuracy] : cls.concept_accuracies) sum += accuracy;
    cls.mean_accuracy = sum / static_cast<double>(cls.concept_accuracies.size());
    xs.push_back(static_cast<double>(k));
    ys.push_back(cls.mean_accuracy);
    report.classes.push_back(std::move(cls));
  }

  if (xs.size() >= 3) {
    try {
      report.correlation = pearson(xs, ys);
    } catch (const DegenerateInput&) {
      report.correlation.reset();
    }
  }
  if (xs.size() >= 2) {
    try {
      report.fit = ols_fit(xs, ys);
    } catch (const DegenerateInput&) {
      report.fit.reset();
    }
  }
  return report;
}

void emit_report(const std::map<std::string, LearnerReport>& reports,
                 const std::filesystem::path& dir,
                 const nlohmann::json& config_echo) {
  std::filesystem::create_directories(dir);

  std::string results = "learner,class,concept_id,accuracy\n";
  std::string means = "learner,class,mean_accuracy\n";
  for (const auto& [learner, report] : reports) {
    for (const ClassStats& cls : report.classes) {
      for (const auto& [concept_id, accuracy] : cls.concept_accuracies) {
        results += learner + "," + std::to_string(cls.complexity) + "," +
                   concept_id + "," + format_fixed(accuracy, 6) + "\n";
      }
      means += learner + "," + std::to_string(cls.complexity) + "," +
               format_fixed(cls.mean_accuracy, 6) + "\n";
    }
  }

  nlohmann::json summary;
  summary["config"] = config_echo;
  summary["learners"] = nlohmann::json::object();
  for (const auto& [learner, report] : reports) {
    nlohmann::json block;
    if (report.correlation) {
      block["pearson_r"] = report.correlation->r;
      block["p_value"] = report.correlation->p_value;
    }
    if (report.fit) {
      block["slope"] = report.fit->slope;
      block["intercept"] = report.fit->intercept;
    }
    nlohmann::json class_means = nlohmann::json::array();
    for (const ClassStats& cls : report.classes) {
      class_means.push_back({{"class", cls.complexity},
                             {"mean_accuracy", cls.mean_accuracy},
                             {"concepts", cls.concept_count()}});
    }
    block["class_means"] = std::move(class_means);
    block["no_data_concepts"] = report.no_data_concepts;
    summary["learners"][learner] = std::move(block);
  }
  if (reports.empty()) summary["note"] = "no data";

  std::string table;
  table += "Learner                    PCC    p-value\n";
  table += "------------------------------------------\n";
  if (reports.empty()) {
    table += "(no data)\n";
  }
  for (const auto& [learner, report] : reports) {
    std::string r_text = report.correlation
                             ? format_fixed(report.correlation->r, 3)
                             : std::string("n/a");
    std::string p_text = report.correlation
                             ? format_fixed(report.correlation->p_value, 3)
                             : std::string("n/a");
    std::ostringstream row;
    row << learner;
    for (std::size_t i = learner.size(); i < 20; ++i) row << ' ';
    for (std::size_t i = r_text.size(); i < 10; ++i) row << ' ';
    row << r_text;
    for (std::size_t i = p_text.size(); i < 11; ++i) row << ' ';
    row << p_text << '\n';
    table += row.str();
  }

  atomic_write_file(dir / "results.csv", results);
  atomic_write_file(dir / "class_means.csv", means);
  atomic_write_file(dir / "summary.json", summary.dump(2) + "\n");
  atomic_write_file(dir / "table.txt", table);
}

}  // namespace lotbench
