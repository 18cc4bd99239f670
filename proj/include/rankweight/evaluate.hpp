#pragma once

#include "rankweight/aggregate.hpp"
#include "rankweight/pairgen.hpp"
#include "rankweight/types.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rankweight {

struct ScoredPair {
  double distance = 0.0;
  Label label = Label::Related;
};

struct SplitResult {
  double theta = 0.0;
  double error = 0.0;
};

/// Threshold minimizing misclassifications of "related iff d <= theta".
/// All n + 1 cut positions of the sorted distances are scanned; theta is
/// the midpoint of the two distances around the best cut (or one unit
/// outside the range for the extreme cuts). Ties go to the lowest theta.
SplitResult optimal_split(std::span<const ScoredPair> pairs);

/// Fraction of pairs with (d <= theta) != related.
double split_error(std::span<const ScoredPair> pairs, double theta);

struct Histograms {
  double low = 0.0;
  double high = 0.0;
  std::vector<std::size_t> related;
  std::vector<std::size_t> nonrelated;

  double bin_width() const { return (high - low) / static_cast<double>(related.size()); }
};

/// Equal-width histograms over the pooled [min, max] range.
Histograms make_histograms(std::span<const double> related, std::span<const double> nonrelated,
                           int bins);

/// JS(P, Q) in nats for two probability vectors of equal length. Each
/// vector is smoothed by `smoothing` per bin and renormalized first.
double js_divergence(std::span<const double> p, std::span<const double> q,
                     double smoothing = 1e-12);

/// JS divergence between the binned related and non-related distances.
double js_divergence(std::span<const double> related, std::span<const double> nonrelated,
                     int bins);

/// Exact two-tailed binomial (sign) test against p0 = 0.5, capped at 1.
double binomial_test(std::int64_t n, std::int64_t k);

struct SignTest {
  std::int64_t disagreements = 0;
  std::int64_t first_better = 0;
  double p_value = 1.0;
};

/// Sign test over the pairs where exactly one of two methods is correct.
SignTest compare_methods(const std::vector<bool>& first_correct,
                         const std::vector<bool>& second_correct);

struct EvalReport {
  std::string method_name;
  double theta = 0.0;
  double split_error = 0.0;
  double js_divergence = 0.0;
  Histograms histograms;
  std::size_t n_pairs = 0;
  std::size_t unrepresentable_count = 0;
  std::vector<bool> correct;  // per test pair, for significance testing
};

/// Distance of a pair under some representation, or nothing when either
/// text cannot be represented.
using PairScorer = std::function<std::optional<double>(const TextPair&)>;

PairScorer learned_scorer(const EmbeddingTable& table, const IdfTable& idf,
                          const WeightModel& model);
PairScorer baseline_scorer(const EmbeddingTable& table, const IdfTable& idf, Baseline method,
                           Metric metric = Metric::Euclidean);
PairScorer tfidf_scorer(const IdfTable& idf);

enum class ThetaSource { ValidationSet, Given };

struct EvalOptions {
  ThetaSource theta_source = ThetaSource::ValidationSet;
  double theta = 0.0;  // used with ThetaSource::Given
  int bins = 100;
  int threads = 1;
};

/// Fits theta on `validation` (or takes it as given), then scores `test`.
/// Unrepresentable test pairs are predicted non-related and counted.
EvalReport evaluate_method(const std::string& name, const std::vector<TextPair>& test,
                           const std::vector<TextPair>& validation, const PairScorer& scorer,
                           const EvalOptions& options = {});

/// Scores pairs; entries stay empty for unrepresentable pairs.
std::vector<std::optional<double>> score_pairs(const std::vector<TextPair>& pairs,
                                               const PairScorer& scorer, int threads = 1);

void write_report_json(const EvalReport& report, std::ostream& out);
void write_histogram_csv(const Histograms& histograms, std::ostream& out);

}  // namespace rankweight
