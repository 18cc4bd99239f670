#include "rankweight/evaluate.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <ostream>
#include <thread>

namespace rankweight {

SplitResult optimal_split(std::span<const ScoredPair> pairs) {
  std::vector<ScoredPair> sorted(pairs.begin(), pairs.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredPair& a, const ScoredPair& b) { return a.distance < b.distance; });
  const std::size_t n = sorted.size();
  std::size_t total_related = 0;
  for (const auto& p : sorted) {
    if (!std::isfinite(p.distance)) throw DataError("optimal_split: non-finite distance");
    total_related += p.label == Label::Related;
  }
  if (total_related == 0 || total_related == n) {
    throw DataError("optimal_split: need at least one pair of each label");
  }

  // Cut i predicts the first i sorted pairs related.
  std::size_t best_cut = 0;
  std::size_t best_errors = total_related;
  std::size_t related_before = 0;
  std::size_t unrelated_before = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    (sorted[i - 1].label == Label::Related ? related_before : unrelated_before)++;
    if (i < n && sorted[i - 1].distance == sorted[i].distance) continue;  // not separable here
    const std::size_t errors = unrelated_before + (total_related - related_before);
    if (errors < best_errors) {
      best_errors = errors;
      best_cut = i;
    }
  }

  SplitResult result;
  result.error = static_cast<double>(best_errors) / static_cast<double>(n);
  if (best_cut == 0) {
    result.theta = sorted.front().distance - 1.0;
  } else if (best_cut == n) {
    result.theta = sorted.back().distance + 1.0;
  } else {
    const double lo = sorted[best_cut - 1].distance;
    const double hi = sorted[best_cut].distance;
    result.theta = lo + (hi - lo) / 2.0;
    if (!(result.theta < hi)) result.theta = lo;
  }
  return result;
}

double split_error(std::span<const ScoredPair> pairs, double theta) {
  if (pairs.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& p : pairs) wrong += (p.distance <= theta) != (p.label == Label::Related);
  return static_cast<double>(wrong) / static_cast<double>(pairs.size());
}

Histograms make_histograms(std::span<const double> related, std::span<const double> nonrelated,
                           int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histograms h;
  h.related.assign(static_cast<std::size_t>(bins), 0);
  h.nonrelated.assign(static_cast<std::size_t>(bins), 0);
  if (related.empty() && nonrelated.empty()) return h;
  double low = std::numeric_limits<double>::infinity();
  double high = -std::numeric_limits<double>::infinity();
  for (auto values : {related, nonrelated}) {
    for (double d : values) {
      low = std::min(low, d);
      high = std::max(high, d);
    }
  }
  h.low = low;
  h.high = high;
  const double width = (high - low) / bins;
  auto bin_of = [&](double d) {
    if (!(width > 0.0)) return std::size_t{0};
    const auto b = static_cast<long>(std::floor((d - low) / width));
    return static_cast<std::size_t>(std::clamp(b, 0L, static_cast<long>(bins) - 1));
  };
  for (double d : related) ++h.related[bin_of(d)];
  for (double d : nonrelated) ++h.nonrelated[bin_of(d)];
  return h;
}

double js_divergence(std::span<const double> p, std::span<const double> q, double smoothing) {
  if (p.size() != q.size() || p.empty()) {
    throw std::invalid_argument("js_divergence: distributions must have equal, non-zero length");
  }
  const auto n = static_cast<double>(p.size());
  const double p_total = std::accumulate(p.begin(), p.end(), 0.0) + n * smoothing;
  const double q_total = std::accumulate(q.begin(), q.end(), 0.0) + n * smoothing;
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = (p[i] + smoothing) / p_total;
    const double qi = (q[i] + smoothing) / q_total;
    const double mi = 0.5 * (pi + qi);
    if (pi > 0.0) kl_p += pi * std::log(pi / mi);
    if (qi > 0.0) kl_q += qi * std::log(qi / mi);
  }
  return std::clamp(0.5 * kl_p + 0.5 * kl_q, 0.0, std::log(2.0));
}

double js_divergence(std::span<const double> related, std::span<const double> nonrelated,
                     int bins) {
  if (bins < 2) throw std::invalid_argument("js_divergence: need at least two bins");
  if (related.empty() || nonrelated.empty()) {
    throw std::invalid_argument("js_divergence: both samples must be non-empty");
  }
  const auto h = make_histograms(related, nonrelated, bins);
  const std::vector<double> p(h.related.begin(), h.related.end());
  const std::vector<double> q(h.nonrelated.begin(), h.nonrelated.end());
  return js_divergence(p, q);
}

double binomial_test(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) throw std::invalid_argument("binomial_test: need 0 <= k <= n");
  if (n == 0) {
    std::cerr << "warning: binomial test with zero trials, p = 1\n";
    return 1.0;
  }
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  const double lower = boost::math::cdf(dist, static_cast<double>(k));
  const double upper =
      k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

SignTest compare_methods(const std::vector<bool>& first_correct,
                         const std::vector<bool>& second_correct) {
  if (first_correct.size() != second_correct.size()) {
    throw std::invalid_argument("compare_methods: result vectors differ in length");
  }
  SignTest t;
  for (std::size_t i = 0; i < first_correct.size(); ++i) {
    if (first_correct[i] == second_correct[i]) continue;
    ++t.disagreements;
    t.first_better += first_correct[i];
  }
  t.p_value = binomial_test(t.disagreements, t.first_better);
  return t;
}

PairScorer learned_scorer(const EmbeddingTable& table, const IdfTable& idf,
                          const WeightModel& model) {
  return [&table, &idf, &model](const TextPair& pair) -> std::optional<double> {
    try {
      const auto a = represent_learned(sort_by_idf(pair.text_a, idf), table, model);
      const auto b = represent_learned(sort_by_idf(pair.text_b, idf), table, model);
      return distance(a, b, model.metric);
    } catch (const UnrepresentableText&) {
      return std::nullopt;
    }
  };
}

PairScorer baseline_scorer(const EmbeddingTable& table, const IdfTable& idf, Baseline method,
                           Metric metric) {
  return [&table, &idf, method, metric](const TextPair& pair) -> std::optional<double> {
    try {
      const auto a = represent_baseline(pair.text_a, table, idf, method);
      const auto b = represent_baseline(pair.text_b, table, idf, method);
      return distance(a, b, metric);
    } catch (const UnrepresentableText&) {
      return std::nullopt;
    }
  };
}

PairScorer tfidf_scorer(const IdfTable& idf) {
  return [&idf](const TextPair& pair) -> std::optional<double> {
    return cosine_distance(tfidf_vector(pair.text_a, idf), tfidf_vector(pair.text_b, idf));
  };
}

std::vector<std::optional<double>> score_pairs(const std::vector<TextPair>& pairs,
                                               const PairScorer& scorer, int threads) {
  std::vector<std::optional<double>> out(pairs.size());
  const auto workers =
      static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(pairs.size()))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = scorer(pairs[i]);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < pairs.size(); i += workers) out[i] = scorer(pairs[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

EvalReport evaluate_method(const std::string& name, const std::vector<TextPair>& test,
                           const std::vector<TextPair>& validation, const PairScorer& scorer,
                           const EvalOptions& options) {
  EvalReport report;
  report.method_name = name;
  if (options.theta_source == ThetaSource::ValidationSet) {
    const auto val_scores = score_pairs(validation, scorer, options.threads);
    std::vector<ScoredPair> fitted;
    for (std::size_t i = 0; i < validation.size(); ++i) {
      if (val_scores[i]) fitted.push_back({*val_scores[i], validation[i].label});
    }
    if (fitted.empty()) throw DataError(name + ": no representable validation pairs");
    report.theta = optimal_split(fitted).theta;
  } else {
    if (!std::isfinite(options.theta)) throw std::invalid_argument("theta must be finite");
    report.theta = options.theta;
  }

  const auto scores = score_pairs(test, scorer, options.threads);
  std::vector<double> related;
  std::vector<double> unrelated;
  std::size_t wrong = 0;
  report.correct.resize(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool is_related = test[i].label == Label::Related;
    bool predicted_related = false;
    if (scores[i]) {
      predicted_related = *scores[i] <= report.theta;
      (is_related ? related : unrelated).push_back(*scores[i]);
    } else {
      ++report.unrepresentable_count;
    }
    report.correct[i] = predicted_related == is_related;
    wrong += !report.correct[i];
  }
  if (related.empty() && unrelated.empty()) {
    throw DataError(name + ": no representable test pairs");
  }
  report.n_pairs = test.size();
  report.split_error = static_cast<double>(wrong) / static_cast<double>(test.size());
  report.histograms = make_histograms(related, unrelated, options.bins);
  report.js_divergence =
      related.empty() || unrelated.empty() ? 0.0 : js_divergence(related, unrelated, options.bins);
  return report;
}

void write_report_json(const EvalReport& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["method_name"] = report.method_name;
  doc["theta"] = report.theta;
  doc["split_error"] = report.split_error;
  doc["js_divergence"] = report.js_divergence;
  doc["n_pairs"] = report.n_pairs;
  doc["unrepresentable_count"] = report.unrepresentable_count;
  doc["histogram_low"] = report.histograms.low;
  doc["histogram_high"] = report.histograms.high;
  doc["histogram_related"] = report.histograms.related;
  doc["histogram_nonrelated"] = report.histograms.nonrelated;
  out << doc.dump(2) << '\n';
}

void write_histogram_csv(const Histograms& h, std::ostream& out) {
  out << "bin_low,bin_high,count_related,count_nonrelated\n";
  const double width = h.bin_width();
  const auto bins = h.related.size();
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = h.low + width * static_cast<double>(b);
    const double hi = b + 1 == bins ? h.high : h.low + width * static_cast<double>(b + 1);
    out << lo << ',' << hi << ',' << h.related[b] << ',' << h.nonrelated[b] << '\n';
  }
}

}  // namespace rankweight
