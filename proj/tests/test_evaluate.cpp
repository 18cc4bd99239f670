#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace rankweight;
using testsupport::text;

namespace {

std::vector<ScoredPair> scored(std::vector<double> related, std::vector<double> nonrelated) {
  std::vector<ScoredPair> out;
  for (double d : related) out.push_back({d, Label::Related});
  for (double d : nonrelated) out.push_back({d, Label::NonRelated});
  return out;
}

}  // namespace

TEST_CASE("optimal split examples") {
  const auto sep = optimal_split(scored({0.1, 0.2}, {0.8, 0.9}));
  CHECK(sep.error == 0.0);
  CHECK(sep.theta == doctest::Approx(0.5));
  CHECK(optimal_split(scored({0.1, 0.7}, {0.3, 0.9})).error == 0.25);
  CHECK(optimal_split(scored({0.4, 0.4}, {0.4, 0.4})).error == 0.5);
  CHECK_THROWS_AS(optimal_split(scored({0.1, 0.2}, {})), DataError);
}

TEST_CASE("split error at a fixed threshold") {
  const auto related = scored({0.3, 0.6}, {});
  CHECK(split_error(related, 0.1) == 1.0);
  CHECK(split_error(related, 0.9) == 0.0);
}

TEST_CASE("optimal split agrees with brute force") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> size(2, 20);
  std::uniform_int_distribution<int> level(0, 6);  // coarse values force ties
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ScoredPair> pairs;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      pairs.push_back({level(rng) / 4.0, rng() % 2 ? Label::Related : Label::NonRelated});
    }
    pairs[0].label = Label::Related;
    pairs[1].label = Label::NonRelated;
    const auto r = optimal_split(pairs);
    CHECK(r.error == testsupport::brute_force_split_error(pairs));
    CHECK(split_error(pairs, r.theta) == r.error);
  }
}

TEST_CASE("split error is invariant under monotone transforms") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredPair> pairs;
    for (int i = 0; i < 30; ++i) pairs.push_back({u(rng), i % 2 ? Label::Related : Label::NonRelated});
    auto transformed = pairs;
    for (auto& p : transformed) p.distance = std::exp(2.0 * p.distance) + 1.0;
    CHECK(optimal_split(pairs).error == optimal_split(transformed).error);
  }
}

TEST_CASE("JS divergence of fixed distributions") {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<double> q{1.0, 0.0};
  CHECK(js_divergence(p, q) == doctest::Approx(0.215762).epsilon(1e-6));
  CHECK(js_divergence(p, q) == doctest::Approx(js_divergence(q, p)).epsilon(1e-12));
  CHECK(js_divergence(p, p) < 1e-9);
  const std::vector<double> a{1.0, 0.0, 0.0};
  const std::vector<double> b{0.0, 0.0, 1.0};
  CHECK(std::abs(js_divergence(a, b) - std::log(2.0)) < 1e-6);
}

TEST_CASE("JS divergence of samples") {
  const std::vector<double> low{0.0, 0.01, 0.02};
  const std::vector<double> high{0.98, 0.99, 1.0};
  CHECK(std::abs(js_divergence(std::span<const double>(low), std::span<const double>(high), 100) -
                 std::log(2.0)) < 1e-6);
  CHECK(js_divergence(std::span<const double>(low), std::span<const double>(low), 100) < 1e-9);
}

TEST_CASE("histograms cover the pooled range") {
  const std::vector<double> related{0.0, 0.5};
  const std::vector<double> nonrelated{1.0};
  const auto h = make_histograms(related, nonrelated, 4);
  CHECK(h.low == 0.0);
  CHECK(h.high == 1.0);
  CHECK(h.related == std::vector<std::size_t>{1, 0, 1, 0});
  CHECK(h.nonrelated == std::vector<std::size_t>{0, 0, 0, 1});
  std::ostringstream csv;
  write_histogram_csv(h, csv);
  CHECK(csv.str().rfind("bin_low,bin_high,count_related,count_nonrelated\n", 0) == 0);
}

TEST_CASE("two-sided binomial test") {
  CHECK(std::abs(binomial_test(10, 0) - 0.001953125) < 1e-9);
  CHECK(binomial_test(10, 10) == doctest::Approx(0.001953125));
  CHECK(binomial_test(10, 5) == 1.0);
  CHECK(binomial_test(1, 1) == 1.0);
  CHECK(binomial_test(0, 0) == 1.0);
  CHECK_THROWS(binomial_test(3, 4));
  // Complement symmetry: k and n - k give the same p-value.
  for (int n = 1; n <= 30; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(binomial_test(n, k) == doctest::Approx(binomial_test(n, n - k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("binomial test against a direct tail sum") {
  for (int n = 1; n <= 25; ++n) {
    for (int k = 0; k <= n; ++k) {
      const int tail = std::min(k, n - k);
      double sum = 0.0;
      double coeff = 1.0;
      for (int i = 0; i <= tail; ++i) {
        if (i > 0) coeff = coeff * (n - i + 1) / i;
        sum += coeff;
      }
      const double expected = std::min(1.0, 2.0 * sum / std::pow(2.0, n));
      CHECK(binomial_test(n, k) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("sign test counts disagreements only") {
  const std::vector<bool> a{true, true, true, false, true};
  const std::vector<bool> b{false, false, true, false, true};
  const auto t = compare_methods(a, b);
  CHECK(t.disagreements == 2);
  CHECK(t.first_better == 2);
  CHECK(t.p_value == doctest::Approx(0.5));
}

TEST_CASE("tf-idf separates identical from disjoint texts") {
  const auto idf = compute_idf({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}}, 100);
  std::vector<TextPair> pairs;
  for (int i = 0; i < 5; ++i) {
    pairs.push_back({text({"a", "b"}), text({"a", "b"}), Label::Related});
    pairs.push_back({text({"a", "b"}), text({"c", "d"}), Label::NonRelated});
  }
  const auto report = evaluate_method("tfidf", pairs, pairs, tfidf_scorer(idf));
  CHECK(report.split_error == 0.0);
  CHECK(report.n_pairs == 10);
}

TEST_CASE("unrepresentable test pairs count as non-related predictions") {
  EmbeddingTable table(1, {"x", "y"}, {VectorXd::Zero(1), VectorXd::Ones(1)});
  const auto idf = compute_idf({{"x", 1}, {"y", 1}}, 10);
  const std::vector<TextPair> validation{{text({"x"}), text({"x"}), Label::Related},
                                         {text({"x"}), text({"y"}), Label::NonRelated}};
  const std::vector<TextPair> test{{text({"x"}), text({"x"}), Label::Related},
                                   {text({"oov"}), text({"x"}), Label::Related},
                                   {text({"oov"}), text({"y"}), Label::NonRelated}};
  const auto report = evaluate_method("mean", test, validation, baseline_scorer(table, idf, Baseline::Mean));
  CHECK(report.unrepresentable_count == 2);
  CHECK(report.split_error == doctest::Approx(1.0 / 3.0));
  CHECK(report.correct == std::vector<bool>{true, false, true});
}

TEST_CASE("mean baseline separates a two-cluster dataset") {
  SyntheticOptions o;
  o.topics = 2;
  o.topic_fraction = 1.0;
  o.related = o.nonrelated = 400;
  const auto data = make_synthetic(o);
  const auto report = evaluate_method("mean", data.test, data.validation,
                                      baseline_scorer(data.table, data.idf, Baseline::Mean));
  CHECK(report.split_error < 0.10);
}

TEST_CASE("every baseline is near chance on shuffled labels") {
  SyntheticOptions o;
  o.shuffle_labels = true;
  o.related = o.nonrelated = 2000;
  const auto data = make_synthetic(o);
  for (auto method : all_baselines()) {
    const auto report = evaluate_method(to_string(method), data.test, data.validation,
                                        baseline_scorer(data.table, data.idf, method));
    CHECK(report.split_error >= 0.45);
    CHECK(report.split_error <= 0.55);
  }
}

TEST_CASE("threaded scoring matches serial scoring") {
  SyntheticOptions o;
  o.related = o.nonrelated = 100;
  const auto data = make_synthetic(o);
  const auto scorer = baseline_scorer(data.table, data.idf, Baseline::Mean);
  CHECK(score_pairs(data.test, scorer, 1) == score_pairs(data.test, scorer, 3));
}

TEST_CASE("rescaling the learned weights leaves the split error unchanged") {
  SyntheticOptions o;
  o.related = o.nonrelated = 200;
  const auto data = make_synthetic(o);
  WeightModel model;
  model.weights = VectorXd::LinSpaced(30, 1.0, 0.1);
  WeightModel scaled = model;
  scaled.weights *= 4.0;
  const auto a = evaluate_method("a", data.test, data.validation, learned_scorer(data.table, data.idf, model));
  const auto b = evaluate_method("b", data.test, data.validation, learned_scorer(data.table, data.idf, scaled));
  CHECK(a.split_error == b.split_error);
  CHECK(b.theta == doctest::Approx(4.0 * a.theta));
}
