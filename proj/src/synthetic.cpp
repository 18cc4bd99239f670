#include "rankweight/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rankweight {

namespace {

std::string topic_word(int topic, int index) {
  return "topic" + std::to_string(topic) + "word" + std::to_string(index);
}

std::string stopword(int index) { return "stop" + std::to_string(index); }

}  // namespace

SyntheticDataset make_synthetic(const SyntheticOptions& o) {
  if (o.topics < 2) throw std::invalid_argument("synthetic data needs at least two topics");
  if (o.min_length < 1 || o.min_length > o.max_length) {
    throw std::invalid_argument("synthetic data needs 1 <= min_length <= max_length");
  }
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&](double sd) {
    VectorXd v(o.dimension);
    for (int k = 0; k < o.dimension; ++k) v[k] = sd * gauss(rng);
    return v;
  };

  std::vector<VectorXd> centers;
  VectorXd global = VectorXd::Zero(o.dimension);
  for (int t = 0; t < o.topics; ++t) {
    centers.push_back(random_vector(o.center_scale));
    global += centers.back();
  }
  global /= static_cast<double>(o.topics);

  std::vector<std::string> tokens;
  std::vector<VectorXd> vectors;
  std::map<std::string, std::int64_t> doc_freq;
  std::uniform_int_distribution<std::int64_t> rare_df(1, 50);
  std::uniform_int_distribution<std::int64_t> common_df(o.corpus_size / 10, o.corpus_size / 2);
  for (int t = 0; t < o.topics; ++t) {
    for (int w = 0; w < o.words_per_topic; ++w) {
      tokens.push_back(topic_word(t, w));
      vectors.push_back(centers[static_cast<std::size_t>(t)] + random_vector(o.topic_noise));
      doc_freq[tokens.back()] = rare_df(rng);
    }
  }
  for (int s = 0; s < o.stopwords; ++s) {
    tokens.push_back(stopword(s));
    vectors.push_back(global + random_vector(o.stopword_noise));
    doc_freq[tokens.back()] = common_df(rng);
  }

  SyntheticDataset data;
  data.table = EmbeddingTable(o.dimension, tokens, vectors);
  data.idf = compute_idf(doc_freq, o.corpus_size);

  std::uniform_int_distribution<int> length(o.min_length, o.max_length);
  std::uniform_int_distribution<int> pick_topic(0, o.topics - 1);
  std::uniform_int_distribution<int> pick_word(0, o.words_per_topic - 1);
  std::uniform_int_distribution<int> pick_stop(0, o.stopwords - 1);
  auto make_text = [&](int topic) {
    const int n = length(rng);
    const int topical = std::max(1, static_cast<int>(std::lround(o.topic_fraction * n)));
    NormalizedText text;
    for (int k = 0; k < n; ++k) {
      text.tokens.push_back(k < topical ? topic_word(topic, pick_word(rng))
                                        : stopword(pick_stop(rng)));
    }
    std::shuffle(text.tokens.begin(), text.tokens.end(), rng);
    return text;
  };

  std::vector<TextPair> related;
  std::vector<TextPair> unrelated;
  for (std::size_t i = 0; i < o.related; ++i) {
    const int t = pick_topic(rng);
    related.push_back({make_text(t), make_text(t), Label::Related});
  }
  for (std::size_t i = 0; i < o.nonrelated; ++i) {
    const int a = pick_topic(rng);
    int b = pick_topic(rng);
    while (b == a) b = pick_topic(rng);
    unrelated.push_back({make_text(a), make_text(b), Label::NonRelated});
  }

  // Stratified split keeps every part balanced.
  auto split = [&](std::vector<TextPair>& pool) {
    const auto n_train = static_cast<std::size_t>(std::llround(o.train_fraction * pool.size()));
    const auto n_val = static_cast<std::size_t>(std::llround(o.validation_fraction * pool.size()));
    for (std::size_t i = 0; i < pool.size(); ++i) {
      auto& dst = i < n_train ? data.train : i < n_train + n_val ? data.validation : data.test;
      dst.push_back(std::move(pool[i]));
    }
  };
  split(related);
  split(unrelated);
  for (auto* part : {&data.train, &data.validation, &data.test}) {
    std::shuffle(part->begin(), part->end(), rng);
    if (o.shuffle_labels) {
      std::vector<Label> labels;
      for (const auto& p : *part) labels.push_back(p.label);
      std::shuffle(labels.begin(), labels.end(), rng);
      for (std::size_t i = 0; i < part->size(); ++i) (*part)[i].label = labels[i];
    }
  }
  return data;
}

}  // namespace rankweight
