#pragma once

#include "rankweight/embeddings.hpp"
#include "rankweight/pairgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rankweight {

/// Topic-cluster toy world in which idf rank tracks informativeness:
/// topic words are rare and sit near their topic centre, stopwords are
/// frequent and scatter widely around the mean of all centres.
struct SyntheticOptions {
  int dimension = 20;
  int topics = 10;
  int words_per_topic = 40;
  int stopwords = 50;
  int min_length = 10;
  int max_length = 30;
  double topic_fraction = 0.4;
  double center_scale = 1.0;   // per-dimension sd of topic centres
  double topic_noise = 0.5;    // per-dimension sd of topic words around their centre
  double stopword_noise = 3.0; // per-dimension sd of stopwords around the global mean
  std::size_t related = 2000;
  std::size_t nonrelated = 2000;
  double train_fraction = 0.5;
  double validation_fraction = 0.25;
  bool shuffle_labels = false;
  std::int64_t corpus_size = 100000;
  std::uint64_t seed = 42;
};

struct SyntheticDataset {
  EmbeddingTable table;
  IdfTable idf;
  std::vector<TextPair> train;
  std::vector<TextPair> validation;
  std::vector<TextPair> test;
};

SyntheticDataset make_synthetic(const SyntheticOptions& options);

}  // namespace rankweight
