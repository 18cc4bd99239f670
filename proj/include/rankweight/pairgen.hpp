#pragma once

#include "rankweight/textprep.hpp"
#include "rankweight/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace rankweight {

struct TextPair {
  NormalizedText text_a;
  NormalizedText text_b;
  Label label = Label::Related;

  bool operator==(const TextPair&) const = default;
};

struct Article {
  std::string id;
  std::vector<NormalizedText> paragraphs;
};

/// Plain-text corpus: one paragraph per line, blank lines between articles.
/// Paragraphs are normalized on the way in; empty ones are dropped.
std::vector<Article> read_corpus(std::istream& in);

struct WikiPairOptions {
  int n_min = 20;
  int n_max = 20;
  std::size_t count = 1000;  // per label
  std::uint64_t seed = 42;
};

/// Related pairs take a span of n words, skip two, and take the next span
/// from the same paragraph. Non-related pairs take one span from each of
/// two distinct random articles. Span lengths are drawn independently for
/// each text in [n_min, n_max]. Throws DataError if the corpus cannot
/// supply `count` pairs of each label.
std::vector<TextPair> wiki_pairs(const std::vector<Article>& articles,
                                 const WikiPairOptions& options);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

struct TweetRecord {
  std::string text;
  std::set<std::string> hashtags;
  std::int64_t timestamp = 0;
  std::string author;
};

/// Line-delimited JSON objects with text, hashtags, timestamp and author.
std::vector<TweetRecord> read_tweets(std::istream& in);

struct TweetPairOptions {
  std::size_t count = 1000;  // per label
  std::uint64_t seed = 42;
  std::size_t min_words = 5;
  double related_tag_jaccard = 0.5;
  std::int64_t max_seconds_apart = 15 * 60;
  double max_word_jaccard = 0.5;
};

const std::set<std::string>& uninformative_hashtags();

/// Related iff: both tweets have at least min_words words outside
/// hashtags/mentions/URLs, hashtag Jaccard >= 0.5, at most 15 minutes
/// apart, and word Jaccard < 0.5. Non-related: the word rules hold and the
/// hashtag sets are disjoint. Hashtags shared by the two tweets are removed
/// from both emitted texts.
std::vector<TextPair> tweet_pairs(const std::vector<TweetRecord>& tweets,
                                  const TweetPairOptions& options);

/// Pair TSV: "label\ttext_a\ttext_b", label 1 (related) or 0.
void write_pairs(const std::vector<TextPair>& pairs, std::ostream& out);
std::vector<TextPair> read_pairs(std::istream& in);
std::vector<TextPair> read_pairs_file(const std::string& path);

}  // namespace rankweight
