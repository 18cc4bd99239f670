#pragma once

#include "rankweight/embeddings.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rankweight {

/// Lowercased, punctuation-free tokens; every ASCII digit run is "0".
struct NormalizedText {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const NormalizedText&) const = default;
};

/// Tokens ordered by descending idf. source_positions[j] is the 0-based
/// index in the input text of the token now at rank j.
struct SortedText {
  std::vector<std::string> tokens;
  std::vector<double> idf;
  std::vector<std::size_t> source_positions;

  std::size_t size() const { return tokens.size(); }
};

/// Removes Unicode punctuation (P*) and symbols (S*), lowercases, and
/// replaces every maximal ASCII digit run with "0". A punctuation run
/// touching a digit separates tokens ("2015--2016" gives "0 0"); elsewhere
/// it is simply deleted ("A.B." gives "ab").
NormalizedText normalize(std::string_view raw);

/// Tweet text split into its parts. URLs and @mentions are dropped;
/// hashtags keep their text without the '#'.
struct TweetTokens {
  std::vector<std::string> words;     // excludes hashtags, mentions and URLs
  std::vector<std::string> hashtags;  // in order of appearance, '#' stripped
  std::vector<std::string> tokens;    // words and hashtags in source order
  std::vector<bool> is_hashtag;       // parallel to tokens
};

TweetTokens normalize_tweet(std::string_view raw);

/// Stable descending sort on idf. Tokens missing from the idf table are
/// treated as df = 0, i.e. idf = ln(N).
SortedText sort_by_idf(const NormalizedText& text, const IdfTable& idf);

std::string join(const std::vector<std::string>& tokens, char sep = ' ');

}  // namespace rankweight
