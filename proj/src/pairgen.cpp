#include "rankweight/pairgen.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

namespace rankweight {

namespace {

NormalizedText slice(const NormalizedText& text, std::size_t begin, std::size_t length) {
  return NormalizedText{std::vector<std::string>(text.tokens.begin() + begin,
                                                 text.tokens.begin() + begin + length)};
}

std::vector<std::string> split_on_space(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = s.find(' ', i);
    if (j == std::string_view::npos) j = s.size();
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<Article> read_corpus(std::istream& in) {
  std::vector<Article> articles;
  std::string line;
  bool open = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      open = false;
      continue;
    }
    if (!open) {
      articles.push_back(Article{std::to_string(articles.size()), {}});
      open = true;
    }
    auto text = normalize(line);
    if (!text.empty()) articles.back().paragraphs.push_back(std::move(text));
  }
  std::erase_if(articles, [](const Article& a) { return a.paragraphs.empty(); });
  return articles;
}

std::vector<TextPair> wiki_pairs(const std::vector<Article>& articles,
                                 const WikiPairOptions& options) {
  if (options.n_min < 1 || options.n_min > options.n_max) {
    throw std::invalid_argument("wiki_pairs: need 1 <= n_min <= n_max");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> draw_length(options.n_min, options.n_max);

  std::vector<TextPair> related;
  std::vector<std::pair<std::size_t, std::size_t>> paragraphs;
  for (std::size_t a = 0; a < articles.size(); ++a) {
    for (std::size_t p = 0; p < articles[a].paragraphs.size(); ++p) paragraphs.emplace_back(a, p);
  }
  std::shuffle(paragraphs.begin(), paragraphs.end(), rng);
  for (auto [a, p] : paragraphs) {
    if (related.size() >= options.count) break;
    const auto& text = articles[a].paragraphs[p];
    std::size_t offset = 0;
    while (related.size() < options.count) {
      const auto len_a = static_cast<std::size_t>(draw_length(rng));
      const auto len_b = static_cast<std::size_t>(draw_length(rng));
      if (offset + len_a + 2 + len_b > text.size()) break;
      related.push_back(
          {slice(text, offset, len_a), slice(text, offset + len_a + 2, len_b), Label::Related});
      offset += len_a + 2 + len_b;
    }
  }
  if (related.size() < options.count) {
    throw DataError("corpus yields only " + std::to_string(related.size()) + " of " +
                    std::to_string(options.count) + " requested related pairs (short by " +
                    std::to_string(options.count - related.size()) + ")");
  }

  // Articles that can host at least the shortest span.
  std::vector<std::size_t> usable;
  for (std::size_t a = 0; a < articles.size(); ++a) {
    for (const auto& para : articles[a].paragraphs) {
      if (para.size() >= static_cast<std::size_t>(options.n_min)) {
        usable.push_back(a);
        break;
      }
    }
  }
  std::vector<TextPair> unrelated;
  if (usable.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 1);
    auto draw_span = [&](std::size_t article, std::size_t length) -> std::optional<NormalizedText> {
      std::vector<const NormalizedText*> fits;
      for (const auto& para : articles[article].paragraphs) {
        if (para.size() >= length) fits.push_back(&para);
      }
      if (fits.empty()) return std::nullopt;
      const auto& para =
          *fits[std::uniform_int_distribution<std::size_t>(0, fits.size() - 1)(rng)];
      const auto start = std::uniform_int_distribution<std::size_t>(0, para.size() - length)(rng);
      return slice(para, start, length);
    };
    const std::size_t max_attempts = 100 * options.count + 1000;
    for (std::size_t attempt = 0; attempt < max_attempts && unrelated.size() < options.count;
         ++attempt) {
      const auto a = usable[pick(rng)];
      const auto b = usable[pick(rng)];
      if (a == b) continue;
      const auto len_a = static_cast<std::size_t>(draw_length(rng));
      const auto len_b = static_cast<std::size_t>(draw_length(rng));
      auto span_a = draw_span(a, len_a);
      auto span_b = draw_span(b, len_b);
      if (!span_a || !span_b) continue;
      unrelated.push_back({std::move(*span_a), std::move(*span_b), Label::NonRelated});
    }
  }
  if (unrelated.size() < options.count) {
    throw DataError("corpus yields only " + std::to_string(unrelated.size()) + " of " +
                    std::to_string(options.count) +
                    " requested non-related pairs (needs two articles with paragraphs of at "
                    "least n_min words)");
  }

  std::vector<TextPair> out;
  out.reserve(2 * options.count);
  std::move(related.begin(), related.end(), std::back_inserter(out));
  std::move(unrelated.begin(), unrelated.end(), std::back_inserter(out));
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& x : a) shared += b.count(x);
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

const std::set<std::string>& uninformative_hashtags() {
  static const std::set<std::string> tags{"breaking", "update", "news"};
  return tags;
}

std::vector<TweetRecord> read_tweets(std::istream& in) {
  std::vector<TweetRecord> tweets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      TweetRecord rec;
      rec.text = obj.at("text").get<std::string>();
      for (const auto& tag : obj.at("hashtags")) {
        auto t = tag.get<std::string>();
        if (!t.empty() && t.front() == '#') t.erase(0, 1);
        std::string normalized;
        for (const auto& piece : normalize(t).tokens) normalized += piece;
        if (!normalized.empty()) rec.hashtags.insert(normalized);
      }
      rec.timestamp = obj.at("timestamp").get<std::int64_t>();
      if (obj.contains("author")) rec.author = obj.at("author").get<std::string>();
      tweets.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("tweet record, line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return tweets;
}

namespace {

struct PreparedTweet {
  TweetTokens tokens;
  std::set<std::string> words;
  std::set<std::string> hashtags;
  std::int64_t timestamp = 0;
};

PreparedTweet prepare(const TweetRecord& rec) {
  PreparedTweet t;
  t.tokens = normalize_tweet(rec.text);
  const auto& drop = uninformative_hashtags();
  for (const auto& tag : rec.hashtags) {
    if (!drop.count(tag)) t.hashtags.insert(tag);
  }
  // Hashtags that only appear inline still count as the tweet's tags.
  for (const auto& tag : t.tokens.hashtags) {
    if (!drop.count(tag)) t.hashtags.insert(tag);
  }
  t.words.insert(t.tokens.words.begin(), t.tokens.words.end());
  t.timestamp = rec.timestamp;
  return t;
}

NormalizedText emit(const PreparedTweet& t, const std::set<std::string>& shared_tags) {
  const auto& drop = uninformative_hashtags();
  NormalizedText out;
  for (std::size_t k = 0; k < t.tokens.tokens.size(); ++k) {
    const auto& token = t.tokens.tokens[k];
    if (t.tokens.is_hashtag[k] && (shared_tags.count(token) || drop.count(token))) continue;
    out.tokens.push_back(token);
  }
  return out;
}

std::set<std::string> intersection(const std::set<std::string>& a,
                                   const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

constexpr std::array<const char*, 4> kRuleNames{
    "rule 1 (at least 5 words besides hashtags, mentions and URLs)",
    "rule 2 (hashtag Jaccard condition)", "rule 3 (at most 15 minutes apart)",
    "rule 4 (word Jaccard below 0.5)"};

std::string worst_rule(const std::array<std::size_t, 4>& rejected) {
  const auto it = std::max_element(rejected.begin(), rejected.end());
  return std::string(kRuleNames[static_cast<std::size_t>(it - rejected.begin())]) +
         " rejected " + std::to_string(*it) + " candidates";
}

}  // namespace

std::vector<TextPair> tweet_pairs(const std::vector<TweetRecord>& tweets,
                                  const TweetPairOptions& options) {
  std::vector<PreparedTweet> prepared;
  prepared.reserve(tweets.size());
  for (const auto& rec : tweets) prepared.push_back(prepare(rec));
  std::mt19937_64 rng(options.seed);

  auto enough_words = [&](const PreparedTweet& t) {
    return t.tokens.words.size() >= options.min_words;
  };

  // Related candidates, checked exhaustively with rules in order 1..4.
  std::array<std::size_t, 4> rejected_related{};
  std::vector<std::pair<std::size_t, std::size_t>> related_candidates;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    for (std::size_t j = i + 1; j < prepared.size(); ++j) {
      const auto& a = prepared[i];
      const auto& b = prepared[j];
      if (!enough_words(a) || !enough_words(b)) {
        ++rejected_related[0];
      } else if (jaccard(a.hashtags, b.hashtags) < options.related_tag_jaccard) {
        ++rejected_related[1];
      } else if (std::abs(a.timestamp - b.timestamp) > options.max_seconds_apart) {
        ++rejected_related[2];
      } else if (jaccard(a.words, b.words) >= options.max_word_jaccard) {
        ++rejected_related[3];
      } else {
        related_candidates.emplace_back(i, j);
      }
    }
  }
  if (related_candidates.size() < options.count) {
    throw DataError("insufficient related tweet pairs: found " +
                    std::to_string(related_candidates.size()) + " of " +
                    std::to_string(options.count) + "; " + worst_rule(rejected_related));
  }
  std::shuffle(related_candidates.begin(), related_candidates.end(), rng);
  related_candidates.resize(options.count);

  // Non-related pairs are sampled; disjoint hashtag sets are the common case.
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    if (enough_words(prepared[i]) && !prepared[i].hashtags.empty()) eligible.push_back(i);
  }
  std::array<std::size_t, 4> rejected_unrelated{};
  rejected_unrelated[0] = prepared.size() - eligible.size();
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  std::vector<std::pair<std::size_t, std::size_t>> unrelated;
  if (eligible.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    const std::size_t max_attempts = 200 * options.count + 1000;
    for (std::size_t attempt = 0; attempt < max_attempts && unrelated.size() < options.count;
         ++attempt) {
      auto i = eligible[pick(rng)];
      auto j = eligible[pick(rng)];
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      if (chosen.count({i, j})) continue;
      const auto& a = prepared[i];
      const auto& b = prepared[j];
      if (jaccard(a.hashtags, b.hashtags) != 0.0) {
        ++rejected_unrelated[1];
      } else if (jaccard(a.words, b.words) >= options.max_word_jaccard) {
        ++rejected_unrelated[3];
      } else {
        chosen.insert({i, j});
        unrelated.emplace_back(i, j);
      }
    }
  }
  if (unrelated.size() < options.count) {
    throw DataError("insufficient non-related tweet pairs: found " +
                    std::to_string(unrelated.size()) + " of " + std::to_string(options.count) +
                    "; " + worst_rule(rejected_unrelated));
  }

  std::vector<TextPair> out;
  out.reserve(2 * options.count);
  for (auto [i, j] : related_candidates) {
    const auto shared = intersection(prepared[i].hashtags, prepared[j].hashtags);
    out.push_back({emit(prepared[i], shared), emit(prepared[j], shared), Label::Related});
  }
  for (auto [i, j] : unrelated) {
    out.push_back({emit(prepared[i], {}), emit(prepared[j], {}), Label::NonRelated});
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

void write_pairs(const std::vector<TextPair>& pairs, std::ostream& out) {
  for (const auto& pair : pairs) {
    out << (pair.label == Label::Related ? '1' : '0') << '\t' << join(pair.text_a.tokens)
        << '\t' << join(pair.text_b.tokens) << '\n';
  }
}

std::vector<TextPair> read_pairs(std::istream& in) {
  std::vector<TextPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw DataError("pair file, line " + std::to_string(line_no) +
                      ": expected \"label\\ttext_a\\ttext_b\"");
    }
    const auto label = std::string_view(line).substr(0, t1);
    TextPair pair;
    if (label == "1") {
      pair.label = Label::Related;
    } else if (label == "0") {
      pair.label = Label::NonRelated;
    } else {
      throw DataError("pair file, line " + std::to_string(line_no) + ": label must be 1 or 0");
    }
    pair.text_a.tokens = split_on_space(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    pair.text_b.tokens = split_on_space(std::string_view(line).substr(t2 + 1));
    if (pair.text_a.empty() || pair.text_b.empty()) {
      throw DataError("pair file, line " + std::to_string(line_no) + ": empty text");
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<TextPair> read_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pair file " + path);
  return read_pairs(in);
}

}  // namespace rankweight
