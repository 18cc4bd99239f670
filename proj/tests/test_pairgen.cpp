#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace rankweight;
using testsupport::text;
using Tokens = std::vector<std::string>;

namespace {

Tokens numbered(const std::string& stem, int n) {
  Tokens out;
  for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

Tokens slice(const Tokens& t, int first, int count) {
  return Tokens(t.begin() + first, t.begin() + first + count);
}

std::vector<Article> two_articles(int length) {
  return {Article{"A", {text(numbered("t", length))}}, Article{"B", {text(numbered("u", length))}}};
}

WikiPairOptions fixed_length(int n, std::size_t count, std::uint64_t seed = 1) {
  WikiPairOptions o;
  o.n_min = o.n_max = n;
  o.count = count;
  o.seed = seed;
  return o;
}

TweetRecord tweet(const std::string& body, std::set<std::string> tags, std::int64_t ts) {
  return TweetRecord{body, std::move(tags), ts, ""};
}

}  // namespace

TEST_CASE("related spans skip two words inside one paragraph") {
  const auto pairs = wiki_pairs(two_articles(12), fixed_length(5, 1));
  REQUIRE(pairs.size() == 2);
  int related = 0;
  for (const auto& p : pairs) {
    const auto& a = p.text_a.tokens;
    const auto& b = p.text_b.tokens;
    REQUIRE(a.size() == 5);
    REQUIRE(b.size() == 5);
    if (p.label == Label::Related) {
      ++related;
      const auto stem = a.front().substr(0, 1);
      const auto full = numbered(stem, 12);
      CHECK(a == slice(full, 0, 5));
      CHECK(b == slice(full, 7, 5));
    } else {
      CHECK(a.front()[0] != b.front()[0]);
    }
  }
  CHECK(related == 1);
}

TEST_CASE("paragraphs shorter than 2n+2 yield no related pair") {
  CHECK_THROWS_AS(wiki_pairs(two_articles(11), fixed_length(5, 1)), DataError);
}

TEST_CASE("wiki pairs are balanced, sized and reproducible") {
  std::vector<Article> corpus;
  for (int a = 0; a < 20; ++a) {
    Article art{"a" + std::to_string(a), {}};
    for (int p = 0; p < 3; ++p) {
      art.paragraphs.push_back(text(numbered("a" + std::to_string(a) + "p" + std::to_string(p) + "w", 40)));
    }
    corpus.push_back(art);
  }
  WikiPairOptions o;
  o.n_min = 5;
  o.n_max = 12;
  o.count = 30;
  o.seed = 9;
  const auto first = wiki_pairs(corpus, o);
  CHECK(first == wiki_pairs(corpus, o));
  std::size_t related = 0;
  for (const auto& p : first) {
    related += p.label == Label::Related;
    CHECK(p.text_a.size() >= 5);
    CHECK(p.text_a.size() <= 12);
    CHECK(p.text_b.size() >= 5);
    CHECK(p.text_b.size() <= 12);
  }
  CHECK(first.size() == 60);
  CHECK(related == 30);
  o.seed = 10;
  CHECK_FALSE(first == wiki_pairs(corpus, o));
}

TEST_CASE("jaccard similarity") {
  CHECK(jaccard({"x", "y"}, {"y", "z"}) == doctest::Approx(1.0 / 3.0));
  CHECK(jaccard({"x"}, {"x"}) == 1.0);
  CHECK(jaccard({}, {}) == 0.0);
}

TEST_CASE("tweets sharing tags ten minutes apart form a related pair") {
  const std::vector<TweetRecord> tweets{
      tweet("ant bee cat dog elk fox #storm", {"storm"}, 0),
      tweet("gnu hen ibis jay elk fox #Storm", {"storm"}, 600),
      tweet("kiwi lark mole newt owl pig", {"music"}, 5000),
  };
  TweetPairOptions o;
  o.count = 1;
  const auto pairs = tweet_pairs(tweets, o);
  REQUIRE(pairs.size() == 2);
  for (const auto& p : pairs) {
    if (p.label == Label::Related) {
      CHECK(p.text_a.tokens == Tokens{"ant", "bee", "cat", "dog", "elk", "fox"});
      CHECK(p.text_b.tokens == Tokens{"gnu", "hen", "ibis", "jay", "elk", "fox"});
    } else {
      const bool has_c = p.text_a.tokens.front() == "kiwi" || p.text_b.tokens.front() == "kiwi";
      CHECK(has_c);
    }
  }
}

TEST_CASE("tweets twenty minutes apart are rejected") {
  const std::vector<TweetRecord> tweets{
      tweet("ant bee cat dog elk fox", {"storm"}, 0),
      tweet("gnu hen ibis jay elk fox", {"storm"}, 1200),
      tweet("kiwi lark mole newt owl pig", {"music"}, 5000),
  };
  TweetPairOptions o;
  o.count = 1;
  CHECK_THROWS_AS(tweet_pairs(tweets, o), DataError);
}

TEST_CASE("the shortfall error names the dominant rule") {
  std::vector<TweetRecord> tweets;
  for (int i = 0; i < 6; ++i) tweets.push_back(tweet("one two", {"storm"}, 60 * i));
  TweetPairOptions o;
  o.count = 1;
  try {
    tweet_pairs(tweets, o);
    FAIL("expected a shortfall");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("rule 1") != std::string::npos);
  }
}

TEST_CASE("uninformative hashtags do not make tweets related") {
  const std::vector<TweetRecord> tweets{
      tweet("ant bee cat dog elk fox", {"breaking", "x"}, 0),
      tweet("gnu hen ibis jay kiwi lark", {"breaking", "y"}, 60),
  };
  TweetPairOptions o;
  o.count = 1;
  CHECK_THROWS_AS(tweet_pairs(tweets, o), DataError);
}

TEST_CASE("pair TSV round trip") {
  const std::vector<TextPair> pairs{{text({"a", "b"}), text({"c"}), Label::Related},
                                    {text({"d"}), text({"e", "f"}), Label::NonRelated}};
  std::stringstream buf;
  write_pairs(pairs, buf);
  CHECK(buf.str() == "1\ta b\tc\n0\td\te f\n");
  CHECK(read_pairs(buf) == pairs);
  std::istringstream empty_text("1\t\tc\n");
  CHECK_THROWS_AS(read_pairs(empty_text), DataError);
}

TEST_CASE("read_corpus splits articles on blank lines") {
  std::istringstream in("First para.\nSecond, para!\n\n\nOther article 12\n");
  const auto articles = read_corpus(in);
  REQUIRE(articles.size() == 2);
  CHECK(articles[0].paragraphs.size() == 2);
  CHECK(articles[1].paragraphs[0].tokens == Tokens{"other", "article", "0"});
}
