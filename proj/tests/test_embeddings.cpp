#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace rankweight;

TEST_CASE("load_embeddings reads the textual format") {
  std::istringstream in("2 3\ncat 1 0 0\ndog 0 1 0\n");
  const auto table = load_embeddings(in);
  CHECK(table.dimension() == 3);
  CHECK(table.vocabulary_size() == 2);
  const auto cat = table.lookup("cat");
  REQUIRE(cat);
  CHECK((*cat)[0] == 1.0);
  CHECK((*cat)[1] == 0.0);
  CHECK((*cat)[2] == 0.0);
}

TEST_CASE("load_embeddings reports a dimension mismatch with its line") {
  std::istringstream in("1 2\na 1 2 3\n");
  try {
    load_embeddings(in);
    FAIL("expected a parse error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("dimension mismatch, line 2") != std::string::npos);
  }
}

TEST_CASE("load_embeddings rejects non-finite values and empty files") {
  std::istringstream nan_in("1 2\na 1 nan\n");
  CHECK_THROWS_AS(load_embeddings(nan_in), DataError);
  std::istringstream garbage("1 2\na 1 x\n");
  CHECK_THROWS_AS(load_embeddings(garbage), DataError);
  std::istringstream empty("0 2\n");
  CHECK_THROWS_AS(load_embeddings(empty), DataError);
}

TEST_CASE("duplicate tokens keep the first vector") {
  std::istringstream in("2 2\ncat 1 2\ncat 3 4\n");
  const auto table = load_embeddings(in);
  CHECK(table.vocabulary_size() == 1);
  CHECK(table.duplicate_count() == 1);
  CHECK((*table.lookup("cat"))[0] == 1.0);
}

TEST_CASE("lookup is exact and never matches the empty token") {
  std::istringstream in("1 2\ncat 0.25 -1.5\n");
  const auto table = load_embeddings(in);
  CHECK(table.lookup("cat"));
  CHECK_FALSE(table.lookup("CAT"));
  CHECK_FALSE(table.lookup(""));
}

TEST_CASE("embeddings survive a save/load round trip") {
  std::mt19937_64 rng(7);
  const auto world = testsupport::random_world(rng, 5, 30);
  std::stringstream buf;
  save_embeddings(world.table, buf);
  const auto back = load_embeddings(buf);
  REQUIRE(back.vocabulary_size() == world.table.vocabulary_size());
  for (const auto& tok : world.vocabulary) {
    const VectorXd a = *world.table.lookup(tok);
    const VectorXd b = *back.lookup(tok);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("smoothed idf values") {
  const auto idf = compute_idf({{"the", 99}, {"rare", 24}, {"unique", 0}}, 100);
  CHECK(*idf.idf("the") == 0.0);
  CHECK(*idf.idf("rare") == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(*idf.idf("unique") == doctest::Approx(4.605170).epsilon(1e-6));
  CHECK_FALSE(idf.idf("missing"));
  CHECK(idf.idf_or_unseen("missing") == doctest::Approx(std::log(100.0)));
}

TEST_CASE("compute_idf rejects bad inputs") {
  CHECK_THROWS(compute_idf({{"a", 1}}, 0));
  CHECK_THROWS(compute_idf({{"a", -1}}, 10));
}

TEST_CASE("idf decreases as document frequency grows") {
  std::map<std::string, std::int64_t> df;
  for (int i = 0; i < 50; ++i) df["t" + std::to_string(i)] = 2 * i;
  const auto idf = compute_idf(df, 1000);
  for (int i = 1; i < 50; ++i) {
    CHECK(*idf.idf("t" + std::to_string(i)) < *idf.idf("t" + std::to_string(i - 1)));
  }
}

TEST_CASE("document-frequency TSV round trip and errors") {
  const auto idf = compute_idf({{"a", 3}, {"b", 0}}, 10);
  std::stringstream buf;
  save_doc_freq(idf, buf);
  const auto back = load_doc_freq(buf);
  CHECK(back.corpus_size() == 10);
  CHECK(back.doc_freq() == idf.doc_freq());

  std::istringstream no_header("a\t3\n");
  CHECK_THROWS_AS(load_doc_freq(no_header), DataError);
  std::istringstream bad("N\t10\na\tx\n");
  try {
    load_doc_freq(bad);
    FAIL("expected a parse error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("count_doc_freq counts each document once per token") {
  const auto counts = count_doc_freq({{"a", "a", "b"}, {"b"}, {"c"}});
  CHECK(counts.documents == 3);
  CHECK(counts.doc_freq.at("a") == 1);
  CHECK(counts.doc_freq.at("b") == 2);
  CHECK(counts.doc_freq.at("c") == 1);
}
