#include "support.hpp"

#include "rankweight/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using rankweight::cli::dispatch;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("usage errors exit with 1 and help exits with 0") {
  CHECK(dispatch(std::vector<std::string>{}) == 1);
  CHECK(dispatch({"frobnicate"}) == 1);
  CHECK(dispatch({"train", "--bogus"}) == 1);
  CHECK(dispatch({"--help"}) == 0);
  CHECK(dispatch({"train", "--help"}) == 0);
}

TEST_CASE("missing inputs exit with 2") {
  const auto dir = testsupport::scratch_dir("cli_missing");
  CHECK(dispatch({"idf-build", "--corpus", (dir / "nope.txt").string(), "--out",
                  (dir / "df.tsv").string()}) == 2);
}

TEST_CASE("idf-build writes document frequencies and a manifest") {
  const auto dir = testsupport::scratch_dir("cli_idf");
  write_file(dir / "corpus.txt", "The cat sat.\nThe dog ran.\n\nA cat again.\n");
  const auto out = (dir / "df.tsv").string();
  REQUIRE(dispatch({"idf-build", "--corpus", (dir / "corpus.txt").string(), "--out", out}) == 0);
  const auto idf = rankweight::load_doc_freq_file(out);
  CHECK(idf.corpus_size() == 2);
  CHECK(idf.doc_freq().at("cat") == 2);
  CHECK(idf.doc_freq().at("the") == 1);

  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest.at("command") == "idf-build");
  CHECK(manifest.at("input_digests").size() == 1);
  CHECK(manifest.at("config").at("unit") == "article");

  REQUIRE(dispatch({"idf-build", "--corpus", (dir / "corpus.txt").string(), "--out", out, "--unit",
                    "paragraph"}) == 0);
  CHECK(rankweight::load_doc_freq_file(out).corpus_size() == 3);
}

TEST_CASE("file digests are SHA-256") {
  const auto dir = testsupport::scratch_dir("cli_digest");
  write_file(dir / "abc.txt", "abc");
  CHECK(rankweight::cli::file_digest((dir / "abc.txt").string()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("synth, train, eval and embed run end to end") {
  const auto dir = testsupport::scratch_dir("cli_pipeline");
  const auto d = [&](const char* name) { return (dir / name).string(); };
  REQUIRE(dispatch({"synth", "--out-dir", dir.string(), "--related", "200", "--nonrelated", "200"}) == 0);
  const std::vector<std::string> train_args{"train", "--pairs", d("train.tsv"), "--emb", d("emb.txt"),
                                            "--df", d("df.tsv"), "--nmax", "10", "--batch", "20"};
  auto first = train_args;
  first.insert(first.end(), {"--out", d("m1.json")});
  auto second = train_args;
  second.insert(second.end(), {"--out", d("m2.json")});
  REQUIRE(dispatch(first) == 0);
  REQUIRE(dispatch(second) == 0);
  CHECK(slurp(d("m1.json")) == slurp(d("m2.json")));
  CHECK(fs::exists(d("m1.json.log.tsv")));
  CHECK(slurp(d("m1.json.log.tsv")).rfind("epoch\tmean_loss\teta\twall_seconds\n", 0) == 0);

  REQUIRE(dispatch({"eval", "--pairs", d("test.tsv"), "--val", d("val.tsv"), "--model", d("m1.json"),
                    "--report", d("report.json"), "--hist", d("hist.csv")}) == 0);
  const auto report = nlohmann::json::parse(slurp(d("report.json")));
  CHECK(report.at("split_error").get<double>() < 0.2);
  CHECK(report.at("histogram_related").size() == 100);

  REQUIRE(dispatch({"baseline-eval", "--pairs", d("test.tsv"), "--val", d("val.tsv"), "--emb",
                    d("emb.txt"), "--df", d("df.tsv"), "--model", d("m1.json"), "--report",
                    d("baselines.json"), "--methods", "tfidf,mean"}) == 0);
  const auto baselines = nlohmann::json::parse(slurp(d("baselines.json")));
  REQUIRE(baselines.size() == 3);
  CHECK(baselines[0].contains("sign_test_vs_learned"));
  CHECK_FALSE(baselines[2].contains("sign_test_vs_learned"));

  REQUIRE(dispatch({"embed", "--emb", d("emb.txt"), "--df", d("df.tsv"), "--method", "mean", "--text",
                    "topic1word2 stop3", "--out", d("vec.csv")}) == 0);
  const auto csv = slurp(d("vec.csv"));
  CHECK(std::count(csv.begin(), csv.end(), ',') == 19);
  CHECK(dispatch({"embed", "--emb", d("emb.txt"), "--df", d("df.tsv"), "--text", "x"}) == 1);
}

TEST_CASE("a config file supplies defaults that flags override") {
  const auto dir = testsupport::scratch_dir("cli_config");
  write_file(dir / "corpus.txt", "a b\nb c\n");
  write_file(dir / "run.toml", "[idf-build]\nunit = \"paragraph\"\n");
  const auto out = (dir / "df.tsv").string();
  REQUIRE(dispatch({"--config", (dir / "run.toml").string(), "idf-build", "--corpus",
                    (dir / "corpus.txt").string(), "--out", out}) == 0);
  CHECK(rankweight::load_doc_freq_file(out).corpus_size() == 2);
  REQUIRE(dispatch({"--config", (dir / "run.toml").string(), "idf-build", "--corpus",
                    (dir / "corpus.txt").string(), "--out", out, "--unit", "article"}) == 0);
  CHECK(rankweight::load_doc_freq_file(out).corpus_size() == 1);
}
