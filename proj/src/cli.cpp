#include "rankweight/cli.hpp"

#include "rankweight/aggregate.hpp"
#include "rankweight/embeddings.hpp"
#include "rankweight/evaluate.hpp"
#include "rankweight/learn.hpp"
#include "rankweight/pairgen.hpp"
#include "rankweight/synthetic.hpp"
#include "rankweight/textprep.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace rankweight::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

/// Records what a run consumed and produced; written next to the main output.
struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

void write_manifest(const Manifest& m, const CLI::App& sub, const std::string& output,
                    Clock::time_point start) {
  nlohmann::ordered_json config;
  for (const auto* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
    const auto& key = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& results = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < results.size(); ++i) joined += (i ? "," : "") + results[i];
      config[key] = joined;
    } else {
      config[key] = opt->get_default_str();
    }
  }
  nlohmann::ordered_json digests = nlohmann::ordered_json::object();
  for (const auto& path : m.inputs) digests[path] = file_digest(path);

  nlohmann::ordered_json doc;
  doc["command"] = m.command;
  doc["config"] = std::move(config);
  doc["input_digests"] = std::move(digests);
  if (m.has_seed) doc["seed"] = m.seed;
  doc["tool_version"] = kToolVersion;
  doc["wall_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  auto out = open_output(output + ".manifest.json");
  out << doc.dump(2) << '\n';
}

void progress(const std::string& line) { std::cerr << line << '\n'; }

EmbeddingTable load_table(const std::string& path) {
  auto table = load_embeddings_file(path);
  if (table.duplicate_count() > 0) {
    progress("warning: " + path + " repeats " + std::to_string(table.duplicate_count()) +
             " tokens; the first vector of each was kept");
  }
  return table;
}

// --- shared training flags -------------------------------------------------

struct TrainFlags {
  std::string loss = "median";
  std::string metric = "euclidean";
  TrainConfig config;
};

void add_train_flags(CLI::App* sub, TrainFlags& f, bool with_kappa) {
  sub->add_option("--loss", f.loss, "Loss: median or contrastive")
      ->check(CLI::IsMember({"median", "contrastive"}));
  if (with_kappa) sub->add_option("--kappa", f.config.kappa, "Median-loss sharpness");
  sub->add_option("--lambda", f.config.lambda, "L2 regularization strength");
  sub->add_option("--batch", f.config.batch_size, "Couples per batch (even, half related)");
  sub->add_option("--eta", f.config.eta_initial, "Initial learning rate");
  sub->add_option("--eta-reduced", f.config.eta_reduced, "Learning rate after the first rise");
  sub->add_option("--stop-delta", f.config.stop_delta, "Stop when epoch loss improves less");
  sub->add_option("--nmax", f.config.n_max, "Number of rank weights");
  sub->add_option("--init", f.config.init_weight, "Initial value of every weight");
  sub->add_option("--metric", f.metric, "Distance: euclidean or cosine")
      ->check(CLI::IsMember({"euclidean", "cosine"}));
  sub->add_option("--max-epochs", f.config.max_epochs, "Hard cap on epochs");
  sub->add_option("--seed", f.config.seed, "Seed for batch shuffling");
  sub->add_option("--threads", f.config.threads, "Workers for per-couple gradients");
}

TrainConfig resolve(const TrainFlags& f) {
  TrainConfig c = f.config;
  c.loss = loss_from_string(f.loss);
  c.metric = metric_from_string(f.metric);
  c.validate();
  return c;
}

// --- subcommands -----------------------------------------------------------

struct IdfBuildArgs {
  std::string corpus;
  std::string out;
  std::string format = "corpus";
  std::string unit = "article";
};

void run_idf_build(const IdfBuildArgs& a) {
  auto in = open_input(a.corpus);
  std::vector<std::vector<std::string>> documents;
  if (a.format == "tweets") {
    for (const auto& t : read_tweets(in)) documents.push_back(normalize_tweet(t.text).tokens);
  } else {
    for (const auto& article : read_corpus(in)) {
      if (a.unit == "paragraph") {
        for (const auto& p : article.paragraphs) documents.push_back(p.tokens);
      } else {
        documents.emplace_back();
        for (const auto& p : article.paragraphs) {
          documents.back().insert(documents.back().end(), p.tokens.begin(), p.tokens.end());
        }
      }
    }
  }
  if (documents.empty()) throw DataError("corpus " + a.corpus + " has no documents");
  const auto counts = count_doc_freq(documents);
  const auto table = compute_idf(counts.doc_freq, counts.documents);
  auto out = open_output(a.out);
  save_doc_freq(table, out);
  progress("idf-build: " + std::to_string(counts.documents) + " documents, " +
           std::to_string(counts.doc_freq.size()) + " tokens");
}

struct WikiArgs {
  std::string corpus;
  std::string out;
  WikiPairOptions options;
};

void run_pairs_wiki(const WikiArgs& a) {
  auto in = open_input(a.corpus);
  const auto pairs = wiki_pairs(read_corpus(in), a.options);
  auto out = open_output(a.out);
  write_pairs(pairs, out);
  progress("pairs-wiki: wrote " + std::to_string(pairs.size()) + " pairs");
}

struct TweetArgs {
  std::string tweets;
  std::string out;
  TweetPairOptions options;
};

void run_pairs_tweets(const TweetArgs& a) {
  auto in = open_input(a.tweets);
  const auto pairs = tweet_pairs(read_tweets(in), a.options);
  auto out = open_output(a.out);
  write_pairs(pairs, out);
  progress("pairs-tweets: wrote " + std::to_string(pairs.size()) + " pairs");
}

struct TrainArgs {
  std::string pairs;
  std::string emb;
  std::string df;
  std::string out;
  std::string log;
  TrainFlags flags;
};

void run_train(const TrainArgs& a) {
  const auto config = resolve(a.flags);
  const auto table = load_table(a.emb);
  const auto idf = load_doc_freq_file(a.df);
  const auto dataset = read_pairs_file(a.pairs);
  progress("train: " + std::to_string(dataset.size()) + " pairs, vocabulary " +
           std::to_string(table.vocabulary_size()));
  auto result = train(dataset, table, idf, config);
  if (result.skipped_pairs) {
    progress("train: skipped " + std::to_string(result.skipped_pairs) + " unrepresentable pairs");
  }
  for (const auto& e : result.trace) {
    progress("epoch " + std::to_string(e.epoch) + " mean_loss " + std::to_string(e.mean_loss) +
             " eta " + std::to_string(e.eta));
  }
  auto& extra = result.model.training.extra;
  extra["embeddings"] = a.emb;
  extra["doc_freq"] = a.df;
  extra["epochs"] = std::to_string(result.trace.size());
  extra["converged"] = result.converged ? "true" : "false";
  {
    auto out = open_output(a.out);
    save_model(result.model, out);
  }
  auto log = open_output(a.log.empty() ? a.out + ".log.tsv" : a.log);
  write_training_log(result.trace, log);
}

struct GridArgs {
  std::string pairs;
  std::string emb;
  std::string df;
  std::string out;
  std::vector<double> grid = default_kappa_grid();
  int folds = 5;
  TrainFlags flags;
};

void run_grid_kappa(const GridArgs& a) {
  auto config = resolve(a.flags);
  config.loss = LossKind::Median;
  const auto table = load_table(a.emb);
  const auto idf = load_doc_freq_file(a.df);
  const auto dataset = read_pairs_file(a.pairs);
  const auto couples = prepare_couples(dataset, table, idf, config.n_max);
  const auto result = grid_search_kappa(couples, a.grid, a.folds, config);
  nlohmann::ordered_json doc;
  doc["best_kappa"] = result.best_kappa;
  doc["folds"] = a.folds;
  auto& scores = doc["scores"] = nlohmann::ordered_json::array();
  for (const auto& s : result.scores) {
    progress("kappa " + std::to_string(s.kappa) + " mean split error " +
             std::to_string(s.mean_error));
    scores.push_back({{"kappa", s.kappa},
                      {"mean_error", s.mean_error},
                      {"fold_errors", s.fold_errors},
                      {"failed_folds", s.failed_folds}});
  }
  auto out = open_output(a.out);
  out << doc.dump(2) << '\n';
  std::cout << result.best_kappa << '\n';
}

void write_report(const EvalReport& report, const std::string& report_path,
                  const std::string& hist_path) {
  {
    auto out = open_output(report_path);
    write_report_json(report, out);
  }
  if (!hist_path.empty()) {
    auto out = open_output(hist_path);
    write_histogram_csv(report.histograms, out);
  }
}

struct EvalArgs {
  std::string pairs;
  std::string val;
  std::string model;
  std::string emb;
  std::string df;
  std::string report;
  std::string hist;
  int bins = 100;
  int threads = 1;
};

void run_eval(EvalArgs& a) {
  const auto model = load_model_file(a.model);
  auto from_model = [&](std::string& path, const char* key) {
    if (!path.empty()) return;
    auto it = model.training.extra.find(key);
    if (it == model.training.extra.end()) {
      throw CLI::ValidationError(std::string("--") + (key == std::string("embeddings") ? "emb" : "df") +
                                 " is required: the model does not record it");
    }
    path = it->second;
  };
  from_model(a.emb, "embeddings");
  from_model(a.df, "doc_freq");
  const auto table = load_table(a.emb);
  const auto idf = load_doc_freq_file(a.df);
  const auto test = read_pairs_file(a.pairs);
  const auto validation = read_pairs_file(a.val);
  EvalOptions options;
  options.bins = a.bins;
  options.threads = a.threads;
  const auto report = evaluate_method("learned_" + model.training.loss, test, validation,
                                      learned_scorer(table, idf, model), options);
  write_report(report, a.report, a.hist);
  progress("eval: split error " + std::to_string(report.split_error) + ", JS " +
           std::to_string(report.js_divergence) + ", theta " + std::to_string(report.theta));
}

struct BaselineArgs {
  std::string pairs;
  std::string val;
  std::string emb;
  std::string df;
  std::string model;
  std::string report;
  std::string hist_dir;
  std::vector<std::string> methods;
  int bins = 100;
  int threads = 1;
};

void run_baseline_eval(const BaselineArgs& a) {
  const auto table = load_table(a.emb);
  const auto idf = load_doc_freq_file(a.df);
  const auto test = read_pairs_file(a.pairs);
  const auto validation = read_pairs_file(a.val);
  EvalOptions options;
  options.bins = a.bins;
  options.threads = a.threads;

  std::vector<std::string> methods = a.methods;
  if (methods.empty()) {
    methods.push_back("tfidf");
    for (auto b : all_baselines()) methods.push_back(to_string(b));
  }
  std::vector<EvalReport> reports;
  for (const auto& name : methods) {
    const PairScorer scorer =
        name == "tfidf" ? tfidf_scorer(idf) : baseline_scorer(table, idf, baseline_from_string(name));
    reports.push_back(evaluate_method(name, test, validation, scorer, options));
    progress(name + ": split error " + std::to_string(reports.back().split_error) + ", JS " +
             std::to_string(reports.back().js_divergence));
  }
  std::optional<WeightModel> model;
  if (!a.model.empty()) {
    model = load_model_file(a.model);
    reports.push_back(evaluate_method("learned_" + model->training.loss, test, validation,
                                      learned_scorer(table, idf, *model), options));
    progress(reports.back().method_name + ": split error " +
             std::to_string(reports.back().split_error));
  }

  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    std::ostringstream buf;
    write_report_json(r, buf);
    auto entry = nlohmann::ordered_json::parse(buf.str());
    if (model && &r != &reports.back()) {
      const auto t = compare_methods(reports.back().correct, r.correct);
      entry["sign_test_vs_learned"] = {{"disagreements", t.disagreements},
                                       {"learned_better", t.first_better},
                                       {"p_value", t.p_value}};
    }
    doc.push_back(std::move(entry));
    if (!a.hist_dir.empty()) {
      fs::create_directories(a.hist_dir);
      auto out = open_output((fs::path(a.hist_dir) / (r.method_name + ".csv")).string());
      write_histogram_csv(r.histograms, out);
    }
  }
  auto out = open_output(a.report);
  out << doc.dump(2) << '\n';
}

struct EmbedArgs {
  std::string emb;
  std::string df;
  std::string model;
  std::string method;
  std::vector<std::string> texts;
  std::string texts_file;
  std::string out;
};

void run_embed(const EmbedArgs& a) {
  if (a.model.empty() == a.method.empty()) {
    throw CLI::ValidationError("embed needs exactly one of --model or --method");
  }
  const auto table = load_table(a.emb);
  const auto idf = load_doc_freq_file(a.df);
  std::optional<WeightModel> model;
  std::optional<Baseline> method;
  if (!a.model.empty()) {
    model = load_model_file(a.model);
  } else {
    method = baseline_from_string(a.method);
  }
  std::vector<std::string> raw = a.texts;
  if (!a.texts_file.empty()) {
    auto in = open_input(a.texts_file);
    std::string line;
    while (std::getline(in, line)) raw.push_back(line);
  }
  if (raw.empty()) throw CLI::ValidationError("embed needs --text or --texts");

  std::ostringstream rows;
  rows << std::setprecision(17);
  for (const auto& text : raw) {
    const auto normalized = normalize(text);
    const auto rep = model ? represent_learned(sort_by_idf(normalized, idf), table, *model)
                           : represent_baseline(normalized, table, idf, *method);
    for (Eigen::Index k = 0; k < rep.vector.size(); ++k) {
      rows << (k ? "," : "") << rep.vector[k];
    }
    rows << '\n';
  }
  if (a.out.empty()) {
    std::cout << rows.str();
  } else {
    auto out = open_output(a.out);
    out << rows.str();
  }
}

struct SynthArgs {
  std::string out_dir;
  SyntheticOptions options;
};

void run_synth(const SynthArgs& a) {
  const auto data = make_synthetic(a.options);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  {
    auto out = open_output((dir / "emb.txt").string());
    save_embeddings(data.table, out);
  }
  {
    auto out = open_output((dir / "df.tsv").string());
    save_doc_freq(data.idf, out);
  }
  const std::pair<const char*, const std::vector<TextPair>*> parts[] = {
      {"train.tsv", &data.train}, {"val.tsv", &data.validation}, {"test.tsv", &data.test}};
  for (const auto& [name, pairs] : parts) {
    auto out = open_output((dir / name).string());
    write_pairs(*pairs, out);
  }
  progress("synth: wrote " + std::to_string(data.train.size()) + "/" +
           std::to_string(data.validation.size()) + "/" + std::to_string(data.test.size()) +
           " train/val/test pairs to " + a.out_dir);
}

}  // namespace

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
  const auto start = Clock::now();
  CLI::App app{"Idf-rank weighted word-embedding aggregation for short texts", "rankweight"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Optional config file; flags override it");
  app.set_version_flag("--version", kToolVersion);
  app.option_defaults()->always_capture_default();

  IdfBuildArgs idf_args;
  auto* idf_cmd = app.add_subcommand("idf-build", "Count document frequencies in a corpus");
  idf_cmd->add_option("--corpus", idf_args.corpus, "Corpus file")->required();
  idf_cmd->add_option("--out", idf_args.out, "Document-frequency TSV to write")->required();
  idf_cmd->add_option("--format", idf_args.format, "Input format: corpus or tweets")
      ->check(CLI::IsMember({"corpus", "tweets"}));
  idf_cmd->add_option("--unit", idf_args.unit, "Document unit for corpora: article or paragraph")
      ->check(CLI::IsMember({"article", "paragraph"}));

  WikiArgs wiki_args;
  auto* wiki_cmd = app.add_subcommand("pairs-wiki", "Make related/non-related pairs from articles");
  wiki_cmd->add_option("--corpus", wiki_args.corpus, "Corpus file")->required();
  wiki_cmd->add_option("--out", wiki_args.out, "Pair TSV to write")->required();
  wiki_cmd->add_option("--nmin", wiki_args.options.n_min, "Shortest text length");
  wiki_cmd->add_option("--nmax", wiki_args.options.n_max, "Longest text length");
  wiki_cmd->add_option("--count", wiki_args.options.count, "Pairs per label");
  wiki_cmd->add_option("--seed", wiki_args.options.seed, "Random seed");

  TweetArgs tweet_args;
  auto* tweet_cmd = app.add_subcommand("pairs-tweets", "Make pairs from hashtagged tweets");
  tweet_cmd->add_option("--tweets", tweet_args.tweets, "Line-delimited JSON tweets")->required();
  tweet_cmd->add_option("--out", tweet_args.out, "Pair TSV to write")->required();
  tweet_cmd->add_option("--count", tweet_args.options.count, "Pairs per label");
  tweet_cmd->add_option("--seed", tweet_args.options.seed, "Random seed");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Learn rank weights");
  train_cmd->add_option("--pairs", train_args.pairs, "Training pair TSV")->required();
  train_cmd->add_option("--emb", train_args.emb, "Embeddings (word2vec text)")->required();
  train_cmd->add_option("--df", train_args.df, "Document-frequency TSV")->required();
  train_cmd->add_option("--out", train_args.out, "Model JSON to write")->required();
  train_cmd->add_option("--log", train_args.log, "Epoch log TSV (default <out>.log.tsv)");
  add_train_flags(train_cmd, train_args.flags, true);

  GridArgs grid_args;
  auto* grid_cmd = app.add_subcommand("grid-kappa", "Cross-validated kappa search");
  grid_cmd->add_option("--pairs", grid_args.pairs, "Training pair TSV")->required();
  grid_cmd->add_option("--emb", grid_args.emb, "Embeddings (word2vec text)")->required();
  grid_cmd->add_option("--df", grid_args.df, "Document-frequency TSV")->required();
  grid_cmd->add_option("--out", grid_args.out, "Score JSON to write")->required();
  grid_cmd->add_option("--grid", grid_args.grid, "Kappa values")->delimiter(',');
  grid_cmd->add_option("--folds", grid_args.folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1000));
  add_train_flags(grid_cmd, grid_args.flags, false);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained model");
  eval_cmd->add_option("--pairs", eval_args.pairs, "Test pair TSV")->required();
  eval_cmd->add_option("--val", eval_args.val, "Validation pair TSV (fits theta)")->required();
  eval_cmd->add_option("--model", eval_args.model, "Model JSON")->required();
  eval_cmd->add_option("--emb", eval_args.emb, "Embeddings (default: path stored in the model)");
  eval_cmd->add_option("--df", eval_args.df, "Document frequencies (default: from the model)");
  eval_cmd->add_option("--report", eval_args.report, "Report JSON to write")->required();
  eval_cmd->add_option("--hist", eval_args.hist, "Histogram CSV to write");
  eval_cmd->add_option("--bins", eval_args.bins, "Histogram bins")->check(CLI::Range(2, 1000000));
  eval_cmd->add_option("--threads", eval_args.threads, "Workers for distance computation");

  BaselineArgs base_args;
  auto* base_cmd = app.add_subcommand("baseline-eval", "Evaluate tf-idf and aggregation baselines");
  base_cmd->add_option("--pairs", base_args.pairs, "Test pair TSV")->required();
  base_cmd->add_option("--val", base_args.val, "Validation pair TSV (fits theta)")->required();
  base_cmd->add_option("--emb", base_args.emb, "Embeddings (word2vec text)")->required();
  base_cmd->add_option("--df", base_args.df, "Document-frequency TSV")->required();
  base_cmd->add_option("--model", base_args.model, "Also evaluate this model and sign-test it");
  base_cmd->add_option("--report", base_args.report, "Report JSON array to write")->required();
  base_cmd->add_option("--hist-dir", base_args.hist_dir, "Directory for per-method histograms");
  base_cmd->add_option("--methods", base_args.methods, "Subset of methods (default: all)")
      ->delimiter(',');
  base_cmd->add_option("--bins", base_args.bins, "Histogram bins")->check(CLI::Range(2, 1000000));
  base_cmd->add_option("--threads", base_args.threads, "Workers for distance computation");

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "Print text representations as CSV");
  embed_cmd->add_option("--emb", embed_args.emb, "Embeddings (word2vec text)")->required();
  embed_cmd->add_option("--df", embed_args.df, "Document-frequency TSV")->required();
  embed_cmd->add_option("--model", embed_args.model, "Model JSON");
  embed_cmd->add_option("--method", embed_args.method, "Baseline method instead of a model");
  embed_cmd->add_option("--text", embed_args.texts, "Raw text (repeatable)");
  embed_cmd->add_option("--texts", embed_args.texts_file, "File with one raw text per line");
  embed_cmd->add_option("--out", embed_args.out, "CSV to write (default: stdout)");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic topic-cluster dataset");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_args.options.seed, "Random seed");
  synth_cmd->add_option("--related", synth_args.options.related, "Related pairs");
  synth_cmd->add_option("--nonrelated", synth_args.options.nonrelated, "Non-related pairs");
  synth_cmd->add_option("--dimension", synth_args.options.dimension, "Embedding dimension");
  synth_cmd->add_option("--topics", synth_args.options.topics, "Topic clusters");
  synth_cmd->add_flag("--shuffle-labels", synth_args.options.shuffle_labels,
                      "Permute labels within each split");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Manifest manifest;
  std::string output;
  CLI::App* sub = app.get_subcommands().front();
  manifest.command = sub->get_name();
  try {
    if (sub == idf_cmd) {
      manifest.inputs = {idf_args.corpus};
      output = idf_args.out;
      run_idf_build(idf_args);
    } else if (sub == wiki_cmd) {
      manifest.inputs = {wiki_args.corpus};
      manifest.seed = wiki_args.options.seed;
      manifest.has_seed = true;
      output = wiki_args.out;
      run_pairs_wiki(wiki_args);
    } else if (sub == tweet_cmd) {
      manifest.inputs = {tweet_args.tweets};
      manifest.seed = tweet_args.options.seed;
      manifest.has_seed = true;
      output = tweet_args.out;
      run_pairs_tweets(tweet_args);
    } else if (sub == train_cmd) {
      manifest.inputs = {train_args.pairs, train_args.emb, train_args.df};
      manifest.seed = train_args.flags.config.seed;
      manifest.has_seed = true;
      output = train_args.out;
      run_train(train_args);
    } else if (sub == grid_cmd) {
      manifest.inputs = {grid_args.pairs, grid_args.emb, grid_args.df};
      manifest.seed = grid_args.flags.config.seed;
      manifest.has_seed = true;
      output = grid_args.out;
      run_grid_kappa(grid_args);
    } else if (sub == eval_cmd) {
      run_eval(eval_args);
      manifest.inputs = {eval_args.pairs, eval_args.val, eval_args.model, eval_args.emb,
                         eval_args.df};
      output = eval_args.report;
    } else if (sub == base_cmd) {
      manifest.inputs = {base_args.pairs, base_args.val, base_args.emb, base_args.df};
      if (!base_args.model.empty()) manifest.inputs.push_back(base_args.model);
      output = base_args.report;
      run_baseline_eval(base_args);
    } else if (sub == embed_cmd) {
      manifest.inputs = {embed_args.emb, embed_args.df};
      if (!embed_args.model.empty()) manifest.inputs.push_back(embed_args.model);
      if (!embed_args.texts_file.empty()) manifest.inputs.push_back(embed_args.texts_file);
      output = embed_args.out;
      run_embed(embed_args);
    } else if (sub == synth_cmd) {
      manifest.seed = synth_args.options.seed;
      manifest.has_seed = true;
      output = (fs::path(synth_args.out_dir) / "dataset").string();
      run_synth(synth_args);
    }
    if (!output.empty()) write_manifest(manifest, *sub, output, start);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace rankweight::cli
