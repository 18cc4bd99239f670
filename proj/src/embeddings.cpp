#include "rankweight/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace rankweight {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

std::string line_error(const std::string& what, std::size_t line_no) {
  return what + ", line " + std::to_string(line_no);
}

}  // namespace

EmbeddingTable::EmbeddingTable(int dimension, const std::vector<std::string>& tokens,
                               const std::vector<VectorXd>& vectors) {
  if (dimension <= 0) throw DataError("embedding dimension must be positive");
  if (tokens.size() != vectors.size()) {
    throw std::invalid_argument("EmbeddingTable: token and vector counts differ");
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) throw DataError("empty token in embedding table");
    if (vectors[i].size() != dimension) throw DataError("dimension mismatch for " + tokens[i]);
    if (!vectors[i].allFinite()) throw DataError("non-finite value for " + tokens[i]);
    if (index_.count(tokens[i])) {
      ++duplicates_;
      continue;
    }
    index_.emplace(tokens[i], static_cast<Eigen::Index>(kept.size()));
    tokens_.push_back(tokens[i]);
    kept.push_back(i);
  }
  if (kept.empty()) throw DataError("empty vocabulary");
  vectors_.resize(dimension, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) vectors_.col(c) = vectors[kept[c]];
}

std::optional<ConstVectorMap> EmbeddingTable::lookup(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return ConstVectorMap(vectors_.col(it->second).data(), vectors_.rows());
}

EmbeddingTable load_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long declared = 0;
  int dimension = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 2 || !parse_number(fields[0], declared) ||
        !parse_number(fields[1], dimension) || declared < 0 || dimension <= 0) {
      throw DataError(line_error("malformed header, expected \"<count> <dimension>\"", line_no));
    }
    break;
  }
  if (dimension <= 0) throw DataError("empty vocabulary");

  EmbeddingTable table;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(declared) * dimension);
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != static_cast<std::size_t>(dimension) + 1) {
      throw DataError(line_error("dimension mismatch", line_no));
    }
    std::string token(fields[0]);
    const bool duplicate = table.index_.count(token) > 0;
    for (int k = 0; k < dimension; ++k) {
      double v = 0.0;
      if (!parse_number(fields[k + 1], v)) {
        throw DataError(line_error("unparsable value \"" + std::string(fields[k + 1]) + "\"",
                                   line_no));
      }
      if (!std::isfinite(v)) throw DataError(line_error("non-finite value", line_no));
      if (!duplicate) values.push_back(v);
    }
    if (duplicate) {
      ++table.duplicates_;
      continue;
    }
    table.index_.emplace(token, static_cast<Eigen::Index>(table.tokens_.size()));
    table.tokens_.push_back(std::move(token));
  }
  if (table.tokens_.empty()) throw DataError("empty vocabulary");
  table.vectors_ = Eigen::Map<const MatrixXd>(values.data(), dimension,
                                              static_cast<Eigen::Index>(table.tokens_.size()));
  return table;
}

EmbeddingTable load_embeddings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path);
  return load_embeddings(in);
}

void save_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.vocabulary_size() << ' ' << table.dimension() << '\n';
  std::ostringstream buf;
  buf << std::setprecision(6);
  for (const auto& token : table.tokens()) {
    auto v = *table.lookup(token);
    buf.str({});
    buf << token;
    for (Eigen::Index k = 0; k < v.size(); ++k) buf << ' ' << v[k];
    out << buf.str() << '\n';
  }
}

IdfTable compute_idf(const std::map<std::string, std::int64_t>& doc_freq,
                     std::int64_t corpus_size) {
  if (corpus_size < 1) throw DataError("corpus size N must be at least 1");
  IdfTable table;
  table.corpus_size_ = corpus_size;
  table.doc_freq_ = doc_freq;
  table.unseen_idf_ = std::log(static_cast<double>(corpus_size));
  table.idf_.reserve(doc_freq.size());
  for (const auto& [token, df] : doc_freq) {
    if (df < 0) throw DataError("negative document frequency for " + token);
    table.idf_.emplace(token, std::log(static_cast<double>(corpus_size) /
                                       (1.0 + static_cast<double>(df))));
  }
  return table;
}

std::optional<double> IdfTable::idf(std::string_view token) const {
  auto it = idf_.find(std::string(token));
  if (it == idf_.end()) return std::nullopt;
  return it->second;
}

double IdfTable::idf_or_unseen(std::string_view token) const {
  return idf(token).value_or(unseen_idf_);
}

IdfTable load_doc_freq(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::int64_t corpus_size = -1;
  std::map<std::string, std::int64_t> doc_freq;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(line_error("expected two tab-separated fields", line_no));
    }
    std::string_view key(line.data(), tab);
    std::string_view value(line.data() + tab + 1, line.size() - tab - 1);
    std::int64_t n = 0;
    if (!parse_number(value, n)) throw DataError(line_error("unparsable integer", line_no));
    if (corpus_size < 0) {
      if (key != "N") throw DataError(line_error("first row must be \"N\\t<count>\"", line_no));
      corpus_size = n;
      continue;
    }
    if (!doc_freq.emplace(std::string(key), n).second) {
      throw DataError(line_error("duplicate token \"" + std::string(key) + "\"", line_no));
    }
  }
  if (corpus_size < 0) throw DataError("document-frequency file has no header");
  return compute_idf(doc_freq, corpus_size);
}

IdfTable load_doc_freq_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open document-frequency file " + path);
  return load_doc_freq(in);
}

void save_doc_freq(const IdfTable& table, std::ostream& out) {
  out << "N\t" << table.corpus_size() << '\n';
  for (const auto& [token, df] : table.doc_freq()) out << token << '\t' << df << '\n';
}

DocFreqCounts count_doc_freq(const std::vector<std::vector<std::string>>& documents) {
  DocFreqCounts counts;
  counts.documents = static_cast<std::int64_t>(documents.size());
  for (const auto& doc : documents) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    for (auto token : seen) ++counts.doc_freq[std::string(token)];
  }
  return counts;
}

}  // namespace rankweight
