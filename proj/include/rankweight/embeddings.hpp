#pragma once

#include "rankweight/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rankweight {

/// Immutable token -> vector map. Vectors are stored as the columns of one
/// dimension x vocabulary matrix; lookups hand out views into it.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  /// Builds a table from parallel token/vector lists. Duplicate tokens keep
  /// the first occurrence; the number dropped is reported by
  /// duplicate_count().
  EmbeddingTable(int dimension, const std::vector<std::string>& tokens,
                 const std::vector<VectorXd>& vectors);

  int dimension() const { return static_cast<int>(vectors_.rows()); }
  std::size_t vocabulary_size() const { return tokens_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }

  std::optional<ConstVectorMap> lookup(std::string_view token) const;
  bool contains(std::string_view token) const { return lookup(token).has_value(); }

  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  friend EmbeddingTable load_embeddings(std::istream& in);

  MatrixXd vectors_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Eigen::Index> index_;
  std::size_t duplicates_ = 0;
};

/// Reads the word2vec textual format: a "<count> <dimension>" header, then
/// one "token v1 ... vN" line per entry. Throws DataError with the
/// offending line number on malformed input.
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings_file(const std::string& path);

/// Writes the textual format back with 6 significant digits per value.
void save_embeddings(const EmbeddingTable& table, std::ostream& out);

/// Smoothed inverse document frequency: idf = ln(N / (1 + df)).
class IdfTable {
 public:
  IdfTable() = default;

  std::int64_t corpus_size() const { return corpus_size_; }
  const std::map<std::string, std::int64_t>& doc_freq() const { return doc_freq_; }

  std::optional<double> idf(std::string_view token) const;

  /// idf of a token, using df = 0 for tokens the table has never seen.
  double idf_or_unseen(std::string_view token) const;

  /// idf of an unseen token, ln(N).
  double unseen_idf() const { return unseen_idf_; }

 private:
  friend IdfTable compute_idf(const std::map<std::string, std::int64_t>&, std::int64_t);

  std::int64_t corpus_size_ = 1;
  std::map<std::string, std::int64_t> doc_freq_;
  std::unordered_map<std::string, double> idf_;
  double unseen_idf_ = 0.0;
};

IdfTable compute_idf(const std::map<std::string, std::int64_t>& doc_freq,
                     std::int64_t corpus_size);

/// Document-frequency TSV: "N\t<count>" header, then "token\tdf" rows.
IdfTable load_doc_freq(std::istream& in);
IdfTable load_doc_freq_file(const std::string& path);
void save_doc_freq(const IdfTable& table, std::ostream& out);

/// Counts, for every token, the number of documents it appears in.
struct DocFreqCounts {
  std::int64_t documents = 0;
  std::map<std::string, std::int64_t> doc_freq;
};

DocFreqCounts count_doc_freq(const std::vector<std::vector<std::string>>& documents);

}  // namespace rankweight
