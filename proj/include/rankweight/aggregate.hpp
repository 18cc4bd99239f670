#pragma once

#include "rankweight/embeddings.hpp"
#include "rankweight/textprep.hpp"
#include "rankweight/types.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rankweight {

/// Free-form record of how a model was trained; stored alongside weights.
struct TrainingMetadata {
  std::string loss;
  double kappa = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> extra;
};

/// One weight per idf rank, w_1..w_nmax.
struct WeightModel {
  VectorXd weights;
  Metric metric = Metric::Euclidean;
  std::string normalization_version = "v1";
  TrainingMetadata training;

  int n_max() const { return static_cast<int>(weights.size()); }

  static WeightModel uniform(int n_max, double value, Metric metric = Metric::Euclidean);
};

void save_model(const WeightModel& model, std::ostream& out);
WeightModel load_model(std::istream& in);
WeightModel load_model_file(const std::string& path);

struct Representation {
  VectorXd vector;
  int used_tokens = 0;
};

/// Raised when a text has no in-vocabulary token left to aggregate.
class UnrepresentableText : public DataError {
 public:
  explicit UnrepresentableText(std::vector<std::string> tokens);
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
};

enum class InterpolationRule {
  Linear,    // z = w_lo + (w_hi - w_lo)(I - lo)
  Verbatim,  // (w_hi - w_lo)(I - lo) / (hi - lo + eps) + w_hi, for differential testing
};

/// One interpolated weight as a combination of at most two stored weights
/// (0-based indices).
struct InterpolationTerm {
  int lower = 0;
  int upper = 0;
  double lower_coeff = 1.0;
  double upper_coeff = 0.0;
};

/// The subsampling positions I_j = 1 + (j-1)(n_max-1)/(m-1) and the linear
/// coefficients that map the stored weights onto them.
std::vector<InterpolationTerm> interpolation_terms(int n_max, int m,
                                                   InterpolationRule rule = InterpolationRule::Linear);

/// Weights for a text of length m, 1 <= m <= n_max. For m == n_max this is
/// the stored weight vector, bit for bit.
VectorXd interpolate_weights(const WeightModel& model, int m,
                             InterpolationRule rule = InterpolationRule::Linear);

/// In-vocabulary tokens of a sorted text, truncated to the n_max highest.
struct SelectedTokens {
  std::vector<std::string> tokens;
  std::vector<ConstVectorMap> vectors;
};

SelectedTokens select_tokens(const SortedText& text, const EmbeddingTable& table,
                             int n_max = -1);

/// t = (1/m) sum_j z_j v_j over the m in-vocabulary idf-sorted tokens.
Representation represent_learned(const SortedText& text, const EmbeddingTable& table,
                                 const WeightModel& model,
                                 InterpolationRule rule = InterpolationRule::Linear);

/// Linear map A (dimension x n_max) with represent_learned(text) = A * w.
/// Training works on these so every gradient is a matrix-vector product.
MatrixXd design_matrix(const SortedText& text, const EmbeddingTable& table, int n_max,
                       InterpolationRule rule = InterpolationRule::Linear);

enum class Baseline {
  Mean,
  Max,
  Min,
  MinMaxConcat,
  MeanTop30,
  MaxTop30,
  MinMaxTop30,
  IdfWeightedMean,
};

std::string to_string(Baseline method);
Baseline baseline_from_string(const std::string& name);
const std::vector<Baseline>& all_baselines();

Representation represent_baseline(const NormalizedText& text, const EmbeddingTable& table,
                                  const IdfTable& idf, Baseline method);

/// Sparse tf-idf vector keyed by token.
using SparseVector = std::map<std::string, double>;

SparseVector tfidf_vector(const NormalizedText& text, const IdfTable& idf);

/// Cosine distance between sparse vectors; 1 when either is zero.
double cosine_distance(const SparseVector& x, const SparseVector& y);

double distance(const Representation& x, const Representation& y, Metric metric);

}  // namespace rankweight
