#pragma once

#include "rankweight/aggregate.hpp"
#include "rankweight/pairgen.hpp"

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace rankweight {

/// A couple reduced to the two linear maps from weights to representations:
/// t_a = a * w, t_b = b * w.
struct CoupleDesign {
  MatrixXd a;
  MatrixXd b;
  Label label = Label::Related;
};

CoupleDesign make_design(const TextPair& pair, const EmbeddingTable& table, const IdfTable& idf,
                         int n_max, InterpolationRule rule = InterpolationRule::Linear);

/// p * d(t_a, t_b).
double contrastive_loss(const Representation& t_a, const Representation& t_b, Label p,
                        Metric metric);

double couple_distance(const CoupleDesign& couple, const VectorXd& w, Metric metric);

/// Gradient of d(a w, b w) with respect to w; zero where d is not
/// differentiable.
VectorXd distance_gradient(const CoupleDesign& couple, const VectorXd& w, Metric metric);

/// Gradient of p * d(t_a, t_b) with respect to the stored weights.
VectorXd contrastive_gradient(const CoupleDesign& couple, const VectorXd& w, Metric metric);
VectorXd contrastive_gradient(const TextPair& pair, const EmbeddingTable& table,
                              const IdfTable& idf, const WeightModel& model);

/// Numerically stable ln(1 + e^x) and 1 / (1 + e^-x).
double softplus(double x);
double sigmoid(double x);

/// A balanced batch with its distances evaluated at the current weights.
/// The median couple is the lower-middle element of the distance-sorted
/// batch, ties broken by position.
class Minibatch {
 public:
  Minibatch(std::vector<const CoupleDesign*> couples, const VectorXd& w, Metric metric);

  std::size_t size() const { return couples_.size(); }
  const CoupleDesign& couple(std::size_t i) const { return *couples_[i]; }
  double distance(std::size_t i) const { return distances_[i]; }
  std::size_t median_index() const { return median_index_; }
  double median_distance() const { return distances_[median_index_]; }
  Metric metric() const { return metric_; }

 private:
  std::vector<const CoupleDesign*> couples_;
  std::vector<double> distances_;
  std::size_t median_index_ = 0;
  Metric metric_;
};

/// ln(1 + exp(-kappa p (mu - d))) for couple i.
double median_loss(const Minibatch& batch, std::size_t i, double kappa);

/// Gradient of median_loss for couple i, holding the median couple fixed:
/// kappa * sigmoid(-kappa p (mu - d)) * p * (grad d_i - grad d_median).
VectorXd median_gradient(const Minibatch& batch, std::size_t i, const VectorXd& w,
                         double kappa);

enum class LossKind { Contrastive, Median };

std::string to_string(LossKind loss);
LossKind loss_from_string(const std::string& name);

/// Mean loss over the couples of a batch (no regularizer).
double batch_loss(const Minibatch& batch, LossKind loss, double kappa);
VectorXd batch_gradient(const Minibatch& batch, const VectorXd& w, LossKind loss, double kappa,
                        int threads = 1);

struct TrainConfig {
  LossKind loss = LossKind::Median;
  double kappa = 160.0;
  double lambda = 0.001;
  int batch_size = 100;
  double eta_initial = 0.01;
  double eta_reduced = 0.001;
  double stop_delta = 0.0005;
  std::uint64_t seed = 42;
  int n_max = 30;
  double init_weight = 0.5;
  Metric metric = Metric::Euclidean;
  int max_epochs = 200;
  int threads = 1;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  double eta = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  WeightModel model;
  std::vector<EpochRecord> trace;
  std::size_t skipped_pairs = 0;  // unrepresentable couples left out
  bool converged = false;
};

/// Raised when a loss turns non-finite; carries the weights at that point.
class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(const std::string& what, VectorXd weights, std::size_t batch)
      : std::runtime_error(what), weights_(std::move(weights)), batch_(batch) {}
  const VectorXd& weights() const { return weights_; }
  std::size_t batch() const { return batch_; }

 private:
  VectorXd weights_;
  std::size_t batch_;
};

/// Minibatch gradient descent with L2 regularization. The learning rate
/// drops once when the mean epoch loss rises; after that, training stops
/// when an epoch improves the mean loss by less than stop_delta.
TrainResult train(std::span<const CoupleDesign> couples, const TrainConfig& config);
TrainResult train(const std::vector<TextPair>& dataset, const EmbeddingTable& table,
                  const IdfTable& idf, const TrainConfig& config);

/// Representable couples of a dataset; skipped counts the rest.
std::vector<CoupleDesign> prepare_couples(const std::vector<TextPair>& dataset,
                                          const EmbeddingTable& table, const IdfTable& idf,
                                          int n_max, std::size_t* skipped = nullptr);

void write_training_log(const std::vector<EpochRecord>& trace, std::ostream& out);

struct KappaScore {
  double kappa = 0.0;
  double mean_error = 0.0;
  std::vector<double> fold_errors;
  std::size_t failed_folds = 0;
};

struct GridSearchResult {
  double best_kappa = 0.0;
  std::vector<KappaScore> scores;
};

const std::vector<double>& default_kappa_grid();

/// k-fold cross-validation over a kappa grid. Folds are stratified by
/// label. Each held-out fold is scored by its optimal split error; a fold
/// that fails to train scores 1.0. Ties go to the smaller kappa.
GridSearchResult grid_search_kappa(std::span<const CoupleDesign> couples,
                                   const std::vector<double>& grid, int folds,
                                   const TrainConfig& base);

}  // namespace rankweight
