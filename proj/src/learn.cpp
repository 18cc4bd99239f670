#include "rankweight/learn.hpp"

#include "rankweight/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

namespace rankweight {

namespace {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// written by exactly one worker, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

CoupleDesign make_design(const TextPair& pair, const EmbeddingTable& table, const IdfTable& idf,
                         int n_max, InterpolationRule rule) {
  return {design_matrix(sort_by_idf(pair.text_a, idf), table, n_max, rule),
          design_matrix(sort_by_idf(pair.text_b, idf), table, n_max, rule), pair.label};
}

double contrastive_loss(const Representation& t_a, const Representation& t_b, Label p,
                        Metric metric) {
  return sign(p) * distance(t_a, t_b, metric);
}

double couple_distance(const CoupleDesign& couple, const VectorXd& w, Metric metric) {
  return distance(metric, couple.a * w, couple.b * w);
}

VectorXd distance_gradient(const CoupleDesign& couple, const VectorXd& w, Metric metric) {
  const VectorXd x = couple.a * w;
  const VectorXd y = couple.b * w;
  VectorXd gx;
  VectorXd gy;
  rankweight::distance_gradient(metric, x, y, gx, gy);
  return couple.a.transpose() * gx + couple.b.transpose() * gy;
}

VectorXd contrastive_gradient(const CoupleDesign& couple, const VectorXd& w, Metric metric) {
  return sign(couple.label) * distance_gradient(couple, w, metric);
}

VectorXd contrastive_gradient(const TextPair& pair, const EmbeddingTable& table,
                              const IdfTable& idf, const WeightModel& model) {
  return contrastive_gradient(make_design(pair, table, idf, model.n_max()), model.weights,
                              model.metric);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Minibatch::Minibatch(std::vector<const CoupleDesign*> couples, const VectorXd& w, Metric metric)
    : couples_(std::move(couples)), metric_(metric) {
  if (couples_.empty()) throw std::invalid_argument("Minibatch: empty batch");
  distances_.reserve(couples_.size());
  for (const auto* c : couples_) distances_.push_back(couple_distance(*c, w, metric));
  std::vector<std::size_t> order(couples_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distances_[a] < distances_[b]; });
  median_index_ = order[(order.size() - 1) / 2];
}

double median_loss(const Minibatch& batch, std::size_t i, double kappa) {
  const double p = sign(batch.couple(i).label);
  return softplus(-kappa * p * (batch.median_distance() - batch.distance(i)));
}

namespace {

VectorXd median_gradient_with(const Minibatch& batch, std::size_t i, const VectorXd& w,
                              double kappa, const VectorXd& median_grad) {
  const double p = sign(batch.couple(i).label);
  const double scale =
      kappa * sigmoid(-kappa * p * (batch.median_distance() - batch.distance(i))) * p;
  const VectorXd own = distance_gradient(batch.couple(i), w, batch.metric());
  return scale * (own - median_grad);
}

}  // namespace

VectorXd median_gradient(const Minibatch& batch, std::size_t i, const VectorXd& w, double kappa) {
  const VectorXd median_grad =
      distance_gradient(batch.couple(batch.median_index()), w, batch.metric());
  return median_gradient_with(batch, i, w, kappa, median_grad);
}

std::string to_string(LossKind loss) {
  return loss == LossKind::Contrastive ? "contrastive" : "median";
}

LossKind loss_from_string(const std::string& name) {
  if (name == "contrastive") return LossKind::Contrastive;
  if (name == "median") return LossKind::Median;
  throw std::invalid_argument("unknown loss \"" + name + "\"");
}

double batch_loss(const Minibatch& batch, LossKind loss, double kappa) {
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    total += loss == LossKind::Median
                 ? median_loss(batch, i, kappa)
                 : sign(batch.couple(i).label) * batch.distance(i);
  }
  return total / static_cast<double>(batch.size());
}

VectorXd batch_gradient(const Minibatch& batch, const VectorXd& w, LossKind loss, double kappa,
                        int threads) {
  std::vector<VectorXd> terms(batch.size());
  if (loss == LossKind::Median) {
    // The median couple's gradient is a barrier shared by every term.
    const VectorXd median_grad =
        distance_gradient(batch.couple(batch.median_index()), w, batch.metric());
    parallel_for(batch.size(), threads, [&](std::size_t i) {
      terms[i] = median_gradient_with(batch, i, w, kappa, median_grad);
    });
  } else {
    parallel_for(batch.size(), threads, [&](std::size_t i) {
      terms[i] = contrastive_gradient(batch.couple(i), w, batch.metric());
    });
  }
  VectorXd grad = VectorXd::Zero(w.size());
  for (const auto& t : terms) grad += t;
  return grad / static_cast<double>(batch.size());
}

void TrainConfig::validate() const {
  if (batch_size < 2 || batch_size % 2 != 0) {
    throw std::invalid_argument("batch size must be even and at least 2");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be non-negative");
  if (!(eta_initial > 0.0) || !(eta_reduced > 0.0) || !(eta_reduced < eta_initial)) {
    throw std::invalid_argument("need 0 < eta_reduced < eta_initial");
  }
  if (!(stop_delta > 0.0)) throw std::invalid_argument("stop delta must be positive");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be at least 1");
  if (!std::isfinite(init_weight)) throw std::invalid_argument("init weight must be finite");
}

namespace {

TrainResult train_pointers(const std::vector<const CoupleDesign*>& couples,
                           const TrainConfig& config) {
  config.validate();
  std::vector<const CoupleDesign*> related;
  std::vector<const CoupleDesign*> unrelated;
  for (const auto* c : couples) {
    if (c->a.cols() != config.n_max || c->b.cols() != config.n_max) {
      throw std::invalid_argument("couple design width does not match n_max");
    }
    (c->label == Label::Related ? related : unrelated).push_back(c);
  }
  const auto half = static_cast<std::size_t>(config.batch_size / 2);
  const auto batches = std::min(related.size(), unrelated.size()) / half;
  if (batches == 0) {
    throw DataError("training data cannot fill one balanced batch of " +
                    std::to_string(config.batch_size) + " (" + std::to_string(related.size()) +
                    " related, " + std::to_string(unrelated.size()) + " non-related)");
  }

  TrainResult result;
  result.model = WeightModel::uniform(config.n_max, config.init_weight, config.metric);
  result.model.training.loss = to_string(config.loss);
  result.model.training.kappa = config.kappa;
  result.model.training.lambda = config.lambda;
  result.model.training.seed = config.seed;
  VectorXd& w = result.model.weights;

  std::mt19937_64 rng(config.seed);
  double eta = config.eta_initial;
  double previous = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  std::vector<const CoupleDesign*> members;
  members.reserve(2 * half);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(related.begin(), related.end(), rng);
    std::shuffle(unrelated.begin(), unrelated.end(), rng);
    double mean = 0.0;
    for (std::size_t i = 0; i < batches; ++i) {
      members.assign(related.begin() + i * half, related.begin() + (i + 1) * half);
      members.insert(members.end(), unrelated.begin() + i * half,
                     unrelated.begin() + (i + 1) * half);
      const Minibatch batch(members, w, config.metric);
      const double total = batch_loss(batch, config.loss, config.kappa) +
                           config.lambda * w.squaredNorm();
      if (!std::isfinite(total)) {
        throw TrainingDiverged("non-finite loss in epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(i),
                               w, i);
      }
      const VectorXd grad =
          batch_gradient(batch, w, config.loss, config.kappa, config.threads) +
          2.0 * config.lambda * w;
      w -= eta * grad;
      mean = (static_cast<double>(i) * mean + total) / static_cast<double>(i + 1);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.push_back({epoch, mean, eta, wall});

    if (eta != config.eta_reduced) {
      if (mean > previous) eta = config.eta_reduced;
    } else if (previous - mean < config.stop_delta) {
      result.converged = true;
      break;
    }
    previous = mean;
  }
  if (!w.allFinite()) throw TrainingDiverged("non-finite weights after training", w, 0);
  return result;
}

}  // namespace

TrainResult train(std::span<const CoupleDesign> couples, const TrainConfig& config) {
  std::vector<const CoupleDesign*> pointers;
  pointers.reserve(couples.size());
  for (const auto& c : couples) pointers.push_back(&c);
  return train_pointers(pointers, config);
}

std::vector<CoupleDesign> prepare_couples(const std::vector<TextPair>& dataset,
                                          const EmbeddingTable& table, const IdfTable& idf,
                                          int n_max, std::size_t* skipped) {
  std::vector<CoupleDesign> couples;
  couples.reserve(dataset.size());
  std::size_t dropped = 0;
  for (const auto& pair : dataset) {
    try {
      couples.push_back(make_design(pair, table, idf, n_max));
    } catch (const UnrepresentableText&) {
      ++dropped;
    }
  }
  if (skipped) *skipped = dropped;
  return couples;
}

TrainResult train(const std::vector<TextPair>& dataset, const EmbeddingTable& table,
                  const IdfTable& idf, const TrainConfig& config) {
  std::size_t skipped = 0;
  const auto couples = prepare_couples(dataset, table, idf, config.n_max, &skipped);
  auto result = train(couples, config);
  result.skipped_pairs = skipped;
  return result;
}

void write_training_log(const std::vector<EpochRecord>& trace, std::ostream& out) {
  out << "epoch\tmean_loss\teta\twall_seconds\n";
  for (const auto& r : trace) {
    out << r.epoch << '\t' << r.mean_loss << '\t' << r.eta << '\t' << r.wall_seconds << '\n';
  }
}

const std::vector<double>& default_kappa_grid() {
  static const std::vector<double> grid{10, 20, 40, 80, 160, 320};
  return grid;
}

GridSearchResult grid_search_kappa(std::span<const CoupleDesign> couples,
                                   const std::vector<double>& grid, int folds,
                                   const TrainConfig& base) {
  if (grid.empty()) throw std::invalid_argument("kappa grid is empty");
  if (folds < 2) throw std::invalid_argument("need at least two folds");

  std::vector<std::size_t> related;
  std::vector<std::size_t> unrelated;
  for (std::size_t i = 0; i < couples.size(); ++i) {
    (couples[i].label == Label::Related ? related : unrelated).push_back(i);
  }
  std::mt19937_64 rng(base.seed);
  std::shuffle(related.begin(), related.end(), rng);
  std::shuffle(unrelated.begin(), unrelated.end(), rng);
  std::vector<int> fold_of(couples.size());
  for (std::size_t k = 0; k < related.size(); ++k) fold_of[related[k]] = static_cast<int>(k % folds);
  for (std::size_t k = 0; k < unrelated.size(); ++k) {
    fold_of[unrelated[k]] = static_cast<int>(k % folds);
  }

  GridSearchResult result;
  for (double kappa : grid) {
    KappaScore score;
    score.kappa = kappa;
    TrainConfig config = base;
    config.kappa = kappa;
    for (int f = 0; f < folds; ++f) {
      std::vector<const CoupleDesign*> train_set;
      std::vector<const CoupleDesign*> held_out;
      for (std::size_t i = 0; i < couples.size(); ++i) {
        (fold_of[i] == f ? held_out : train_set).push_back(&couples[i]);
      }
      double error = 1.0;
      try {
        const auto trained = train_pointers(train_set, config);
        std::vector<ScoredPair> scored;
        scored.reserve(held_out.size());
        for (const auto* c : held_out) {
          scored.push_back({couple_distance(*c, trained.model.weights, config.metric), c->label});
        }
        error = optimal_split(scored).error;
      } catch (const std::exception& e) {
        std::cerr << "warning: kappa " << kappa << ", fold " << f << " failed: " << e.what()
                  << '\n';
        ++score.failed_folds;
      }
      score.fold_errors.push_back(error);
    }
    score.mean_error = std::accumulate(score.fold_errors.begin(), score.fold_errors.end(), 0.0) /
                       static_cast<double>(folds);
    result.scores.push_back(std::move(score));
  }
  const auto best = std::min_element(
      result.scores.begin(), result.scores.end(), [](const KappaScore& a, const KappaScore& b) {
        return a.mean_error < b.mean_error ||
               (a.mean_error == b.mean_error && a.kappa < b.kappa);
      });
  result.best_kappa = best->kappa;
  return result;
}

}  // namespace rankweight
