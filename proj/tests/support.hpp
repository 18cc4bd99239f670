#pragma once

// Helpers shared by the unit tests and the acceptance runner. The oracles
// here recompute quantities from first principles and deliberately avoid
// the design-matrix path used by the trainer.

#include "rankweight/aggregate.hpp"
#include "rankweight/embeddings.hpp"
#include "rankweight/evaluate.hpp"
#include "rankweight/learn.hpp"
#include "rankweight/synthetic.hpp"
#include "rankweight/textprep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using namespace rankweight;

inline NormalizedText text(std::vector<std::string> tokens) { return NormalizedText{std::move(tokens)}; }

/// Vocabulary "w0".."w{V-1}" with Gaussian vectors and pairwise distinct
/// document frequencies, so idf order is strict.
struct World {
  EmbeddingTable table;
  IdfTable idf;
  std::vector<std::string> vocabulary;
};

inline World random_world(std::mt19937_64& rng, int dimension, int vocabulary) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  World world;
  std::vector<VectorXd> vectors;
  std::map<std::string, std::int64_t> df;
  for (int i = 0; i < vocabulary; ++i) {
    world.vocabulary.push_back("w" + std::to_string(i));
    VectorXd v(dimension);
    for (int k = 0; k < dimension; ++k) v[k] = gauss(rng);
    vectors.push_back(v);
    df[world.vocabulary.back()] = 3 * i + 1;
  }
  world.table = EmbeddingTable(dimension, world.vocabulary, vectors);
  world.idf = compute_idf(df, 100000);
  return world;
}

/// Text of `length` distinct vocabulary tokens in random order.
inline NormalizedText random_text(std::mt19937_64& rng, const World& world, int length) {
  std::vector<std::string> pool = world.vocabulary;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(length));
  return text(pool);
}

/// (1/m) sum_j z_j v_j computed token by token with hand-written linear
/// interpolation of the weights.
inline VectorXd oracle_representation(const NormalizedText& t, const World& world,
                                      const VectorXd& w) {
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& tok : t.tokens) {
    if (world.table.contains(tok)) ranked.emplace_back(world.idf.idf_or_unseen(tok), tok);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const int n_max = static_cast<int>(w.size());
  if (static_cast<int>(ranked.size()) > n_max) ranked.resize(static_cast<std::size_t>(n_max));
  const int m = static_cast<int>(ranked.size());
  VectorXd out = VectorXd::Zero(world.table.dimension());
  for (int j = 0; j < m; ++j) {
    double z = w[0];
    if (m > 1) {
      const double pos = static_cast<double>(j) * (n_max - 1) / (m - 1);
      const int lo = static_cast<int>(std::floor(pos));
      const int hi = std::min(lo + 1, n_max - 1);
      z = w[lo] + (w[hi] - w[lo]) * (pos - lo);
    }
    out += z * VectorXd(*world.table.lookup(ranked[static_cast<std::size_t>(j)].second));
  }
  return out / static_cast<double>(m);
}

struct OracleCouple {
  NormalizedText a;
  NormalizedText b;
  Label label;
};

inline std::vector<double> oracle_distances(const std::vector<OracleCouple>& batch,
                                            const World& world, const VectorXd& w) {
  std::vector<double> d;
  for (const auto& c : batch) {
    d.push_back((oracle_representation(c.a, world, w) - oracle_representation(c.b, world, w)).norm());
  }
  return d;
}

/// Lower-middle element of the distance-sorted batch, ties by position.
inline std::size_t oracle_median(const std::vector<double>& d) {
  std::vector<std::size_t> order(d.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });
  return order[(order.size() - 1) / 2];
}

/// Mean batch loss with Euclidean distance. When `median` is given, that
/// couple supplies mu regardless of the current ordering.
inline double oracle_batch_loss(const std::vector<OracleCouple>& batch, const World& world,
                                const VectorXd& w, LossKind loss, double kappa,
                                std::optional<std::size_t> median = std::nullopt) {
  const auto d = oracle_distances(batch, world, w);
  const double mu = d[median ? *median : oracle_median(d)];
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double p = static_cast<double>(static_cast<int>(batch[i].label));
    total += loss == LossKind::Contrastive ? p * d[i] : std::log1p(std::exp(-kappa * p * (mu - d[i])));
  }
  return total / static_cast<double>(batch.size());
}

/// Every split error reachable by a threshold, by trying each distinct
/// distance and one value below all of them.
inline double brute_force_split_error(const std::vector<ScoredPair>& pairs) {
  std::vector<double> candidates{-std::numeric_limits<double>::infinity()};
  for (const auto& p : pairs) candidates.push_back(p.distance);
  double best = 1.0;
  for (double theta : candidates) {
    std::size_t wrong = 0;
    for (const auto& p : pairs) wrong += (p.distance <= theta) != (p.label == Label::Related);
    best = std::min(best, static_cast<double>(wrong) / static_cast<double>(pairs.size()));
  }
  return best;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rankweight_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
