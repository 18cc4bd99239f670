#include "rankweight/aggregate.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace rankweight {

std::string to_string(Metric metric) {
  return metric == Metric::Euclidean ? "euclidean" : "cosine";
}

Metric metric_from_string(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "cosine") return Metric::Cosine;
  throw std::invalid_argument("unknown metric \"" + name + "\"");
}

WeightModel WeightModel::uniform(int n_max, double value, Metric metric) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  WeightModel model;
  model.weights = VectorXd::Constant(n_max, value);
  model.metric = metric;
  return model;
}

void save_model(const WeightModel& model, std::ostream& out) {
  nlohmann::ordered_json training;
  training["loss"] = model.training.loss;
  training["kappa"] = model.training.kappa;
  training["lambda"] = model.training.lambda;
  training["seed"] = model.training.seed;
  for (const auto& [key, value] : model.training.extra) training[key] = value;

  nlohmann::ordered_json doc;
  doc["n_max"] = model.n_max();
  doc["weights"] = std::vector<double>(model.weights.data(),
                                       model.weights.data() + model.weights.size());
  doc["metric"] = to_string(model.metric);
  doc["normalization_version"] = model.normalization_version;
  doc["training"] = std::move(training);
  out << doc.dump(2) << '\n';
}

WeightModel load_model(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  try {
    WeightModel model;
    const auto n_max = doc.at("n_max").get<int>();
    const auto weights = doc.at("weights").get<std::vector<double>>();
    if (n_max < 1) throw DataError("model file: n_max must be at least 1");
    if (weights.size() != static_cast<std::size_t>(n_max)) {
      throw DataError("model file: weights has " + std::to_string(weights.size()) +
                      " entries, n_max is " + std::to_string(n_max));
    }
    model.weights = Eigen::Map<const VectorXd>(weights.data(), n_max);
    if (!model.weights.allFinite()) throw DataError("model file: non-finite weight");
    model.metric = metric_from_string(doc.at("metric").get<std::string>());
    model.normalization_version = doc.value("normalization_version", std::string("v1"));
    if (doc.contains("training")) {
      const auto& t = doc["training"];
      for (auto it = t.begin(); it != t.end(); ++it) {
        if (it.key() == "loss") {
          model.training.loss = it->get<std::string>();
        } else if (it.key() == "kappa") {
          model.training.kappa = it->get<double>();
        } else if (it.key() == "lambda") {
          model.training.lambda = it->get<double>();
        } else if (it.key() == "seed") {
          model.training.seed = it->get<std::uint64_t>();
        } else {
          model.training.extra[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
        }
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

WeightModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path);
  return load_model(in);
}

UnrepresentableText::UnrepresentableText(std::vector<std::string> tokens)
    : DataError("unrepresentable text: no in-vocabulary token among [" + join(tokens) + "]"),
      tokens_(std::move(tokens)) {}

std::vector<InterpolationTerm> interpolation_terms(int n_max, int m, InterpolationRule rule) {
  if (m < 1) throw std::invalid_argument("interpolate_weights: m must be at least 1");
  if (m > n_max) {
    throw std::invalid_argument("interpolate_weights: m = " + std::to_string(m) +
                                " exceeds n_max = " + std::to_string(n_max));
  }
  std::vector<InterpolationTerm> terms(static_cast<std::size_t>(m));
  if (m == 1) return terms;  // z_1 = w_1
  constexpr double kEpsilon = 1e-8;
  const long den = m - 1;
  for (int j = 0; j < m; ++j) {
    // Integer arithmetic keeps floor/ceil exact.
    const long num = static_cast<long>(j) * (n_max - 1);
    const int lower = static_cast<int>(num / den);
    const long rem = num % den;
    auto& term = terms[static_cast<std::size_t>(j)];
    term.lower = term.upper = lower;
    if (rem == 0) continue;
    const double frac = static_cast<double>(rem) / static_cast<double>(den);
    term.upper = lower + 1;
    if (rule == InterpolationRule::Linear) {
      term.lower_coeff = 1.0 - frac;
      term.upper_coeff = frac;
    } else {
      const double slope = frac / (1.0 + kEpsilon);
      term.lower_coeff = -slope;
      term.upper_coeff = 1.0 + slope;
    }
  }
  return terms;
}

VectorXd interpolate_weights(const WeightModel& model, int m, InterpolationRule rule) {
  const auto terms = interpolation_terms(model.n_max(), m, rule);
  VectorXd z(m);
  for (int j = 0; j < m; ++j) {
    const auto& t = terms[static_cast<std::size_t>(j)];
    z[j] = t.upper_coeff == 0.0 ? model.weights[t.lower]
                                : t.lower_coeff * model.weights[t.lower] +
                                      t.upper_coeff * model.weights[t.upper];
  }
  return z;
}

SelectedTokens select_tokens(const SortedText& text, const EmbeddingTable& table, int n_max) {
  SelectedTokens out;
  for (const auto& token : text.tokens) {
    if (n_max >= 0 && out.vectors.size() >= static_cast<std::size_t>(n_max)) break;
    if (auto v = table.lookup(token)) {
      out.tokens.push_back(token);
      out.vectors.push_back(*v);
    }
  }
  if (out.vectors.empty()) throw UnrepresentableText(text.tokens);
  return out;
}

Representation represent_learned(const SortedText& text, const EmbeddingTable& table,
                                 const WeightModel& model, InterpolationRule rule) {
  const auto selected = select_tokens(text, table, model.n_max());
  const int m = static_cast<int>(selected.vectors.size());
  const VectorXd z = interpolate_weights(model, m, rule);
  VectorXd sum = VectorXd::Zero(table.dimension());
  for (int j = 0; j < m; ++j) sum += z[j] * selected.vectors[static_cast<std::size_t>(j)];
  return {sum / static_cast<double>(m), m};
}

MatrixXd design_matrix(const SortedText& text, const EmbeddingTable& table, int n_max,
                       InterpolationRule rule) {
  const auto selected = select_tokens(text, table, n_max);
  const int m = static_cast<int>(selected.vectors.size());
  const auto terms = interpolation_terms(n_max, m, rule);
  const double scale = 1.0 / static_cast<double>(m);
  MatrixXd a = MatrixXd::Zero(table.dimension(), n_max);
  for (int j = 0; j < m; ++j) {
    const auto& t = terms[static_cast<std::size_t>(j)];
    const auto& v = selected.vectors[static_cast<std::size_t>(j)];
    a.col(t.lower) += (t.lower_coeff * scale) * v;
    if (t.upper_coeff != 0.0) a.col(t.upper) += (t.upper_coeff * scale) * v;
  }
  return a;
}

namespace {

struct BaselineInfo {
  Baseline method;
  const char* name;
};

constexpr BaselineInfo kBaselines[] = {
    {Baseline::Mean, "mean"},
    {Baseline::Max, "max"},
    {Baseline::Min, "min"},
    {Baseline::MinMaxConcat, "minmax_concat"},
    {Baseline::MeanTop30, "mean_top30"},
    {Baseline::MaxTop30, "max_top30"},
    {Baseline::MinMaxTop30, "minmax_top30"},
    {Baseline::IdfWeightedMean, "idf_weighted_mean"},
};

}  // namespace

std::string to_string(Baseline method) {
  for (const auto& info : kBaselines) {
    if (info.method == method) return info.name;
  }
  return "unknown";
}

Baseline baseline_from_string(const std::string& name) {
  for (const auto& info : kBaselines) {
    if (name == info.name) return info.method;
  }
  throw std::invalid_argument("unknown baseline \"" + name + "\"");
}

const std::vector<Baseline>& all_baselines() {
  static const std::vector<Baseline> methods = [] {
    std::vector<Baseline> out;
    for (const auto& info : kBaselines) out.push_back(info.method);
    return out;
  }();
  return methods;
}

Representation represent_baseline(const NormalizedText& text, const EmbeddingTable& table,
                                  const IdfTable& idf, Baseline method) {
  const auto sorted = sort_by_idf(text, idf);
  auto selected = select_tokens(sorted, table);
  const bool top30 = method == Baseline::MeanTop30 || method == Baseline::MaxTop30 ||
                     method == Baseline::MinMaxTop30;
  if (top30) {
    // ceil(0.3 m), at least one token
    const std::size_t keep = std::max<std::size_t>(1, (3 * selected.vectors.size() + 9) / 10);
    while (selected.vectors.size() > keep) selected.vectors.pop_back();
    selected.tokens.resize(keep);
  }
  const auto& vs = selected.vectors;
  const int m = static_cast<int>(vs.size());
  const int dim = table.dimension();

  auto mean = [&] {
    VectorXd sum = VectorXd::Zero(dim);
    for (const auto& v : vs) sum += v;
    return VectorXd(sum / static_cast<double>(m));
  };
  auto max = [&] {
    VectorXd out = vs.front();
    for (const auto& v : vs) out = out.cwiseMax(v);
    return out;
  };
  auto min = [&] {
    VectorXd out = vs.front();
    for (const auto& v : vs) out = out.cwiseMin(v);
    return out;
  };
  auto minmax = [&] {
    VectorXd out(2 * dim);
    out << min(), max();
    return out;
  };

  switch (method) {
    case Baseline::Mean:
    case Baseline::MeanTop30:
      return {mean(), m};
    case Baseline::Max:
    case Baseline::MaxTop30:
      return {max(), m};
    case Baseline::Min:
      return {min(), m};
    case Baseline::MinMaxConcat:
    case Baseline::MinMaxTop30:
      return {minmax(), m};
    case Baseline::IdfWeightedMean: {
      VectorXd sum = VectorXd::Zero(dim);
      for (int j = 0; j < m; ++j) {
        sum += idf.idf_or_unseen(selected.tokens[static_cast<std::size_t>(j)]) *
               vs[static_cast<std::size_t>(j)];
      }
      return {sum / static_cast<double>(m), m};
    }
  }
  throw std::invalid_argument("unknown baseline");
}

SparseVector tfidf_vector(const NormalizedText& text, const IdfTable& idf) {
  std::map<std::string, int> counts;
  for (const auto& token : text.tokens) ++counts[token];
  SparseVector out;
  for (const auto& [token, tf] : counts) out[token] = tf * idf.idf_or_unseen(token);
  return out;
}

double cosine_distance(const SparseVector& x, const SparseVector& y) {
  double sx = 0.0;
  double sy = 0.0;
  double dot = 0.0;
  for (const auto& [token, value] : x) {
    sx += value * value;
    auto it = y.find(token);
    if (it != y.end()) dot += value * it->second;
  }
  for (const auto& [token, value] : y) sy += value * value;
  if (sx == 0.0 || sy == 0.0) return 1.0;
  return std::max(0.0, 1.0 - dot / std::sqrt(sx * sy));
}

double distance(const Representation& x, const Representation& y, Metric metric) {
  return distance(metric, x.vector, y.vector);
}

}  // namespace rankweight
