#pragma once

// Sigmoid multilayer perceptron trained by per-sample gradient descent on
// squared error, and the two-output S3+/S3- boundary classifier built on it.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "../error.hpp"
#include "features.hpp"
#include "random.hpp"

namespace prosogate::prosody {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

class Mlp {
 public:
  struct Gradients {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;
  };

  Mlp() = default;

  /// Weights uniform in ±1/sqrt(fan-in), biases zero.
  Mlp(std::vector<std::size_t> dims, Rng& rng) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw InvalidArgument("an MLP needs at least an input and an output layer");
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      const double r = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
      std::vector<double> w(dims_[l + 1] * dims_[l]);
      for (auto& x : w) x = rng.uniform(-r, r);
      w_.push_back(std::move(w));
      b_.emplace_back(dims_[l + 1], 0.0);
    }
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::vector<std::vector<double>>& weights() { return w_; }
  std::vector<std::vector<double>>& biases() { return b_; }
  const std::vector<std::vector<double>>& weights() const { return w_; }
  const std::vector<std::vector<double>>& biases() const { return b_; }

  /// Activations of every layer, input first.
  std::vector<std::vector<double>> activations(const std::vector<double>& x) const {
    if (x.size() != dims_.front())
      throw InvalidArgument("input has " + std::to_string(x.size()) + " values, network expects " +
                            std::to_string(dims_.front()));
    std::vector<std::vector<double>> a{x};
    for (std::size_t l = 0; l < w_.size(); ++l) {
      const auto& in = a.back();
      std::vector<double> out(dims_[l + 1]);
      for (std::size_t j = 0; j < out.size(); ++j) {
        double z = b_[l][j];
        const double* row = &w_[l][j * dims_[l]];
        for (std::size_t i = 0; i < in.size(); ++i) z += row[i] * in[i];
        out[j] = sigmoid(z);
      }
      a.push_back(std::move(out));
    }
    return a;
  }

  std::vector<double> forward(const std::vector<double>& x) const { return activations(x).back(); }

  /// 0.5 * sum of squared output errors.
  double loss(const std::vector<double>& x, const std::vector<double>& target) const {
    auto o = forward(x);
    double s = 0;
    for (std::size_t k = 0; k < o.size(); ++k) s += 0.5 * (o[k] - target[k]) * (o[k] - target[k]);
    return s;
  }

  Gradients gradients(const std::vector<double>& x, const std::vector<double>& target) const {
    auto a = activations(x);
    Gradients g;
    g.w.resize(w_.size());
    g.b.resize(b_.size());
    std::vector<double> delta(dims_.back());
    for (std::size_t k = 0; k < delta.size(); ++k) {
      const double o = a.back()[k];
      delta[k] = (o - target[k]) * o * (1 - o);
    }
    for (std::size_t l = w_.size(); l-- > 0;) {
      const auto& in = a[l];
      g.w[l].assign(w_[l].size(), 0.0);
      g.b[l] = delta;
      for (std::size_t j = 0; j < dims_[l + 1]; ++j)
        for (std::size_t i = 0; i < dims_[l]; ++i) g.w[l][j * dims_[l] + i] = delta[j] * in[i];
      if (l == 0) break;
      std::vector<double> prev(dims_[l], 0.0);
      for (std::size_t i = 0; i < dims_[l]; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < dims_[l + 1]; ++j) s += w_[l][j * dims_[l] + i] * delta[j];
        prev[i] = s * in[i] * (1 - in[i]);
      }
      delta = std::move(prev);
    }
    return g;
  }

  /// One gradient step on a single example, without materializing gradients.
  void train_step(const std::vector<double>& x, const std::vector<double>& target, double lr) {
    auto a = activations(x);
    std::vector<double> delta(dims_.back());
    for (std::size_t k = 0; k < delta.size(); ++k) {
      const double o = a.back()[k];
      delta[k] = (o - target[k]) * o * (1 - o);
    }
    for (std::size_t l = w_.size(); l-- > 0;) {
      const auto& in = a[l];
      std::vector<double> prev;
      if (l > 0) {
        prev.assign(dims_[l], 0.0);
        for (std::size_t j = 0; j < dims_[l + 1]; ++j) {
          const double* row = &w_[l][j * dims_[l]];
          for (std::size_t i = 0; i < dims_[l]; ++i) prev[i] += row[i] * delta[j];
        }
        for (std::size_t i = 0; i < dims_[l]; ++i) prev[i] *= in[i] * (1 - in[i]);
      }
      for (std::size_t j = 0; j < dims_[l + 1]; ++j) {
        double* row = &w_[l][j * dims_[l]];
        const double step = lr * delta[j];
        for (std::size_t i = 0; i < dims_[l]; ++i) row[i] -= step * in[i];
        b_[l][j] -= step;
      }
      delta = std::move(prev);
    }
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::vector<double>> w_;  // layer l: dims[l+1] x dims[l], row-major
  std::vector<std::vector<double>> b_;
};

struct TrainParams {
  std::vector<std::size_t> hidden{40, 20};
  double learning_rate = 0.1;
  std::size_t epochs = 30;
};

struct LabelledVector {
  FeatureVector v;
  std::string s3;  // "S3+", "S3-" or "S3?"
};

struct Posterior {
  double plus = 0;
  double minus = 0;
};

/// One epoch's presentation order: every majority item once and the minority
/// class resampled with replacement up to the majority count, shuffled.
/// labels[i] is true for S3+.
inline std::vector<std::size_t> balanced_epoch(const std::vector<bool>& labels, Rng& rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw InvalidArgument("balanced epoch needs both classes");
  auto& minority = pos.size() < neg.size() ? pos : neg;
  const auto& majority = pos.size() < neg.size() ? neg : pos;
  std::vector<std::size_t> order(majority.begin(), majority.end());
  order.insert(order.end(), minority.begin(), minority.end());
  for (std::size_t k = minority.size(); k < majority.size(); ++k) order.push_back(minority[rng.index(minority.size())]);
  rng.shuffle(order);
  return order;
}

class MlpClassifier {
 public:
  Mlp net;
  std::vector<double> mean;   // input z-scoring, fitted on the training set
  std::vector<double> scale;
  std::uint64_t seed = 0;
  FeatureLayout layout;
  TrainParams params;

  std::size_t input_dim() const { return net.dims().empty() ? 0 : net.dims().front(); }

  std::vector<double> normalized(const FeatureVector& v) const {
    if (v.values.size() != input_dim())
      throw InvalidArgument("feature vector has " + std::to_string(v.values.size()) + " values, classifier expects " +
                            std::to_string(input_dim()));
    std::vector<double> x(v.values.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (v.values[i] - mean[i]) / scale[i];
    return x;
  }

  /// Raw sigmoid outputs of the S3+ and S3- nodes.
  Posterior raw(const FeatureVector& v) const {
    auto o = net.forward(normalized(v));
    return {o[0], o[1]};
  }

  /// Outputs rescaled to sum to one.
  Posterior classify(const FeatureVector& v) const {
    auto o = raw(v);
    const double s = o.plus + o.minus;
    if (!(s > 0)) return {0.5, 0.5};
    const double p = o.plus / s;
    return {p, 1.0 - p};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["dims"] = net.dims();
    j["seed"] = seed;
    j["activation"] = "sigmoid";
    j["layout"] = {{"id", layout.id},
                   {"context", layout.context},
                   {"regression_length", layout.regression_length},
                   {"mask", layout.mask}};
    j["input_mean"] = mean;
    j["input_scale"] = scale;
    j["weights"] = net.weights();
    j["biases"] = net.biases();
    j["train"] = {{"hidden", params.hidden}, {"learning_rate", params.learning_rate}, {"epochs", params.epochs}};
    return j;
  }

  static MlpClassifier from_json(const nlohmann::json& j) {
    try {
      MlpClassifier c;
      auto dims = j.at("dims").get<std::vector<std::size_t>>();
      if (dims.size() < 2 || dims.back() != 2) throw InputFormatError("classifier must have exactly 2 outputs");
      Rng dummy(0);
      c.net = Mlp(dims, dummy);
      c.seed = j.at("seed").get<std::uint64_t>();
      const auto& lj = j.at("layout");
      c.layout.id = lj.at("id").get<std::string>();
      c.layout.context = lj.at("context").get<int>();
      c.layout.regression_length = lj.at("regression_length").get<std::size_t>();
      c.layout.mask = lj.at("mask").get<std::vector<bool>>();
      c.mean = j.at("input_mean").get<std::vector<double>>();
      c.scale = j.at("input_scale").get<std::vector<double>>();
      auto w = j.at("weights").get<std::vector<std::vector<double>>>();
      auto b = j.at("biases").get<std::vector<std::vector<double>>>();
      if (w.size() != dims.size() - 1 || b.size() != dims.size() - 1)
        throw InputFormatError("classifier layer count differs from dims");
      for (std::size_t l = 0; l + 1 < dims.size(); ++l)
        if (w[l].size() != dims[l] * dims[l + 1] || b[l].size() != dims[l + 1])
          throw InputFormatError("classifier weight shape differs from dims at layer " + std::to_string(l));
      if (c.mean.size() != dims[0] || c.scale.size() != dims[0])
        throw InputFormatError("classifier input normalization has the wrong length");
      if (c.layout.dimension() != dims[0]) throw InputFormatError("classifier layout dimension differs from dims");
      c.net.weights() = std::move(w);
      c.net.biases() = std::move(b);
      if (j.contains("train")) {
        c.params.hidden = j["train"].at("hidden").get<std::vector<std::size_t>>();
        c.params.learning_rate = j["train"].at("learning_rate").get<double>();
        c.params.epochs = j["train"].at("epochs").get<std::size_t>();
      }
      return c;
    } catch (const nlohmann::json::exception& e) {
      throw InputFormatError(std::string("malformed classifier file: ") + e.what());
    }
  }
};

/// Per-epoch record of how many S3+ and S3- vectors were presented.
struct TrainLog {
  std::vector<std::pair<std::size_t, std::size_t>> presented;
};

/// Trains on the S3+ and S3- items of data; S3? items are skipped.
inline MlpClassifier train(const std::vector<LabelledVector>& data, const FeatureLayout& layout,
                           const TrainParams& params, std::uint64_t seed, TrainLog* log = nullptr) {
  std::vector<const FeatureVector*> xs;
  std::vector<bool> labels;
  for (const auto& d : data) {
    if (d.s3 == "S3?") continue;
    if (d.s3 != "S3+" && d.s3 != "S3-") throw InvalidArgument("unknown training label " + d.s3);
    if (d.v.values.size() != layout.dimension())
      throw InvalidArgument("training vector has " + std::to_string(d.v.values.size()) + " values, layout " +
                            layout.id + " has " + std::to_string(layout.dimension()));
    xs.push_back(&d.v);
    labels.push_back(d.s3 == "S3+");
  }
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  if (positives == 0 || positives == labels.size()) throw InvalidArgument("training data must contain S3+ and S3- items");

  MlpClassifier c;
  c.seed = seed;
  c.layout = layout;
  c.params = params;
  const std::size_t dim = layout.dimension();
  c.mean.assign(dim, 0.0);
  c.scale.assign(dim, 0.0);
  for (const auto* x : xs)
    for (std::size_t i = 0; i < dim; ++i) c.mean[i] += x->values[i];
  for (auto& m : c.mean) m /= static_cast<double>(xs.size());
  for (const auto* x : xs)
    for (std::size_t i = 0; i < dim; ++i) c.scale[i] += (x->values[i] - c.mean[i]) * (x->values[i] - c.mean[i]);
  for (auto& s : c.scale) {
    s = std::sqrt(s / static_cast<double>(xs.size()));
    if (s < 1e-12) s = 1.0;
  }

  Rng rng(seed);
  std::vector<std::size_t> dims{dim};
  dims.insert(dims.end(), params.hidden.begin(), params.hidden.end());
  dims.push_back(2);
  c.net = Mlp(dims, rng);

  std::vector<std::vector<double>> normalized;
  normalized.reserve(xs.size());
  for (const auto* x : xs) normalized.push_back(c.normalized(*x));
  const std::vector<double> plus{1.0, 0.0}, minus{0.0, 1.0};
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    auto order = balanced_epoch(labels, rng);
    std::size_t np = 0, nm = 0;
    for (auto i : order) {
      (labels[i] ? np : nm)++;
      c.net.train_step(normalized[i], labels[i] ? plus : minus, params.learning_rate);
    }
    if (log) log->presented.emplace_back(np, nm);
  }
  return c;
}

}  // namespace prosogate::prosody
