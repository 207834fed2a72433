#pragma once

#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "har/nn/layers.hpp"

namespace har::nn {

enum class ArchKind { Plain, Residual, Dense };

struct DropoutRates {
  double input = 0.5;
  double dense_layer = 0.5;
  double bottleneck = 0.1;
  double transition = 0.3;

  bool operator==(const DropoutRates&) const = default;
};

struct NetworkConfig {
  ArchKind architecture = ArchKind::Dense;
  std::vector<int> block_layers = {8, 6, 4};
  int growth_rate = 48;
  double transition_compression = 0.5;
  DropoutRates dropout;
  int n_classes = 8;
  // Width of the stem projection for the dense variant and of every hidden
  // layer for the plain/residual variants.
  int hidden_width = 128;
  int seq_len = 21;
  double recurrent_max_memory = 2.0;

  double recurrent_clip() const {
    return std::pow(recurrent_max_memory, 1.0 / seq_len);
  }
  void validate() const {
    if (block_layers.empty()) throw BadConfig("block_layers must be nonempty");
    if (!(transition_compression > 0.0 && transition_compression <= 1.0))
      throw BadConfig("transition_compression must be in (0,1]");
    for (double d : {dropout.input, dropout.dense_layer, dropout.bottleneck,
                     dropout.transition})
      if (d < 0.0 || d >= 1.0) throw BadConfig("dropout rates must be in [0,1)");
    if (growth_rate < 1 || hidden_width < 1 || n_classes < 2 || seq_len < 1)
      throw BadConfig("growth_rate, hidden_width, n_classes, seq_len out of range");
  }
  bool operator==(const NetworkConfig&) const = default;
};

// Dense layer: bottleneck IndRNN (in -> 4*growth) + BN + dropout, producer
// IndRNN (4*growth -> growth) + BN + dropout; output is [input, produced]
// concatenated, so the width grows by `growth`.
template <class S>
class DenseUnit : public Layer<S> {
public:
  DenseUnit(int in, int growth, S clip, const DropoutRates& dr)
      : in_(in), growth_(growth) {
    chain_.emplace_back(
        std::make_unique<IndRNN<S>>(in, 4 * growth, Activation::Relu, clip));
    chain_.emplace_back(std::make_unique<BatchNorm<S>>(4 * growth));
    chain_.emplace_back(
        std::make_unique<Dropout<S>>(S(dr.bottleneck), false));
    chain_.emplace_back(std::make_unique<IndRNN<S>>(4 * growth, growth,
                                                    Activation::Relu, clip));
    chain_.emplace_back(std::make_unique<BatchNorm<S>>(growth));
    chain_.emplace_back(
        std::make_unique<Dropout<S>>(S(dr.dense_layer), false));
  }

  void init(std::mt19937_64& rng) override {
    for (auto& l : chain_) l->init(rng);
  }

  Seq<S> forward(const Seq<S>& x, bool train, std::mt19937_64& rng) override {
    Seq<S> h = x;
    for (auto& l : chain_) h = l->forward(h, train, rng);
    Seq<S> out(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
      out[t].resize(x[t].rows(), in_ + growth_);
      out[t] << x[t], h[t];
    }
    return out;
  }

  Seq<S> backward(const Seq<S>& grad_out) override {
    Seq<S> gh(grad_out.size());
    Seq<S> dx(grad_out.size());
    for (std::size_t t = 0; t < grad_out.size(); ++t) {
      dx[t] = grad_out[t].leftCols(in_);
      gh[t] = grad_out[t].rightCols(growth_);
    }
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it)
      gh = (*it)->backward(gh);
    for (std::size_t t = 0; t < dx.size(); ++t) dx[t] += gh[t];
    return dx;
  }

  void collect(const std::string& prefix,
               std::vector<ParamRef<S>>& out) override {
    static const char* names[] = {"bottleneck", "bottleneck_bn", "drop0",
                                  "producer", "producer_bn", "drop1"};
    for (std::size_t i = 0; i < chain_.size(); ++i)
      chain_[i]->collect(prefix + "." + names[i], out);
  }

  void clip_recurrent() override {
    for (auto& l : chain_) l->clip_recurrent();
  }

  int out_dim(int in_dim) const override { return in_dim + growth_; }

private:
  int in_, growth_;
  std::vector<std::unique_ptr<Layer<S>>> chain_;
};

// Two IndRNN+BN layers of equal width with an identity skip.
template <class S>
class ResidualPair : public Layer<S> {
public:
  ResidualPair(int width, S clip, const DropoutRates& dr) {
    chain_.emplace_back(
        std::make_unique<IndRNN<S>>(width, width, Activation::Relu, clip));
    chain_.emplace_back(std::make_unique<BatchNorm<S>>(width));
    chain_.emplace_back(
        std::make_unique<IndRNN<S>>(width, width, Activation::Relu, clip));
    chain_.emplace_back(std::make_unique<BatchNorm<S>>(width));
    drop_ = std::make_unique<Dropout<S>>(S(dr.dense_layer), false);
  }

  void init(std::mt19937_64& rng) override {
    for (auto& l : chain_) l->init(rng);
  }

  Seq<S> forward(const Seq<S>& x, bool train, std::mt19937_64& rng) override {
    Seq<S> h = x;
    for (auto& l : chain_) h = l->forward(h, train, rng);
    for (std::size_t t = 0; t < x.size(); ++t) h[t] += x[t];
    return drop_->forward(h, train, rng);
  }

  Seq<S> backward(const Seq<S>& grad_out) override {
    Seq<S> g = drop_->backward(grad_out);
    Seq<S> gh = g;
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it)
      gh = (*it)->backward(gh);
    for (std::size_t t = 0; t < g.size(); ++t) gh[t] += g[t];
    return gh;
  }

  void collect(const std::string& prefix,
               std::vector<ParamRef<S>>& out) override {
    static const char* names[] = {"rnn0", "bn0", "rnn1", "bn1"};
    for (std::size_t i = 0; i < chain_.size(); ++i)
      chain_[i]->collect(prefix + "." + names[i], out);
  }

  void clip_recurrent() override {
    for (auto& l : chain_) l->clip_recurrent();
  }

  int out_dim(int in_dim) const override { return in_dim; }

private:
  std::vector<std::unique_ptr<Layer<S>>> chain_;
  std::unique_ptr<Dropout<S>> drop_;
};

// Affine map + softmax on the last time step.
template <class S>
class Classifier {
public:
  Classifier(int in, int classes) : in_(in), classes_(classes) {
    w = Mat<S>::Zero(in, classes);
    b = Mat<S>::Zero(1, classes);
    gw = Mat<S>::Zero(in, classes);
    gb = Mat<S>::Zero(1, classes);
  }

  void init(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_));
    for (int i = 0; i < in_; ++i)
      for (int j = 0; j < classes_; ++j)
        w(i, j) = static_cast<S>(unit(rng) * scale);
  }

  // Returns softmax probabilities, batch x classes.
  Mat<S> forward(const Seq<S>& h) {
    h_last_ = h.back();
    Mat<S> logits = (h_last_ * w).rowwise() + b.row(0);
    Mat<S> probs(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      const S mx = logits.row(r).maxCoeff();
      Eigen::Array<S, 1, Eigen::Dynamic> e =
          (logits.row(r).array() - mx).exp();
      probs.row(r) = (e / e.sum()).matrix();
    }
    steps_ = static_cast<int>(h.size());
    return probs;
  }

  // dlogits is the gradient w.r.t. the pre-softmax logits.
  Seq<S> backward(const Mat<S>& dlogits) {
    if (h_last_.size() == 0)
      throw MissingCache("classifier backward before forward");
    gw.noalias() += h_last_.transpose() * dlogits;
    gb.row(0) += dlogits.colwise().sum();
    Seq<S> dh(steps_);
    for (int t = 0; t < steps_; ++t)
      dh[t] = Mat<S>::Zero(h_last_.rows(), in_);
    dh[steps_ - 1].noalias() = dlogits * w.transpose();
    return dh;
  }

  void collect(std::vector<ParamRef<S>>& out) {
    out.push_back({"classifier.w", &w, &gw, true});
    out.push_back({"classifier.b", &b, &gb, true});
  }

  Mat<S> w, b, gw, gb;

private:
  int in_, classes_;
  Mat<S> h_last_;
  int steps_ = 0;
};

template <class S>
struct LossResult {
  S loss;
  Mat<S> dlogits;  // gradient w.r.t. logits, already divided by batch
};

// Mean negative log-likelihood over the batch; probabilities are floored
// at 1e-12 inside the log.
template <class S>
LossResult<S> cross_entropy(const Mat<S>& probs,
                            const std::vector<int>& targets) {
  const Eigen::Index batch = probs.rows();
  if (static_cast<Eigen::Index>(targets.size()) != batch)
    throw ShapeMismatch("targets size does not match batch");
  S loss = S(0);
  Mat<S> d = probs;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const S p = std::max(probs(i, targets[i]), S(1e-12));
    loss -= std::log(p);
    d(i, targets[i]) -= S(1);
  }
  loss /= static_cast<S>(batch);
  d /= static_cast<S>(batch);
  return {loss, std::move(d)};
}

template <class S>
class Network {
public:
  Network() = default;
  Network(const NetworkConfig& cfg, int input_dim) : cfg_(cfg), input_(input_dim) {
    cfg.validate();
    const S clip = static_cast<S>(cfg.recurrent_clip());
    int width = input_dim;

    stack_.emplace_back(
        std::make_unique<Dropout<S>>(S(cfg.dropout.input), true));

    switch (cfg.architecture) {
      case ArchKind::Dense: {
        // Stem projection so the concatenation arithmetic is well-defined.
        stack_.emplace_back(std::make_unique<IndRNN<S>>(
            width, cfg.hidden_width, Activation::Relu, clip));
        stack_.emplace_back(std::make_unique<BatchNorm<S>>(cfg.hidden_width));
        width = cfg.hidden_width;
        for (std::size_t bi = 0; bi < cfg.block_layers.size(); ++bi) {
          for (int li = 0; li < cfg.block_layers[bi]; ++li) {
            stack_.emplace_back(std::make_unique<DenseUnit<S>>(
                width, cfg.growth_rate, clip, cfg.dropout));
            width += cfg.growth_rate;
          }
          if (bi + 1 < cfg.block_layers.size()) {
            const int compressed = static_cast<int>(
                std::floor(width * cfg.transition_compression));
            stack_.emplace_back(std::make_unique<IndRNN<S>>(
                width, compressed, Activation::Relu, clip));
            stack_.emplace_back(std::make_unique<BatchNorm<S>>(compressed));
            stack_.emplace_back(
                std::make_unique<Dropout<S>>(S(cfg.dropout.transition), false));
            width = compressed;
          }
        }
        break;
      }
      case ArchKind::Residual: {
        stack_.emplace_back(std::make_unique<IndRNN<S>>(
            width, cfg.hidden_width, Activation::Relu, clip));
        stack_.emplace_back(std::make_unique<BatchNorm<S>>(cfg.hidden_width));
        width = cfg.hidden_width;
        const int total =
            std::accumulate(cfg.block_layers.begin(), cfg.block_layers.end(), 0);
        for (int p = 0; p < total / 2; ++p)
          stack_.emplace_back(
              std::make_unique<ResidualPair<S>>(width, clip, cfg.dropout));
        break;
      }
      case ArchKind::Plain: {
        const int total =
            std::accumulate(cfg.block_layers.begin(), cfg.block_layers.end(), 0);
        for (int l = 0; l < total; ++l) {
          stack_.emplace_back(std::make_unique<IndRNN<S>>(
              width, cfg.hidden_width, Activation::Relu, clip));
          stack_.emplace_back(std::make_unique<BatchNorm<S>>(cfg.hidden_width));
          if (cfg.dropout.dense_layer > 0.0)
            stack_.emplace_back(std::make_unique<Dropout<S>>(
                S(cfg.dropout.dense_layer), false));
          width = cfg.hidden_width;
        }
        break;
      }
    }
    classifier_ = std::make_unique<Classifier<S>>(width, cfg.n_classes);
    feature_width_ = width;
  }

  void init(std::mt19937_64& rng) {
    for (auto& l : stack_) l->init(rng);
    classifier_->init(rng);
  }

  Mat<S> forward(const Seq<S>& x, bool train, std::mt19937_64& rng) {
    Seq<S> h = x;
    for (auto& l : stack_) h = l->forward(h, train, rng);
    return classifier_->forward(h);
  }

  void backward(const Mat<S>& dlogits) {
    Seq<S> g = classifier_->backward(dlogits);
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      g = (*it)->backward(g);
  }

  std::vector<ParamRef<S>> parameters() {
    std::vector<ParamRef<S>> out;
    for (std::size_t i = 0; i < stack_.size(); ++i)
      stack_[i]->collect("layer" + std::to_string(i), out);
    classifier_->collect(out);
    return out;
  }

  void zero_grads() {
    for (auto& p : parameters())
      if (p.grad) p.grad->setZero();
  }

  void clip_recurrent() {
    for (auto& l : stack_) l->clip_recurrent();
  }

  const NetworkConfig& config() const { return cfg_; }
  int input_dim() const { return input_; }
  int classifier_input_dim() const { return feature_width_; }

private:
  NetworkConfig cfg_;
  int input_ = 0;
  int feature_width_ = 0;
  std::vector<std::unique_ptr<Layer<S>>> stack_;
  std::unique_ptr<Classifier<S>> classifier_;
};

template <class S>
Network<S> build_network(const NetworkConfig& cfg, int input_dim) {
  return Network<S>(cfg, input_dim);
}

}  // namespace har::nn
