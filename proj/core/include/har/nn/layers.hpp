#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "har/nn/seq.hpp"

namespace har::nn {

template <class S>
class Layer {
public:
  virtual ~Layer() = default;
  virtual Seq<S> forward(const Seq<S>& x, bool train,
                         std::mt19937_64& rng) = 0;
  virtual Seq<S> backward(const Seq<S>& grad_out) = 0;
  virtual void init(std::mt19937_64& rng) = 0;
  virtual void collect(const std::string& prefix,
                       std::vector<ParamRef<S>>& out) = 0;
  virtual void clip_recurrent() {}
  virtual int out_dim(int in_dim) const = 0;
};

// h_t = act(x_t W + h_{t-1} .* u + b), neurons independent in the
// recurrence. |u| is clamped to recurrent_clip after every optimizer step.
template <class S>
class IndRNN : public Layer<S> {
public:
  IndRNN(int in, int out, Activation act, S recurrent_clip)
      : in_(in), out_(out), act_(act), clip_(recurrent_clip) {
    w = Mat<S>::Zero(in, out);
    u = Mat<S>::Zero(1, out);
    b = Mat<S>::Zero(1, out);
    gw = Mat<S>::Zero(in, out);
    gu = Mat<S>::Zero(1, out);
    gb = Mat<S>::Zero(1, out);
  }

  void init(std::mt19937_64& rng) override {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_));
    for (int i = 0; i < in_; ++i)
      for (int j = 0; j < out_; ++j)
        w(i, j) = static_cast<S>(unit(rng) * scale);
    std::uniform_real_distribution<double> pos(0.0, static_cast<double>(clip_));
    for (int j = 0; j < out_; ++j) u(0, j) = static_cast<S>(pos(rng));
  }

  Seq<S> forward(const Seq<S>& x, bool /*train*/,
                 std::mt19937_64& /*rng*/) override {
    if (x.empty() || x[0].cols() != in_)
      throw ShapeMismatch("IndRNN expects " + std::to_string(in_) +
                          " input features");
    const int T = static_cast<int>(x.size());
    x_cache_ = x;
    h_cache_.assign(T, Mat<S>());
    Mat<S> h_prev = Mat<S>::Zero(x[0].rows(), out_);
    for (int t = 0; t < T; ++t) {
      Mat<S> pre = (x[t] * w).rowwise() + b.row(0);
      pre += h_prev * u.row(0).asDiagonal();
      if (act_ == Activation::Relu) pre = pre.cwiseMax(S(0));
      h_cache_[t] = std::move(pre);
      h_prev = h_cache_[t];
    }
    return h_cache_;
  }

  Seq<S> backward(const Seq<S>& grad_out) override {
    if (h_cache_.empty()) throw MissingCache("IndRNN backward before forward");
    const int T = static_cast<int>(grad_out.size());
    Seq<S> dx(T);
    Mat<S> carry = Mat<S>::Zero(grad_out[0].rows(), out_);
    for (int t = T - 1; t >= 0; --t) {
      Mat<S> g = grad_out[t] + carry;
      if (act_ == Activation::Relu)
        g = g.cwiseProduct(
            (h_cache_[t].array() > S(0)).template cast<S>().matrix());
      gw.noalias() += x_cache_[t].transpose() * g;
      gb.row(0) += g.colwise().sum();
      if (t > 0) {
        gu.row(0) += h_cache_[t - 1].cwiseProduct(g).colwise().sum();
        carry = g * u.row(0).asDiagonal();
      }
      dx[t].noalias() = g * w.transpose();
    }
    return dx;
  }

  void collect(const std::string& prefix,
               std::vector<ParamRef<S>>& out) override {
    out.push_back({prefix + ".w", &w, &gw, true});
    out.push_back({prefix + ".u", &u, &gu, true});
    out.push_back({prefix + ".b", &b, &gb, true});
  }

  void clip_recurrent() override {
    u = u.cwiseMax(-clip_).cwiseMin(clip_);
  }

  int out_dim(int) const override { return out_; }

  Mat<S> w, u, b, gw, gu, gb;

private:
  int in_, out_;
  Activation act_;
  S clip_;
  Seq<S> x_cache_, h_cache_;
};

// Per-feature normalization with statistics pooled over (batch, time).
template <class S>
class BatchNorm : public Layer<S> {
public:
  explicit BatchNorm(int features, S momentum = S(0.1), S epsilon = S(1e-5))
      : c_(features), momentum_(momentum), eps_(epsilon) {
    gamma = Mat<S>::Ones(1, c_);
    beta = Mat<S>::Zero(1, c_);
    running_mean = Mat<S>::Zero(1, c_);
    running_var = Mat<S>::Ones(1, c_);
    ggamma = Mat<S>::Zero(1, c_);
    gbeta = Mat<S>::Zero(1, c_);
  }

  void init(std::mt19937_64&) override {}

  Seq<S> forward(const Seq<S>& x, bool train, std::mt19937_64&) override {
    const int T = static_cast<int>(x.size());
    const int batch = static_cast<int>(x[0].rows());
    n_eff_ = static_cast<S>(T) * static_cast<S>(batch);
    if (train && n_eff_ < S(2))
      throw DegenerateBatch("batch norm needs >= 2 pooled samples in train mode");

    Mat<S> mean(1, c_), var(1, c_);
    if (train) {
      mean.setZero();
      for (const auto& xt : x) mean += xt.colwise().sum();
      mean /= n_eff_;
      var.setZero();
      for (const auto& xt : x)
        var += (xt.rowwise() - mean.row(0)).array().square().matrix()
                   .colwise().sum();
      var /= n_eff_;
      running_mean = (S(1) - momentum_) * running_mean + momentum_ * mean;
      running_var = (S(1) - momentum_) * running_var + momentum_ * var;
    } else {
      mean = running_mean;
      var = running_var;
    }

    inv_std_ = (var.array() + eps_).sqrt().inverse().matrix();
    xhat_.assign(T, Mat<S>());
    Seq<S> out(T);
    for (int t = 0; t < T; ++t) {
      xhat_[t] = (x[t].rowwise() - mean.row(0)) * inv_std_.row(0).asDiagonal();
      out[t] = (xhat_[t] * gamma.row(0).asDiagonal()).rowwise() + beta.row(0);
    }
    train_mode_ = train;
    return out;
  }

  Seq<S> backward(const Seq<S>& grad_out) override {
    if (xhat_.empty()) throw MissingCache("BatchNorm backward before forward");
    const int T = static_cast<int>(grad_out.size());

    Mat<S> sum_g = Mat<S>::Zero(1, c_);
    Mat<S> sum_gx = Mat<S>::Zero(1, c_);
    for (int t = 0; t < T; ++t) {
      sum_g += grad_out[t].colwise().sum();
      sum_gx += grad_out[t].cwiseProduct(xhat_[t]).colwise().sum();
    }
    ggamma += sum_gx;
    gbeta += sum_g;

    Seq<S> dx(T);
    if (!train_mode_) {
      for (int t = 0; t < T; ++t)
        dx[t] = grad_out[t] * gamma.row(0).asDiagonal() *
                inv_std_.row(0).asDiagonal();
      return dx;
    }
    for (int t = 0; t < T; ++t) {
      Mat<S> term = grad_out[t] * S(n_eff_);
      term.rowwise() -= sum_g.row(0);
      term -= xhat_[t] * sum_gx.row(0).asDiagonal();
      dx[t] = term * gamma.row(0).asDiagonal() *
              inv_std_.row(0).asDiagonal() / n_eff_;
    }
    return dx;
  }

  void collect(const std::string& prefix,
               std::vector<ParamRef<S>>& out) override {
    out.push_back({prefix + ".gamma", &gamma, &ggamma, true});
    out.push_back({prefix + ".beta", &beta, &gbeta, true});
    out.push_back({prefix + ".running_mean", &running_mean, nullptr, false});
    out.push_back({prefix + ".running_var", &running_var, nullptr, false});
  }

  int out_dim(int in_dim) const override { return in_dim; }

  Mat<S> gamma, beta, running_mean, running_var, ggamma, gbeta;

private:
  int c_;
  S momentum_, eps_;
  Mat<S> inv_std_;
  Seq<S> xhat_;
  S n_eff_ = S(0);
  bool train_mode_ = false;
};

// Inverted dropout. `per_step` resamples the mask at every time step
// (input dropout); otherwise one mask is shared across time.
template <class S>
class Dropout : public Layer<S> {
public:
  Dropout(S rate, bool per_step) : rate_(rate), per_step_(per_step) {}

  void init(std::mt19937_64&) override {}

  Seq<S> forward(const Seq<S>& x, bool train, std::mt19937_64& rng) override {
    const int T = static_cast<int>(x.size());
    if (!train || rate_ <= S(0)) {
      masks_.clear();
      active_ = false;
      return x;
    }
    active_ = true;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const S keep = S(1) - rate_;
    masks_.assign(per_step_ ? T : 1, Mat<S>());
    auto sample_mask = [&](Eigen::Index rows, Eigen::Index cols) {
      Mat<S> m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          m(i, j) = unif(rng) < static_cast<double>(keep) ? S(1) / keep : S(0);
      return m;
    };
    if (!per_step_) masks_[0] = sample_mask(x[0].rows(), x[0].cols());
    Seq<S> out(T);
    for (int t = 0; t < T; ++t) {
      if (per_step_) masks_[t] = sample_mask(x[t].rows(), x[t].cols());
      out[t] = x[t].cwiseProduct(per_step_ ? masks_[t] : masks_[0]);
    }
    return out;
  }

  Seq<S> backward(const Seq<S>& grad_out) override {
    if (!active_) return grad_out;
    Seq<S> dx(grad_out.size());
    for (std::size_t t = 0; t < grad_out.size(); ++t)
      dx[t] = grad_out[t].cwiseProduct(per_step_ ? masks_[t] : masks_[0]);
    return dx;
  }

  void collect(const std::string&, std::vector<ParamRef<S>>&) override {}
  int out_dim(int in_dim) const override { return in_dim; }

private:
  S rate_;
  bool per_step_;
  bool active_ = false;
  Seq<S> masks_;
};

}  // namespace har::nn
