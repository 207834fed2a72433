#pragma once

#include <cmath>
#include <vector>

#include "har/nn/seq.hpp"

namespace har::nn {

// Standard Adam with bias correction. Callers apply clip_recurrent() on the
// network after each step.
template <class S>
class Adam {
public:
  explicit Adam(S beta1 = S(0.9), S beta2 = S(0.999), S eps = S(1e-8))
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::vector<ParamRef<S>>& params, S lr) {
    if (m_.empty()) {
      for (const auto& p : params) {
        if (!p.trainable) continue;
        m_.push_back(Mat<S>::Zero(p.value->rows(), p.value->cols()));
        v_.push_back(Mat<S>::Zero(p.value->rows(), p.value->cols()));
      }
    }
    ++t_;
    const S bc1 = S(1) - std::pow(beta1_, static_cast<S>(t_));
    const S bc2 = S(1) - std::pow(beta2_, static_cast<S>(t_));
    std::size_t k = 0;
    for (auto& p : params) {
      if (!p.trainable) continue;
      if (p.grad->rows() != m_[k].rows() || p.grad->cols() != m_[k].cols())
        throw ShapeMismatch("optimizer state shape mismatch for " + p.name);
      m_[k] = beta1_ * m_[k] + (S(1) - beta1_) * (*p.grad);
      v_[k] = beta2_ * v_[k] +
              (S(1) - beta2_) * p.grad->cwiseProduct(*p.grad);
      const Mat<S> mhat = m_[k] / bc1;
      const Mat<S> vhat = v_[k] / bc2;
      p.value->array() -=
          lr * mhat.array() / (vhat.array().sqrt() + eps_);
      ++k;
    }
  }

  long step_count() const { return t_; }
  std::vector<Mat<S>>& first_moments() { return m_; }
  std::vector<Mat<S>>& second_moments() { return v_; }
  void set_step_count(long t) { t_ = t; }

private:
  S beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Mat<S>> m_, v_;
};

}  // namespace har::nn
