#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "har/errors.hpp"

namespace har::nn {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// A sequence of T per-step activation matrices, each batch x features.
template <class S>
using Seq = std::vector<Mat<S>>;

enum class Activation { Relu, Identity };

// View over one named parameter tensor and its gradient. `trainable` is
// false for batch-norm running statistics, which are checkpointed but
// never touched by the optimizer.
template <class S>
struct ParamRef {
  std::string name;
  Mat<S>* value;
  Mat<S>* grad;  // nullptr for non-trainable state
  bool trainable;
};

template <class S>
Seq<S> zeros_like(const Seq<S>& x) {
  Seq<S> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t)
    out[t] = Mat<S>::Zero(x[t].rows(), x[t].cols());
  return out;
}

}  // namespace har::nn
