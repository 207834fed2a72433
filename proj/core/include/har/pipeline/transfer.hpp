#pragma once

#include <vector>

#include "har/pipeline/train.hpp"

namespace har::pipeline {

enum class TransferVariant { A, B };

struct TransferSplit {
  std::vector<std::size_t> transfer_train;
  std::vector<std::size_t> transfer_val;
  TransferVariant variant;
};

// Per class (stable order): the first half goes to transfer_train for
// variant A and to transfer_val for variant B; odd counts give the extra
// sample to transfer_train. Every class needs >= 2 samples.
TransferSplit stratified_split(const std::vector<int>& labels, int n_classes,
                               TransferVariant variant);

struct TransferResult {
  nn::Network<float> model_a;
  nn::Network<float> model_b;
  EvalReport report_a;
  EvalReport report_b;
  EvalReport report_fused;
  std::vector<int> fused_predictions;
};

struct TransferOptions {
  double lr = 2e-5;
  int max_epochs = 100;
  int early_stop_patience = 20;
  int batch_size = 128;
  std::uint64_t seed = 0;
};

// Fine-tunes two copies of the base model on the two stratified halves of
// the validation set and fuses them by averaging softmax outputs.
TransferResult transfer_and_fuse(nn::Network<float>& base,
                                 const FeatureDataset& val_set,
                                 const std::vector<int>& val_labels,
                                 const FeatureDataset& test_set,
                                 const std::vector<int>& test_labels,
                                 const TransferOptions& opt);

// argmax of the mean of the two models' softmax outputs.
std::vector<int> fuse_predictions(nn::Network<float>& a, nn::Network<float>& b,
                                  const FeatureDataset& ds);

}  // namespace har::pipeline
