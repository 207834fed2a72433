#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "har/nn/adam.hpp"
#include "har/nn/network.hpp"
#include "har/nn/schedule.hpp"
#include "har/pipeline/dataset.hpp"
#include "har/pipeline/metrics.hpp"

namespace har::pipeline {

struct TrainOptions {
  int batch_size = 128;
  int max_epochs = 100;
  nn::ScheduleConfig schedule;
  std::uint64_t seed = 0;
  // Stop once validation macro F1 reaches this value; <= 0 disables.
  double stop_at_f1 = -1.0;
  // Stop after this many epochs without validation improvement; <= 0 disables.
  int early_stop_patience = -1;
};

struct EpochStat {
  int epoch;
  double lr;
  double train_loss;
  double val_f1;
};

struct TrainResult {
  double best_f1 = 0.0;
  int best_epoch = -1;
  std::vector<EpochStat> history;
};

// Epoch loop with shuffled mini-batches; the network is left holding the
// parameters of the best-validation-F1 epoch.
TrainResult train(nn::Network<float>& net, const FeatureDataset& train_set,
                  const std::vector<int>& train_labels,
                  const FeatureDataset& val_set,
                  const std::vector<int>& val_labels, const TrainOptions& opt);

// Softmax outputs per sample, eval mode; order preserved.
nn::Mat<float> predict_probs(nn::Network<float>& net, const FeatureDataset& ds,
                             int batch_size = 128);

std::vector<int> argmax_rows(const nn::Mat<float>& probs);

EvalReport evaluate(nn::Network<float>& net, const FeatureDataset& ds,
                    const std::vector<int>& labels);

// New network with the same architecture and copied parameter values.
nn::Network<float> clone_network(nn::Network<float>& src);

std::string history_to_csv(const std::vector<EpochStat>& history);

}  // namespace har::pipeline
