#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "har/nn/adam.hpp"
#include "har/nn/network.hpp"

namespace har::nn {

// Per-feature z-score statistics applied to inputs before the network.
struct NormStats {
  Eigen::VectorXf mean;
  Eigen::VectorXf std;
};

struct LoadedCheckpoint {
  Network<float> net;
  NormStats norm;
  std::optional<Adam<float>> opt;
};

// Binary layout: magic, format version, NetworkConfig + input dim, named
// parameter tensors (float32 LE), optional optimizer moments, normalization
// statistics, trailing CRC32 of everything before it.
void save_checkpoint(Network<float>& net, const NormStats& norm,
                     Adam<float>* opt, const std::string& path);

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace har::nn
