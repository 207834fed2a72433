#pragma once

#include <cstdint>
#include <string>

#include "har/features.hpp"
#include "har/nn/network.hpp"
#include "har/nn/schedule.hpp"
#include "har/pipeline/synth.hpp"
#include "har/pipeline/train.hpp"
#include "har/pipeline/transfer.hpp"

namespace har::cli {

inline constexpr const char* kVersionStamp = "har 0.1.0 (format 1)";

enum class TrainTarget { Activity, LocationGroup };

// Everything a run needs, loadable from one JSON file with command-line
// overrides. The fully resolved config is echoed into every output
// directory.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;

  pipeline::SyntheticSpec synth;
  features::WindowSpec window;
  features::FeatureConfig feature;
  nn::NetworkConfig network;

  pipeline::TrainOptions train;
  TrainTarget train_target = TrainTarget::Activity;
  pipeline::TransferOptions transfer;
};

RunConfig load_config(const std::string& path);
void merge_json_config(RunConfig& cfg, const std::string& path);
std::string resolved_json(const RunConfig& cfg);

}  // namespace har::cli
