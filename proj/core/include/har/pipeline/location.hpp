#pragma once

#include <vector>

#include "har/pipeline/train.hpp"

namespace har::pipeline {

// Configuration of the location recognizer: a plain 6-layer IndRNN stack
// classifying the two placement groups.
nn::NetworkConfig location_network_config(int hidden_width = 32);

struct LocationDecision {
  std::vector<LocationGroup> per_sample;
  LocationGroup majority;  // ties break to BagHand (lexicographically first)
};

LocationDecision recognize_location_group(nn::Network<float>& location_net,
                                          const FeatureDataset& ds);

}  // namespace har::pipeline
