#include "har/pipeline/location.hpp"

namespace har::pipeline {

nn::NetworkConfig location_network_config(int hidden_width) {
  nn::NetworkConfig cfg;
  cfg.architecture = nn::ArchKind::Plain;
  cfg.block_layers = {6};
  cfg.hidden_width = hidden_width;
  cfg.n_classes = kNumLocationGroups;
  cfg.dropout = {0.0, 0.0, 0.0, 0.0};
  return cfg;
}

LocationDecision recognize_location_group(nn::Network<float>& location_net,
                                          const FeatureDataset& ds) {
  const auto pred = argmax_rows(predict_probs(location_net, ds));
  LocationDecision out;
  out.per_sample.reserve(pred.size());
  std::size_t bag_hand = 0;
  for (int p : pred) {
    const auto g = static_cast<LocationGroup>(p);
    out.per_sample.push_back(g);
    if (g == LocationGroup::BagHand) ++bag_hand;
  }
  out.majority = 2 * bag_hand >= pred.size() ? LocationGroup::BagHand
                                             : LocationGroup::HipsTorso;
  return out;
}

}  // namespace har::pipeline
