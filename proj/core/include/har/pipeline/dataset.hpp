#pragma once

#include <string>
#include <vector>

#include "har/features.hpp"
#include "har/nn/checkpoint.hpp"
#include "har/sensor.hpp"

namespace har::pipeline {

struct RawDataset {
  std::vector<sensor::RawSample> samples;
};

struct FeatureDataset {
  std::vector<features::FeatureSequence> samples;
  int steps = 0;
  int feature_dim = 0;

  std::size_t size() const { return samples.size(); }
  std::vector<int> activity_labels() const;
  std::vector<int> group_labels() const;
};

// preprocess + extract_features for every sample, order preserved.
// threads <= 1 runs single-threaded (the deterministic mode).
FeatureDataset featurize(const RawDataset& raw, const features::WindowSpec& spec,
                         const features::FeatureConfig& cfg, int threads = 1);

// Per-feature mean/std over all samples and steps; std floored at 1e-6.
nn::NormStats compute_norm_stats(const FeatureDataset& ds);
void apply_norm(FeatureDataset& ds, const nn::NormStats& stats);

// Flat binary feature cache. Header: magic, version, n_samples, steps, F,
// label table (activity id, location id per sample); body: little-endian
// float32, sample-major.
void save_features(const FeatureDataset& ds, const std::string& path);
FeatureDataset load_features(const std::string& path);

}  // namespace har::pipeline
