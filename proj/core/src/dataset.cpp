#include "har/pipeline/dataset.hpp"

#include <algorithm>
#include <thread>

namespace har::pipeline {

std::vector<int> FeatureDataset::activity_labels() const {
  std::vector<int> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = static_cast<int>(samples[i].activity);
  return out;
}

std::vector<int> FeatureDataset::group_labels() const {
  std::vector<int> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = static_cast<int>(group_of(samples[i].location));
  return out;
}

FeatureDataset featurize(const RawDataset& raw, const features::WindowSpec& spec,
                         const features::FeatureConfig& cfg, int threads) {
  FeatureDataset out;
  out.samples.resize(raw.samples.size());
  out.steps = spec.n_windows;
  out.feature_dim = features::feature_width(spec, cfg);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      out.samples[i] = features::extract_features(
          sensor::preprocess_sample(raw.samples[i]), spec, cfg);
  };

  const std::size_t n = raw.samples.size();
  if (threads <= 1 || n < 2) {
    work(0, n);
  } else {
    const std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t)
      pool.emplace_back(work, t * chunk, std::min(n, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  return out;
}

nn::NormStats compute_norm_stats(const FeatureDataset& ds) {
  const int f = ds.feature_dim;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(f);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(f);
  double n = 0;
  for (const auto& s : ds.samples) {
    for (int t = 0; t < s.values.rows(); ++t) {
      mean += s.values.row(t).transpose().cast<double>();
      sq += s.values.row(t).transpose().cast<double>().cwiseAbs2();
      n += 1;
    }
  }
  mean /= n;
  Eigen::VectorXd var = sq / n - mean.cwiseAbs2();
  nn::NormStats out;
  out.mean = mean.cast<float>();
  out.std = var.cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-6).cast<float>();
  return out;
}

void apply_norm(FeatureDataset& ds, const nn::NormStats& stats) {
  for (auto& s : ds.samples)
    s.values = (s.values.rowwise() - stats.mean.transpose()).array().rowwise() /
               stats.std.transpose().array();
}

}  // namespace har::pipeline
