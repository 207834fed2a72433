#include <benchmark/benchmark.h>

#include <random>

#include "har/fft.hpp"
#include "har/nn/network.hpp"
#include "har/pipeline/dataset.hpp"
#include "har/pipeline/synth.hpp"

using namespace har;

static void BM_FftAmplitude(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> window(100);
  for (double& v : window) v = g(rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(features::fft_amplitude(window));
}
BENCHMARK(BM_FftAmplitude);

static void BM_ExtractFeatures(benchmark::State& state) {
  pipeline::SyntheticSpec spec;
  spec.samples_per_class = 1;
  const pipeline::RawDataset raw = pipeline::synthesize(spec);
  const auto derotated = sensor::preprocess_sample(raw.samples[0]);
  features::FeatureConfig cfg;
  cfg.augment_temporal_diff = state.range(0) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        features::extract_features(derotated, features::WindowSpec{}, cfg));
}
BENCHMARK(BM_ExtractFeatures)->Arg(0)->Arg(1);

static void BM_DenseForward(benchmark::State& state) {
  nn::NetworkConfig cfg;
  cfg.architecture = nn::ArchKind::Dense;
  cfg.block_layers = {2, 2};
  cfg.growth_rate = 16;
  cfg.hidden_width = 48;
  cfg.dropout = {0.0, 0.0, 0.0, 0.0};
  nn::Network<float> net(cfg, 580);
  std::mt19937_64 rng(2);
  net.init(rng);

  const int batch = static_cast<int>(state.range(0));
  nn::Seq<float> x(21);
  std::normal_distribution<float> g(0.f, 1.f);
  for (auto& m : x) {
    m.resize(batch, 580);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x, false, rng));
}
BENCHMARK(BM_DenseForward)->Arg(1)->Arg(64);

static void BM_TrainStep(benchmark::State& state) {
  nn::NetworkConfig cfg;
  cfg.architecture = nn::ArchKind::Dense;
  cfg.block_layers = {2, 2};
  cfg.growth_rate = 16;
  cfg.hidden_width = 48;
  cfg.dropout = {0.0, 0.0, 0.0, 0.0};
  nn::Network<float> net(cfg, 580);
  std::mt19937_64 rng(3);
  net.init(rng);

  nn::Seq<float> x(21);
  std::normal_distribution<float> g(0.f, 1.f);
  std::vector<int> targets;
  for (auto& m : x) {
    m.resize(64, 580);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  }
  for (int i = 0; i < 64; ++i) targets.push_back(i % 8);

  for (auto _ : state) {
    net.zero_grads();
    auto r = nn::cross_entropy(net.forward(x, true, rng), targets);
    net.backward(r.dlogits);
    benchmark::DoNotOptimize(r.loss);
  }
}
BENCHMARK(BM_TrainStep);

BENCHMARK_MAIN();
