#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "har/fft.hpp"
#include "har/pipeline/ingest.hpp"
#include "har/pipeline/location.hpp"
#include "har/pipeline/synth.hpp"
#include "har/pipeline/train.hpp"
#include "har/pipeline/transfer.hpp"

using namespace har;
using namespace har::pipeline;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("har_pipe_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SyntheticSpec tiny_spec(int per_class = 2) {
  SyntheticSpec spec;
  spec.samples_per_class = per_class;
  spec.noise_level = 0.05;
  spec.seed = 99;
  return spec;
}

}  // namespace

TEST_CASE("synthesize is seed-deterministic and balanced") {
  const RawDataset a = synthesize(tiny_spec(3));
  const RawDataset b = synthesize(tiny_spec(3));
  REQUIRE(a.samples.size() == 24);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].activity == b.samples[i].activity);
    for (int t = 0; t < sensor::kFramesPerSample; t += 100) {
      CHECK(a.samples[i].frames[t].accel == b.samples[i].frames[t].accel);
      CHECK(a.samples[i].frames[t].pressure == b.samples[i].frames[t].pressure);
    }
  }
  std::array<int, kNumActivities> counts{};
  for (const auto& s : a.samples) ++counts[static_cast<int>(s.activity)];
  for (int c : counts) CHECK(c == 3);
}

TEST_CASE("synthesized class peaks at its base frequency after derotation") {
  SyntheticSpec spec = tiny_spec(1);
  spec.noise_level = 0.0;
  const RawDataset ds = synthesize(spec);
  for (int c = 0; c < kNumActivities; ++c) {
    const auto d = sensor::preprocess_sample(ds.samples[c]);
    // gyro x channel of the first 100-frame window
    std::vector<double> w(100);
    for (int t = 0; t < 100; ++t) w[t] = d.frames[t].gyro.x();
    const auto mag = features::fft_amplitude(w);
    int peak = 1;
    for (int k = 2; k < 50; ++k)
      if (mag[k] > mag[peak]) peak = k;
    // Bin resolution is 1 Hz on a 1 s window at 100 Hz; the winner must be a
    // bin adjacent to the base frequency or one of its harmonics.
    bool explained = false;
    const double f0 = spec.classes[c].base_freq_hz;
    for (std::size_t h = 0; h < spec.classes[c].harmonic_amps.size(); ++h) {
      const double f = f0 * (h + 1);
      if (std::abs(peak - f) <= 1.0) explained = true;
    }
    CHECK(explained);
  }
}

TEST_CASE("bad synthetic frequency is rejected") {
  SyntheticSpec spec = tiny_spec();
  spec.classes[3].base_freq_hz = 30.0;  // 2 harmonics reach 60 Hz
  CHECK_THROWS_AS(synthesize(spec), BadSpec);
}

TEST_CASE("write_dataset then ingest round-trips samples") {
  TempDir tmp;
  const RawDataset original = synthesize(tiny_spec(2));
  write_dataset(original, tmp.path.string());

  for (const char* name :
       {"gyr_x.txt", "acc_z.txt", "mag_y.txt", "pressure.txt", "ori_w.txt",
        "label.txt", "location.txt"})
    CHECK(fs::exists(tmp.path / name));

  const RawDataset loaded = ingest(tmp.path.string());
  REQUIRE(loaded.samples.size() == original.samples.size());
  for (std::size_t i = 0; i < loaded.samples.size(); ++i) {
    CHECK(loaded.samples[i].activity == original.samples[i].activity);
    CHECK(loaded.samples[i].location == original.samples[i].location);
    for (int t = 0; t < sensor::kFramesPerSample; t += 123) {
      CHECK((loaded.samples[i].frames[t].accel -
             original.samples[i].frames[t].accel)
                .norm() < 1e-6);
    }
  }
}

TEST_CASE("ragged channel row is reported with its index") {
  TempDir tmp;
  write_dataset(synthesize(tiny_spec(1)), tmp.path.string());
  // Append a short row to one channel.
  std::ofstream f(tmp.path / "gyr_y.txt", std::ios::app);
  f << "1 2 3\n";
  f.close();
  try {
    ingest(tmp.path.string());
    FAIL("expected RaggedMatrix");
  } catch (const RaggedMatrix& e) {
    CHECK(std::string(e.what()).find("gyr_y") != std::string::npos);
    CHECK(std::string(e.what()).find("8") != std::string::npos);  // row index
  }
}

TEST_CASE("missing channel file raises ChannelCountMismatch") {
  TempDir tmp;
  write_dataset(synthesize(tiny_spec(1)), tmp.path.string());
  fs::remove(tmp.path / "mag_z.txt");
  CHECK_THROWS_AS(ingest(tmp.path.string()), ChannelCountMismatch);
}

TEST_CASE("per-frame labels are majority voted") {
  TempDir tmp;
  write_dataset(synthesize(tiny_spec(1)), tmp.path.string());
  // Rewrite label row 0 as 300 frames of id 1 and 200 frames of id 2.
  std::vector<std::string> rows;
  {
    std::ifstream in(tmp.path / "label.txt");
    std::string line;
    while (std::getline(in, line)) rows.push_back(line);
  }
  std::string mixed;
  for (int t = 0; t < 500; ++t) mixed += (t < 300 ? "1 " : "2 ");
  rows[0] = mixed;
  {
    std::ofstream out(tmp.path / "label.txt", std::ios::trunc);
    for (const auto& r : rows) out << r << "\n";
  }
  const RawDataset ds = ingest(tmp.path.string());
  CHECK(ds.samples[0].activity == Activity::Still);  // id 1
}

TEST_CASE("featurize preserves order and labels; cache round-trips") {
  TempDir tmp;
  const RawDataset raw = synthesize(tiny_spec(2));
  const FeatureDataset ds =
      featurize(raw, features::WindowSpec{}, features::FeatureConfig{});
  REQUIRE(ds.size() == raw.samples.size());
  CHECK(ds.feature_dim == 580);
  CHECK(ds.steps == 21);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(ds.samples[i].activity == raw.samples[i].activity);

  // Multi-threaded featurization matches single-threaded.
  const FeatureDataset ds4 =
      featurize(raw, features::WindowSpec{}, features::FeatureConfig{}, 4);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(ds.samples[i].values == ds4.samples[i].values);

  const std::string cache = (tmp.path / "features.bin").string();
  save_features(ds, cache);
  const FeatureDataset loaded = load_features(cache);
  REQUIRE(loaded.size() == ds.size());
  CHECK(loaded.feature_dim == ds.feature_dim);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(loaded.samples[i].values == ds.samples[i].values);
    CHECK(loaded.samples[i].activity == ds.samples[i].activity);
    CHECK(loaded.samples[i].location == ds.samples[i].location);
  }
}

TEST_CASE("normalization stats give zero-mean unit-std features") {
  const RawDataset raw = synthesize(tiny_spec(3));
  FeatureDataset ds =
      featurize(raw, features::WindowSpec{}, features::FeatureConfig{});
  const nn::NormStats stats = compute_norm_stats(ds);
  apply_norm(ds, stats);
  const nn::NormStats after = compute_norm_stats(ds);
  CHECK(after.mean.cwiseAbs().maxCoeff() < 1e-3f);
  for (int i = 0; i < after.std.size(); ++i)
    if (stats.std[i] > 1e-5f)  // constant features stay constant
      CHECK(after.std[i] == doctest::Approx(1.0f).epsilon(1e-2));
}

TEST_CASE("stratified split halves every class, variants are complements") {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < (c == 1 ? 7 : 10); ++i) labels.push_back(c);

  const TransferSplit a = stratified_split(labels, 3, TransferVariant::A);
  const TransferSplit b = stratified_split(labels, 3, TransferVariant::B);

  auto count_class = [&](const std::vector<std::size_t>& idx, int c) {
    int n = 0;
    for (std::size_t i : idx) n += labels[i] == c;
    return n;
  };
  CHECK(count_class(a.transfer_train, 0) == 5);
  CHECK(count_class(a.transfer_val, 0) == 5);
  CHECK(count_class(a.transfer_train, 1) == 4);  // odd count: extra to train
  CHECK(count_class(a.transfer_val, 1) == 3);
  CHECK(count_class(b.transfer_train, 1) == 3);
  CHECK(count_class(b.transfer_val, 1) == 4);

  // A-train == B-val and vice versa; union covers everything exactly once.
  std::vector<std::size_t> a_sorted = a.transfer_train;
  std::vector<std::size_t> b_sorted = b.transfer_val;
  std::sort(a_sorted.begin(), a_sorted.end());
  std::sort(b_sorted.begin(), b_sorted.end());
  CHECK(a_sorted == b_sorted);
  std::vector<std::size_t> all = a.transfer_train;
  all.insert(all.end(), a.transfer_val.begin(), a.transfer_val.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
}

TEST_CASE("stratified split rejects classes below two samples") {
  std::vector<int> labels = {0, 0, 1};
  CHECK_THROWS_AS(stratified_split(labels, 2, TransferVariant::A),
                  ClassTooSmall);
}

TEST_CASE("fusion averages softmax outputs and is symmetric") {
  // Two tiny plain nets with crafted classifier outputs would still pass
  // through the recurrent stack; check the arithmetic on the public fuse
  // surface with identical models instead, plus the documented example on
  // raw probability rows.
  nn::Mat<float> pa(1, 2), pb(1, 2);
  pa << 0.9f, 0.1f;
  pb << 0.2f, 0.8f;
  const nn::Mat<float> fused = 0.5f * (pa + pb);
  CHECK(fused(0, 0) == doctest::Approx(0.55f));
  CHECK(fused(0, 1) == doctest::Approx(0.45f));
  const auto pred = argmax_rows(fused);
  CHECK(pred[0] == 0);

  // Symmetric by construction of the mean.
  const nn::Mat<float> swapped = 0.5f * (pb + pa);
  CHECK(fused == swapped);
}

TEST_CASE("identical transfer models fuse to their own predictions") {
  SyntheticSpec spec = tiny_spec(2);
  const RawDataset raw = synthesize(spec);
  FeatureDataset ds =
      featurize(raw, features::WindowSpec{}, features::FeatureConfig{});
  apply_norm(ds, compute_norm_stats(ds));

  nn::NetworkConfig cfg = location_network_config(8);
  cfg.n_classes = kNumActivities;
  nn::Network<float> net(cfg, ds.feature_dim);
  std::mt19937_64 rng(12);
  net.init(rng);
  nn::Network<float> copy = clone_network(net);

  const auto own = argmax_rows(predict_probs(net, ds));
  const auto fused = fuse_predictions(net, copy, ds);
  CHECK(own == fused);
}

TEST_CASE("location majority vote and tie-break") {
  // Majority over {A, A, B} is A; the 50/50 tie goes to BagHand.
  // Exercised through the public decision type on synthetic predictions is
  // structural; here the vote rule itself:
  std::vector<LocationGroup> votes = {LocationGroup::BagHand,
                                      LocationGroup::BagHand,
                                      LocationGroup::HipsTorso};
  std::size_t bag = 0;
  for (auto g : votes) bag += g == LocationGroup::BagHand;
  CHECK(2 * bag >= votes.size());

  // End-to-end: an untrained 2-class net still produces a deterministic
  // majority decision.
  const RawDataset raw = synthesize(tiny_spec(1));
  FeatureDataset ds =
      featurize(raw, features::WindowSpec{}, features::FeatureConfig{});
  apply_norm(ds, compute_norm_stats(ds));
  nn::Network<float> net(location_network_config(8), ds.feature_dim);
  std::mt19937_64 rng(13);
  net.init(rng);
  const LocationDecision d1 = recognize_location_group(net, ds);
  const LocationDecision d2 = recognize_location_group(net, ds);
  CHECK(d1.per_sample == d2.per_sample);
  CHECK(d1.majority == d2.majority);
}

TEST_CASE("prediction order follows input order") {
  const RawDataset raw = synthesize(tiny_spec(2));
  FeatureDataset ds =
      featurize(raw, features::WindowSpec{}, features::FeatureConfig{});
  apply_norm(ds, compute_norm_stats(ds));
  nn::NetworkConfig cfg = location_network_config(8);
  cfg.n_classes = kNumActivities;
  nn::Network<float> net(cfg, ds.feature_dim);
  std::mt19937_64 rng(14);
  net.init(rng);

  const auto all = predict_probs(net, ds, 5);  // odd batch split
  const auto all_again = predict_probs(net, ds, 16);
  CHECK((all - all_again).cwiseAbs().maxCoeff() < 1e-5f);
}
