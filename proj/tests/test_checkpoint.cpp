#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "grad_check.hpp"
#include "har/nn/checkpoint.hpp"

using namespace har;
using namespace har::nn;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("har_ckpt_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

NetworkConfig tiny_cfg() {
  NetworkConfig cfg;
  cfg.architecture = ArchKind::Dense;
  cfg.block_layers = {2};
  cfg.growth_rate = 3;
  cfg.hidden_width = 6;
  cfg.n_classes = 4;
  cfg.dropout = {0.0, 0.0, 0.0, 0.0};
  return cfg;
}

Seq<float> fixed_batch(int dim) {
  std::mt19937_64 rng(5);
  auto xd = gradcheck::random_seq(21, 3, dim, rng);
  Seq<float> x(xd.size());
  for (std::size_t t = 0; t < xd.size(); ++t) x[t] = xd[t].cast<float>();
  return x;
}

}  // namespace

TEST_CASE("checkpoint round-trip reproduces forward outputs bit-exactly") {
  TempDir tmp;
  const std::string path = (tmp.path / "model.bin").string();

  Network<float> net(tiny_cfg(), 5);
  std::mt19937_64 rng(3);
  net.init(rng);
  NormStats norm;
  norm.mean = Eigen::VectorXf::LinSpaced(5, -1.f, 1.f);
  norm.std = Eigen::VectorXf::Constant(5, 2.f);

  save_checkpoint(net, norm, nullptr, path);
  LoadedCheckpoint loaded = load_checkpoint(path);

  CHECK(loaded.net.config() == net.config());
  CHECK(loaded.norm.mean == norm.mean);
  CHECK(loaded.norm.std == norm.std);
  CHECK(!loaded.opt.has_value());

  const auto x = fixed_batch(5);
  const Mat<float> a = net.forward(x, false, rng);
  const Mat<float> b = loaded.net.forward(x, false, rng);
  CHECK(a == b);
}

TEST_CASE("optimizer moments survive the round trip") {
  TempDir tmp;
  const std::string path = (tmp.path / "model.bin").string();

  Network<float> net(tiny_cfg(), 5);
  std::mt19937_64 rng(4);
  net.init(rng);
  Adam<float> adam;
  const auto x = fixed_batch(5);
  net.zero_grads();
  auto r = cross_entropy(net.forward(x, true, rng), std::vector<int>{0, 1, 2});
  net.backward(r.dlogits);
  auto params = net.parameters();
  adam.step(params, 1e-3f);

  NormStats norm;
  norm.mean = Eigen::VectorXf::Zero(5);
  norm.std = Eigen::VectorXf::Ones(5);
  save_checkpoint(net, norm, &adam, path);
  LoadedCheckpoint loaded = load_checkpoint(path);
  REQUIRE(loaded.opt.has_value());
  CHECK(loaded.opt->step_count() == 1);
  REQUIRE(loaded.opt->first_moments().size() == adam.first_moments().size());
  for (std::size_t i = 0; i < adam.first_moments().size(); ++i) {
    CHECK(loaded.opt->first_moments()[i] == adam.first_moments()[i]);
    CHECK(loaded.opt->second_moments()[i] == adam.second_moments()[i]);
  }
}

TEST_CASE("truncated file is rejected") {
  TempDir tmp;
  const std::string path = (tmp.path / "model.bin").string();
  Network<float> net(tiny_cfg(), 5);
  std::mt19937_64 rng(6);
  net.init(rng);
  NormStats norm{Eigen::VectorXf::Zero(5), Eigen::VectorXf::Ones(5)};
  save_checkpoint(net, norm, nullptr, path);

  const auto size = fs::file_size(path);
  fs::resize_file(path, size / 2);
  CHECK_THROWS_AS(load_checkpoint(path), CorruptCheckpoint);
}

TEST_CASE("flipped byte is rejected by the checksum") {
  TempDir tmp;
  const std::string path = (tmp.path / "model.bin").string();
  Network<float> net(tiny_cfg(), 5);
  std::mt19937_64 rng(7);
  net.init(rng);
  NormStats norm{Eigen::VectorXf::Zero(5), Eigen::VectorXf::Ones(5)};
  save_checkpoint(net, norm, nullptr, path);

  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(64);
  char c;
  f.seekg(64);
  f.get(c);
  f.seekp(64);
  f.put(static_cast<char>(c ^ 0x5A));
  f.close();
  CHECK_THROWS_AS(load_checkpoint(path), CorruptCheckpoint);
}

TEST_CASE("architecture mismatch reports a config diff") {
  TempDir tmp;
  const std::string path = (tmp.path / "model.bin").string();
  Network<float> net(tiny_cfg(), 5);
  std::mt19937_64 rng(8);
  net.init(rng);
  NormStats norm{Eigen::VectorXf::Zero(5), Eigen::VectorXf::Ones(5)};
  save_checkpoint(net, norm, nullptr, path);

  // A checkpoint always reconstructs its own stored config, so tensor-level
  // mismatches only appear with a corrupted config block; patch the stored
  // growth rate and fix up the checksum path by rewriting the file fully.
  LoadedCheckpoint ok = load_checkpoint(path);
  CHECK(ok.net.config().growth_rate == 3);

  // Tamper without fixing the checksum: rejected.
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(13);  // inside the config block
  f.put(static_cast<char>(9));
  f.close();
  CHECK_THROWS_AS(load_checkpoint(path), CorruptCheckpoint);
}
