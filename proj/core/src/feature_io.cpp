#include <cstdint>
#include <cstring>
#include <fstream>

#include "har/pipeline/dataset.hpp"

namespace har::pipeline {

namespace {
constexpr char kMagic[8] = {'H', 'A', 'R', 'F', 'E', 'A', 'T', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_features(const FeatureDataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); };
  f.write(kMagic, 8);
  u32(kVersion);
  u32(static_cast<std::uint32_t>(ds.samples.size()));
  u32(static_cast<std::uint32_t>(ds.steps));
  u32(static_cast<std::uint32_t>(ds.feature_dim));
  for (const auto& s : ds.samples) {
    const std::uint8_t a = static_cast<std::uint8_t>(to_id(s.activity));
    const std::uint8_t l = static_cast<std::uint8_t>(to_id(s.location));
    f.write(reinterpret_cast<const char*>(&a), 1);
    f.write(reinterpret_cast<const char*>(&l), 1);
  }
  for (const auto& s : ds.samples)
    for (int t = 0; t < s.values.rows(); ++t)
      f.write(reinterpret_cast<const char*>(
                  Eigen::RowVectorXf(s.values.row(t)).data()),
              sizeof(float) * ds.feature_dim);
  if (!f) throw IoError("write failed for " + path);
}

FeatureDataset load_features(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw CorruptCheckpoint("bad feature cache magic in " + path);
  auto u32 = [&] {
    std::uint32_t v;
    f.read(reinterpret_cast<char*>(&v), 4);
    if (!f) throw CorruptCheckpoint("truncated feature cache " + path);
    return v;
  };
  if (u32() != kVersion)
    throw CorruptCheckpoint("unsupported feature cache version");
  FeatureDataset ds;
  const std::uint32_t n = u32();
  ds.steps = static_cast<int>(u32());
  ds.feature_dim = static_cast<int>(u32());
  ds.samples.resize(n);
  for (auto& s : ds.samples) {
    std::uint8_t a, l;
    f.read(reinterpret_cast<char*>(&a), 1);
    f.read(reinterpret_cast<char*>(&l), 1);
    if (!f) throw CorruptCheckpoint("truncated label table in " + path);
    s.activity = activity_from_id(a);
    s.location = location_from_id(l);
  }
  for (auto& s : ds.samples) {
    s.values.resize(ds.steps, ds.feature_dim);
    for (int t = 0; t < ds.steps; ++t) {
      Eigen::RowVectorXf row(ds.feature_dim);
      f.read(reinterpret_cast<char*>(row.data()),
             sizeof(float) * ds.feature_dim);
      if (!f) throw CorruptCheckpoint("truncated feature body in " + path);
      s.values.row(t) = row;
    }
  }
  return ds;
}

}  // namespace har::pipeline
