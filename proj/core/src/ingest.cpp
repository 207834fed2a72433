#include "har/pipeline/ingest.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace har::pipeline {

namespace {

namespace fs = std::filesystem;

constexpr std::array<const char*, 10> kChannelFiles = {
    "gyr_x.txt", "gyr_y.txt", "gyr_z.txt", "acc_x.txt", "acc_y.txt",
    "acc_z.txt", "mag_x.txt", "mag_y.txt", "mag_z.txt", "pressure.txt"};
constexpr std::array<const char*, 4> kOriFiles = {"ori_w.txt", "ori_x.txt",
                                                  "ori_y.txt", "ori_z.txt"};

std::vector<std::vector<double>> read_matrix(const fs::path& path,
                                             std::size_t expected_cols) {
  std::ifstream f(path);
  if (!f) throw ChannelCountMismatch("missing channel file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row_idx = 0;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (expected_cols != 0 && row.size() != expected_cols)
      throw RaggedMatrix(path.filename().string() + " row " +
                         std::to_string(row_idx) + " has " +
                         std::to_string(row.size()) + " columns, expected " +
                         std::to_string(expected_cols));
    rows.push_back(std::move(row));
    ++row_idx;
  }
  return rows;
}

Activity majority_activity(const std::vector<double>& frame_labels) {
  std::array<int, kNumActivities> counts{};
  for (double v : frame_labels)
    ++counts[static_cast<int>(activity_from_id(static_cast<int>(v)))];
  int best = 0;
  for (int c = 1; c < kNumActivities; ++c)
    if (counts[c] > counts[best]) best = c;
  return static_cast<Activity>(best);
}

void write_matrix(const fs::path& path,
                  const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", row[i]);
      if (i) f << ' ';
      f << buf;
    }
    f << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace

RawDataset ingest(const std::string& dir) {
  const fs::path base(dir);
  std::array<std::vector<std::vector<double>>, 10> chans;
  for (std::size_t c = 0; c < kChannelFiles.size(); ++c)
    chans[c] = read_matrix(base / kChannelFiles[c], sensor::kFramesPerSample);
  std::array<std::vector<std::vector<double>>, 4> ori;
  for (std::size_t c = 0; c < kOriFiles.size(); ++c)
    ori[c] = read_matrix(base / kOriFiles[c], sensor::kFramesPerSample);
  const auto labels =
      read_matrix(base / "label.txt", sensor::kFramesPerSample);

  const std::size_t n = labels.size();
  for (std::size_t c = 0; c < chans.size(); ++c)
    if (chans[c].size() != n)
      throw ChannelCountMismatch(std::string(kChannelFiles[c]) + " has " +
                                 std::to_string(chans[c].size()) +
                                 " rows, label.txt has " + std::to_string(n));
  for (std::size_t c = 0; c < ori.size(); ++c)
    if (ori[c].size() != n)
      throw ChannelCountMismatch(std::string(kOriFiles[c]) + " row count " +
                                 "differs from label.txt");

  std::vector<int> locations(n, 1);
  if (fs::exists(base / "location.txt")) {
    const auto loc = read_matrix(base / "location.txt", 1);
    if (loc.size() != n)
      throw ChannelCountMismatch("location.txt row count differs from labels");
    for (std::size_t i = 0; i < n; ++i)
      locations[i] = static_cast<int>(loc[i][0]);
  }

  RawDataset out;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sensor::RawSample& s = out.samples[i];
    s.activity = majority_activity(labels[i]);
    s.location = location_from_id(locations[i]);
    s.frames.resize(sensor::kFramesPerSample);
    for (int t = 0; t < sensor::kFramesPerSample; ++t) {
      sensor::RawFrame& fr = s.frames[t];
      fr.gyro = {chans[0][i][t], chans[1][i][t], chans[2][i][t]};
      fr.accel = {chans[3][i][t], chans[4][i][t], chans[5][i][t]};
      fr.mag = {chans[6][i][t], chans[7][i][t], chans[8][i][t]};
      fr.pressure = chans[9][i][t];
      fr.orientation = {ori[0][i][t], ori[1][i][t], ori[2][i][t],
                        ori[3][i][t]};
    }
  }
  return out;
}

void write_dataset(const RawDataset& ds, const std::string& dir) {
  const fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);

  const std::size_t n = ds.samples.size();
  auto channel = [&](auto getter) {
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].resize(sensor::kFramesPerSample);
      for (int t = 0; t < sensor::kFramesPerSample; ++t)
        rows[i][t] = getter(ds.samples[i].frames[t]);
    }
    return rows;
  };

  using RF = sensor::RawFrame;
  write_matrix(base / "gyr_x.txt", channel([](const RF& f) { return f.gyro.x(); }));
  write_matrix(base / "gyr_y.txt", channel([](const RF& f) { return f.gyro.y(); }));
  write_matrix(base / "gyr_z.txt", channel([](const RF& f) { return f.gyro.z(); }));
  write_matrix(base / "acc_x.txt", channel([](const RF& f) { return f.accel.x(); }));
  write_matrix(base / "acc_y.txt", channel([](const RF& f) { return f.accel.y(); }));
  write_matrix(base / "acc_z.txt", channel([](const RF& f) { return f.accel.z(); }));
  write_matrix(base / "mag_x.txt", channel([](const RF& f) { return f.mag.x(); }));
  write_matrix(base / "mag_y.txt", channel([](const RF& f) { return f.mag.y(); }));
  write_matrix(base / "mag_z.txt", channel([](const RF& f) { return f.mag.z(); }));
  write_matrix(base / "pressure.txt", channel([](const RF& f) { return f.pressure; }));
  write_matrix(base / "ori_w.txt", channel([](const RF& f) { return f.orientation.w; }));
  write_matrix(base / "ori_x.txt", channel([](const RF& f) { return f.orientation.x; }));
  write_matrix(base / "ori_y.txt", channel([](const RF& f) { return f.orientation.y; }));
  write_matrix(base / "ori_z.txt", channel([](const RF& f) { return f.orientation.z; }));

  std::vector<std::vector<double>> labels(n), locations(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i].assign(sensor::kFramesPerSample,
                     static_cast<double>(to_id(ds.samples[i].activity)));
    locations[i] = {static_cast<double>(to_id(ds.samples[i].location))};
  }
  write_matrix(base / "label.txt", labels);
  write_matrix(base / "location.txt", locations);
}

}  // namespace har::pipeline
