#include "har/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "har/fft.hpp"

namespace har::features {

int feature_width(const WindowSpec& spec, const FeatureConfig& cfg) {
  int per_channel = 0;
  if (cfg.include_time_stats) per_channel += 6;
  if (cfg.include_fft_spectrum) per_channel += spec.window_len / 2;
  if (cfg.include_fft_stats) per_channel += 2;
  if (per_channel == 0)
    throw BadConfig("at least one feature family must be enabled");
  int f = sensor::kChannelsPerFrame * per_channel;
  return cfg.augment_temporal_diff ? 2 * f : f;
}

std::vector<Eigen::MatrixXd> segment(const sensor::DerotatedSample& sample,
                                     const WindowSpec& spec) {
  const int n = static_cast<int>(sample.frames.size());
  if (spec.stride < 1 || spec.window_len < 2 || spec.n_windows < 1)
    throw SpecMismatch("window spec out of range");
  if ((spec.n_windows - 1) * spec.stride + spec.window_len != n)
    throw SpecMismatch("spec covers " +
                       std::to_string((spec.n_windows - 1) * spec.stride +
                                      spec.window_len) +
                       " frames, sample has " + std::to_string(n));

  std::vector<Eigen::MatrixXd> windows;
  windows.reserve(spec.n_windows);
  for (int i = 0; i < spec.n_windows; ++i) {
    Eigen::MatrixXd w(spec.window_len, sensor::kChannelsPerFrame);
    for (int t = 0; t < spec.window_len; ++t) {
      const auto& f = sample.frames[i * spec.stride + t];
      w(t, 0) = f.gyro.x();
      w(t, 1) = f.gyro.y();
      w(t, 2) = f.gyro.z();
      w(t, 3) = f.accel_ned.x();
      w(t, 4) = f.accel_ned.y();
      w(t, 5) = f.accel_ned.z();
      w(t, 6) = f.mag_ned.x();
      w(t, 7) = f.mag_ned.y();
      w(t, 8) = f.mag_ned.z();
      w(t, 9) = f.pressure;
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

std::array<double, 6> time_stats(const Eigen::VectorXd& window) {
  const int n = static_cast<int>(window.size());
  const double mean = window.mean();
  int above = 0, below = 0;
  double var = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = window[i];
    if (v > mean) ++above;
    if (v < mean) ++below;
    var += (v - mean) * (v - mean);
  }
  var /= n;
  return {mean, static_cast<double>(above), static_cast<double>(below),
          std::sqrt(var), window.minCoeff(), window.maxCoeff()};
}

std::vector<double> normalize_pressure(const std::vector<double>& pressure,
                                       double epsilon) {
  const int n = static_cast<int>(pressure.size());
  double mean = 0.0;
  for (double p : pressure) mean += p;
  mean /= n;
  double var = 0.0;
  for (double p : pressure) var += (p - mean) * (p - mean);
  const double sd = std::max(std::sqrt(var / n), epsilon);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (pressure[i] - mean) / sd;
  return out;
}

std::array<double, 2> fft_stats(const std::vector<double>& spectrum) {
  double mean = 0.0;
  for (double m : spectrum) mean += m;
  mean /= static_cast<double>(spectrum.size());
  double var = 0.0;
  for (double m : spectrum) var += (m - mean) * (m - mean);
  return {mean, std::sqrt(var / static_cast<double>(spectrum.size()))};
}

FeatureSequence extract_features(const sensor::DerotatedSample& sample,
                                 const WindowSpec& spec,
                                 const FeatureConfig& cfg) {
  // Pressure is normalized over the full sample before windowing.
  sensor::DerotatedSample normed = sample;
  {
    std::vector<double> p(sample.frames.size());
    for (std::size_t i = 0; i < sample.frames.size(); ++i)
      p[i] = sample.frames[i].pressure;
    const std::vector<double> pn = normalize_pressure(p, cfg.pressure_epsilon);
    for (std::size_t i = 0; i < normed.frames.size(); ++i)
      normed.frames[i].pressure = pn[i];
  }

  const int base_f = [&] {
    FeatureConfig no_aug = cfg;
    no_aug.augment_temporal_diff = false;
    return feature_width(spec, no_aug);
  }();
  const int total_f = cfg.augment_temporal_diff ? 2 * base_f : base_f;

  const std::vector<Eigen::MatrixXd> windows = segment(normed, spec);

  FeatureSequence out;
  out.activity = sample.activity;
  out.location = sample.location;
  out.values.resize(spec.n_windows, total_f);

  for (int i = 0; i < spec.n_windows; ++i) {
    int col = 0;
    for (int c = 0; c < sensor::kChannelsPerFrame; ++c) {
      const Eigen::VectorXd ch = windows[i].col(c);
      if (cfg.include_time_stats) {
        const auto ts = time_stats(ch);
        for (double v : ts) out.values(i, col++) = static_cast<float>(v);
      }
      std::vector<double> spectrum;
      if (cfg.include_fft_spectrum || cfg.include_fft_stats) {
        std::vector<double> w(ch.data(), ch.data() + ch.size());
        spectrum = fft_amplitude(w);
      }
      if (cfg.include_fft_spectrum)
        for (double v : spectrum) out.values(i, col++) = static_cast<float>(v);
      if (cfg.include_fft_stats) {
        const auto fs = fft_stats(spectrum);
        out.values(i, col++) = static_cast<float>(fs[0]);
        out.values(i, col++) = static_cast<float>(fs[1]);
      }
    }
  }

  if (cfg.augment_temporal_diff) {
    // Step-wise first difference; step 0 gets a zero vector.
    out.values.block(0, base_f, 1, base_f).setZero();
    for (int i = spec.n_windows - 1; i >= 1; --i)
      out.values.block(i, base_f, 1, base_f) =
          out.values.block(i, 0, 1, base_f) -
          out.values.block(i - 1, 0, 1, base_f);
  }
  return out;
}

}  // namespace har::features
