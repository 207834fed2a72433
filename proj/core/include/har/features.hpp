#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "har/errors.hpp"
#include "har/sensor.hpp"

namespace har::features {

struct WindowSpec {
  int window_len = 100;
  int n_windows = 21;
  int stride = 20;
};

struct FeatureConfig {
  bool include_time_stats = true;
  bool include_fft_spectrum = true;
  bool include_fft_stats = true;
  bool augment_temporal_diff = false;
  double pressure_epsilon = 1e-6;
};

// One sample as seen by the network: n_windows time steps, F features each.
struct FeatureSequence {
  Eigen::MatrixXf values;  // steps x F
  Activity activity = Activity::Still;
  Location location = Location::Bag;
};

// Per-step feature width for a config, before augmentation doubling.
int feature_width(const WindowSpec& spec, const FeatureConfig& cfg);

// Window i covers frames [i*stride, i*stride + window_len).
// Each window is window_len x 10 channels, ordered
// (gyro xyz, accel_ned xyz, mag_ned xyz, pressure).
std::vector<Eigen::MatrixXd> segment(const sensor::DerotatedSample& sample,
                                     const WindowSpec& spec);

// [mean, #above mean (strict), #below mean (strict), population std, min, max]
std::array<double, 6> time_stats(const Eigen::VectorXd& window);

// (p - mean) / max(std, epsilon), over the whole sample before windowing.
std::vector<double> normalize_pressure(const std::vector<double>& pressure,
                                       double epsilon);

// [mean, population std] of a magnitude spectrum.
std::array<double, 2> fft_stats(const std::vector<double>& spectrum);

FeatureSequence extract_features(const sensor::DerotatedSample& sample,
                                 const WindowSpec& spec,
                                 const FeatureConfig& cfg);

}  // namespace har::features
