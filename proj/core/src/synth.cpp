#include "har/pipeline/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace har::pipeline {

namespace {

constexpr double kSampleRateHz = 100.0;
constexpr double kNyquistHz = 50.0;

struct ChannelGains {
  double accel, gyro, mag, pressure_drift;
};

// Placement changes how strongly each sensor picks up the motion. The two
// groups {Bag, Hand} and {Hips, Torso} get clearly distinct profiles.
ChannelGains gains_for(Location loc) {
  switch (loc) {
    case Location::Bag:   return {1.5, 0.75, 0.65, 1.0};
    case Location::Hand:  return {1.65, 0.85, 0.72, 1.1};
    case Location::Hips:  return {0.7, 1.35, 1.45, 0.9};
    case Location::Torso: return {0.62, 1.25, 1.55, 0.95};
  }
  return {1, 1, 1, 1};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
  // FNV-1a over the stage tag, folded into the master seed.
  std::uint64_t h = 14695981039346656037ull ^ master;
  for (char c : stage) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  // splitmix64 finalizer
  h += 0x9E3779B97f4A7C15ull;
  h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
  h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
  return h ^ (h >> 31);
}

SyntheticSpec::SyntheticSpec() {
  // Distinct spectral signatures per activity, all below Nyquist including
  // harmonics.
  const std::array<double, kNumActivities> base = {0.8, 1.8, 3.0, 4.5,
                                                   7.0, 10.0, 14.0, 20.0};
  for (int c = 0; c < kNumActivities; ++c) {
    classes[c].base_freq_hz = base[c];
    classes[c].harmonic_amps = {1.0, 0.5 + 0.05 * c};
  }
}

RawDataset synthesize(const SyntheticSpec& spec) {
  for (const auto& rc : spec.classes) {
    const double top =
        rc.base_freq_hz * static_cast<double>(rc.harmonic_amps.size());
    if (!(rc.base_freq_hz > 0.0) || top >= kNyquistHz)
      throw BadSpec("class frequency content reaches " + std::to_string(top) +
                    " Hz, must stay below " + std::to_string(kNyquistHz));
  }
  if (spec.samples_per_class < 1) throw BadSpec("samples_per_class < 1");
  if (spec.locations.empty()) throw BadSpec("locations must be nonempty");
  if (!(spec.imbalance > 0.0 && spec.imbalance <= 1.0))
    throw BadSpec("imbalance must be in (0,1]");

  std::mt19937_64 rng(derive_seed(spec.seed, "synth"));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  const double amp_mul = 1.0 + spec.user_amp_perturb;
  const double freq_mul = 1.0 + spec.user_freq_perturb;

  RawDataset out;
  int loc_cursor = 0;
  for (int c = 0; c < kNumActivities; ++c) {
    const ClassRecipe& rc = spec.classes[c];
    const int count = static_cast<int>(
        std::ceil(spec.samples_per_class * std::pow(spec.imbalance, c)));
    for (int s = 0; s < count; ++s) {
      const Location loc = spec.locations[loc_cursor++ % spec.locations.size()];
      const ChannelGains g = gains_for(loc);

      // Per-axis phases, one set per sensor.
      std::array<std::array<double, 3>, 3> ph;  // [sensor][axis]
      for (auto& sp : ph)
        for (auto& p : sp) p = phase(rng);

      // Slowly varying orientation: fixed random axis, wobbling angle.
      Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
      if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitZ();
      axis.normalize();
      const double angle0 = phase(rng);
      const double wobble = 0.4;
      const double wobble_freq = 0.2;  // Hz

      const double drift = 0.02 * (c - 3.5) * g.pressure_drift;

      sensor::RawSample sample;
      sample.activity = static_cast<Activity>(c);
      sample.location = loc;
      sample.frames.resize(sensor::kFramesPerSample);
      for (int t = 0; t < sensor::kFramesPerSample; ++t) {
        const double time = t / kSampleRateHz;

        auto tone = [&](int sensor_idx, int axis_idx, double amp_scale) {
          double v = 0.0;
          for (std::size_t h = 0; h < rc.harmonic_amps.size(); ++h) {
            const double f = rc.base_freq_hz * freq_mul * (h + 1);
            v += rc.harmonic_amps[h] *
                 std::sin(2.0 * std::numbers::pi * f * time +
                          ph[sensor_idx][axis_idx] + 0.7 * h);
          }
          return v * amp_scale * amp_mul;
        };

        const double na = spec.noise_level;
        Eigen::Vector3d accel_ned(
            tone(0, 0, 3.0 * g.accel) + 3.0 * na * gauss(rng),
            tone(0, 1, 2.5 * g.accel) + 3.0 * na * gauss(rng),
            9.81 + tone(0, 2, 2.0 * g.accel) + 3.0 * na * gauss(rng));
        Eigen::Vector3d gyro(
            tone(1, 0, 1.2 * g.gyro) + na * gauss(rng),
            tone(1, 1, 1.0 * g.gyro) + na * gauss(rng),
            tone(1, 2, 0.8 * g.gyro) + na * gauss(rng));
        Eigen::Vector3d mag_ned(
            22.0 + tone(2, 0, 8.0 * g.mag) + 5.0 * na * gauss(rng),
            5.0 + tone(2, 1, 7.0 * g.mag) + 5.0 * na * gauss(rng),
            -43.0 + tone(2, 2, 6.0 * g.mag) + 5.0 * na * gauss(rng));

        const double angle =
            angle0 + wobble * std::sin(2.0 * std::numbers::pi * wobble_freq *
                                       time);
        sensor::Quaternion q{std::cos(angle / 2),
                             axis.x() * std::sin(angle / 2),
                             axis.y() * std::sin(angle / 2),
                             axis.z() * std::sin(angle / 2)};
        const sensor::RotationMatrix R = sensor::quaternion_to_rotation(q);

        // Channels are authored in the NED frame, then rotated into the
        // body frame so preprocessing recovers them.
        sensor::RawFrame& fr = sample.frames[t];
        fr.accel = R.transpose() * accel_ned;
        fr.mag = R.transpose() * mag_ned;
        fr.gyro = gyro;
        fr.pressure = 1013.25 + drift * t / kSampleRateHz +
                      0.05 * spec.noise_level * gauss(rng);
        fr.orientation = q;
      }
      out.samples.push_back(std::move(sample));
    }
  }
  return out;
}

}  // namespace har::pipeline
