#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "har/pipeline/dataset.hpp"

namespace har::pipeline {

// Class-specific periodic signal recipe. Harmonic h has frequency
// base_freq_hz * (h + 1) and amplitude harmonic_amps[h].
struct ClassRecipe {
  double base_freq_hz = 2.0;
  std::vector<double> harmonic_amps = {1.0};
};

// Desk-scale stand-in for a real recording campaign: each class's channels
// are sums of class-specific sinusoids plus Gaussian noise, with per-user
// amplitude/frequency perturbations and per-location channel gains.
struct SyntheticSpec {
  std::array<ClassRecipe, kNumActivities> classes;
  int samples_per_class = 50;
  double noise_level = 0.1;
  // Multiplicative perturbations modelling a different user, e.g. 0.15
  // scales amplitudes by 1.15.
  double user_amp_perturb = 0.0;
  double user_freq_perturb = 0.0;
  // Locations cycled over the generated samples.
  std::vector<Location> locations = {Location::Bag, Location::Hips,
                                     Location::Torso, Location::Hand};
  // Class-label imbalance knob; 1.0 keeps classes balanced, values in (0,1)
  // shrink class k to ceil(samples_per_class * imbalance^k).
  double imbalance = 1.0;
  std::uint64_t seed = 0;

  SyntheticSpec();
};

RawDataset synthesize(const SyntheticSpec& spec);

// Stable per-stage seed derivation from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage);

}  // namespace har::pipeline
