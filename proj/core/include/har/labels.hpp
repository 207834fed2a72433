#pragma once

#include <array>
#include <string>
#include <string_view>

#include "har/errors.hpp"

namespace har {

enum class Activity : int {
  Still = 0, Walk, Run, Bike, Car, Bus, Train, Subway
};
inline constexpr int kNumActivities = 8;

enum class Location : int { Bag = 0, Hips, Torso, Hand };
inline constexpr int kNumLocations = 4;

// Coarse placement groups used by location recognition.
enum class LocationGroup : int { BagHand = 0, HipsTorso };
inline constexpr int kNumLocationGroups = 2;

inline std::string_view to_string(Activity a) {
  static constexpr std::array<std::string_view, 8> names = {
      "Still", "Walk", "Run", "Bike", "Car", "Bus", "Train", "Subway"};
  return names[static_cast<int>(a)];
}

inline std::string_view to_string(Location l) {
  static constexpr std::array<std::string_view, 4> names = {"Bag", "Hips",
                                                            "Torso", "Hand"};
  return names[static_cast<int>(l)];
}

inline std::string_view to_string(LocationGroup g) {
  return g == LocationGroup::BagHand ? "BagHand" : "HipsTorso";
}

inline LocationGroup group_of(Location l) {
  return (l == Location::Bag || l == Location::Hand) ? LocationGroup::BagHand
                                                     : LocationGroup::HipsTorso;
}

// File encoding uses 1-based ids, matching common dataset releases.
inline Activity activity_from_id(int id) {
  if (id < 1 || id > kNumActivities)
    throw UnknownLabel("activity id " + std::to_string(id) +
                       " outside [1," + std::to_string(kNumActivities) + "]");
  return static_cast<Activity>(id - 1);
}

inline Location location_from_id(int id) {
  if (id < 1 || id > kNumLocations)
    throw UnknownLabel("location id " + std::to_string(id) + " outside [1,4]");
  return static_cast<Location>(id - 1);
}

inline int to_id(Activity a) { return static_cast<int>(a) + 1; }
inline int to_id(Location l) { return static_cast<int>(l) + 1; }

}  // namespace har
