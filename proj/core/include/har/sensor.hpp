#pragma once

#include <Eigen/Dense>
#include <vector>

#include "har/errors.hpp"
#include "har/labels.hpp"

namespace har::sensor {

using Vec3 = Eigen::Vector3d;
using RotationMatrix = Eigen::Matrix3d;

inline constexpr int kFramesPerSample = 500;  // 5 s at 100 Hz
inline constexpr int kChannelsPerFrame = 10;  // gyro 3 + accel 3 + mag 3 + pressure

struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

struct RawFrame {
  Vec3 accel;       // m/s^2, body frame
  Vec3 gyro;        // rad/s
  Vec3 mag;         // uT, body frame
  double pressure;  // hPa
  Quaternion orientation;
};

struct RawSample {
  std::vector<RawFrame> frames;  // exactly kFramesPerSample
  Activity activity = Activity::Still;
  Location location = Location::Bag;
};

struct DerotatedFrame {
  Vec3 accel_ned;
  Vec3 gyro;
  Vec3 mag_ned;
  double pressure;
};

struct DerotatedSample {
  std::vector<DerotatedFrame> frames;
  Activity activity = Activity::Still;
  Location location = Location::Bag;
};

// Builds the body-to-NED rotation matrix from an orientation quaternion.
// The quaternion is normalized first; a near-zero norm is rejected.
RotationMatrix quaternion_to_rotation(const Quaternion& q);

// R * v. R must be orthonormal; the Euclidean norm is preserved.
Vec3 derotate(const Vec3& v, const RotationMatrix& R);

// Per frame: accelerometer and magnetometer are derotated by that frame's
// quaternion, gyroscope and pressure pass through, orientation is dropped.
DerotatedSample preprocess_sample(const RawSample& s);

}  // namespace har::sensor
