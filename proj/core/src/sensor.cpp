#include "har/sensor.hpp"

#include <cmath>
#include <string>

namespace har::sensor {

RotationMatrix quaternion_to_rotation(const Quaternion& q) {
  const double n = q.norm();
  if (!(n >= 1e-9) || !std::isfinite(n))
    throw ZeroQuaternion("quaternion norm " + std::to_string(n) +
                         " below 1e-9");
  const double w = q.w / n, x = q.x / n, y = q.y / n, z = q.z / n;

  RotationMatrix R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

Vec3 derotate(const Vec3& v, const RotationMatrix& R) { return R * v; }

DerotatedSample preprocess_sample(const RawSample& s) {
  DerotatedSample out;
  out.activity = s.activity;
  out.location = s.location;
  out.frames.reserve(s.frames.size());
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    const RawFrame& f = s.frames[i];
    RotationMatrix R;
    try {
      R = quaternion_to_rotation(f.orientation);
    } catch (const ZeroQuaternion& e) {
      throw ZeroQuaternion(std::string(e.what()) + " at frame " +
                           std::to_string(i));
    }
    out.frames.push_back({derotate(f.accel, R), f.gyro, derotate(f.mag, R),
                          f.pressure});
  }
  return out;
}

}  // namespace har::sensor
