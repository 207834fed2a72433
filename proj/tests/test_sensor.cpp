#include <random>

#include "doctest.h"
#include "har/sensor.hpp"

using namespace har;
using namespace har::sensor;

namespace {

Quaternion random_unit_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Quaternion q{g(rng), g(rng), g(rng), g(rng)};
  const double n = q.norm();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

RawSample constant_sample(const Eigen::Vector3d& accel, const Quaternion& q) {
  RawSample s;
  s.frames.resize(kFramesPerSample);
  for (auto& f : s.frames) {
    f.accel = accel;
    f.gyro = {0.1, 0.2, 0.3};
    f.mag = {20.0, 0.0, -40.0};
    f.pressure = 1013.0;
    f.orientation = q;
  }
  return s;
}

}  // namespace

TEST_CASE("identity quaternion gives identity rotation") {
  const RotationMatrix R = quaternion_to_rotation({1, 0, 0, 0});
  CHECK((R - RotationMatrix::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("90 degree rotation about z") {
  const RotationMatrix R =
      quaternion_to_rotation({0.7071068, 0, 0, 0.7071068});
  RotationMatrix expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((R - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("zero quaternion is rejected") {
  CHECK_THROWS_AS(quaternion_to_rotation({0, 0, 0, 0}), ZeroQuaternion);
}

TEST_CASE("unnormalized quaternion is normalized first") {
  const RotationMatrix a = quaternion_to_rotation({2, 0, 0, 0});
  CHECK((a - RotationMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("derotate by identity is a no-op") {
  const Vec3 v = derotate({1, 2, 3}, RotationMatrix::Identity());
  CHECK(v == Vec3(1, 2, 3));
}

TEST_CASE("derotate matches matrix-vector oracle") {
  const RotationMatrix R =
      quaternion_to_rotation({0.7071068, 0, 0, 0.7071068});
  const Vec3 v = derotate({1, 0, 0}, R);
  CHECK((v - Vec3(0, 1, 0)).norm() < 1e-6);
}

TEST_CASE("rotation matrices are orthonormal with unit determinant") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Quaternion q = random_unit_quaternion(rng);
    const RotationMatrix R = quaternion_to_rotation(q);
    CHECK((R * R.transpose() - RotationMatrix::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-6);
    CHECK(std::abs(R.determinant() - 1.0) <= 1e-6);
  }
}

TEST_CASE("derotation preserves norm") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const RotationMatrix R =
        quaternion_to_rotation(random_unit_quaternion(rng));
    const Vec3 v(g(rng), g(rng), g(rng));
    const Vec3 w = derotate(v, R);
    CHECK(std::abs(w.norm() - v.norm()) <= 1e-6 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("q and -q give the same rotation") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Quaternion q = random_unit_quaternion(rng);
    const Quaternion neg{-q.w, -q.x, -q.y, -q.z};
    const RotationMatrix a = quaternion_to_rotation(q);
    const RotationMatrix b = quaternion_to_rotation(neg);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("preprocess with identity quaternions passes accel through") {
  const RawSample s = constant_sample({1.0, -2.0, 9.81}, {1, 0, 0, 0});
  const DerotatedSample d = preprocess_sample(s);
  REQUIRE(d.frames.size() == kFramesPerSample);
  for (const auto& f : d.frames) {
    CHECK(f.accel_ned == Eigen::Vector3d(1.0, -2.0, 9.81));
    CHECK(f.gyro == Eigen::Vector3d(0.1, 0.2, 0.3));
    CHECK(f.pressure == 1013.0);
  }
}

TEST_CASE("preprocess derotates accel by per-frame quaternion") {
  // 90 degrees about x: (0,0,9.81) -> (0,-9.81,0)
  const RawSample s =
      constant_sample({0, 0, 9.81}, {0.7071068, 0.7071068, 0, 0});
  const DerotatedSample d = preprocess_sample(s);
  for (const auto& f : d.frames)
    CHECK((f.accel_ned - Eigen::Vector3d(0, -9.81, 0)).norm() < 1e-4);
}

TEST_CASE("preprocess reports frame index on bad quaternion") {
  RawSample s = constant_sample({0, 0, 9.81}, {1, 0, 0, 0});
  s.frames[123].orientation = {0, 0, 0, 0};
  try {
    preprocess_sample(s);
    FAIL("expected ZeroQuaternion");
  } catch (const ZeroQuaternion& e) {
    CHECK(std::string(e.what()).find("123") != std::string::npos);
  }
}

TEST_CASE("preprocess is deterministic") {
  std::mt19937_64 rng(17);
  RawSample s = constant_sample({1, 2, 3}, {1, 0, 0, 0});
  for (auto& f : s.frames) f.orientation = random_unit_quaternion(rng);
  const DerotatedSample a = preprocess_sample(s);
  const DerotatedSample b = preprocess_sample(s);
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    CHECK(a.frames[i].accel_ned == b.frames[i].accel_ned);
    CHECK(a.frames[i].mag_ned == b.frames[i].mag_ned);
  }
}
