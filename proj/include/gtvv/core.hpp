// Copyright 2026 The gtvv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gtvv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfSound = 343.0;  // m/s

/// Raised when a numerical routine cannot produce a meaningful result
/// (singular system, divergent iteration, ...). Distinct from
/// std::invalid_argument, which covers contract violations at the call site.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

/// Multichannel time series in ACN channel order, N3D normalization.
/// One row per spherical-harmonic channel.
struct AmbisonicSignal {
  Eigen::MatrixXd samples;  // (order+1)^2 x length
  double sample_rate = 0.0;

  Eigen::Index channels() const { return samples.rows(); }
  Eigen::Index length() const { return samples.cols(); }

  int order() const {
    const auto n = samples.rows();
    const int l = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))) - 1;
    if (l < 0 || static_cast<Eigen::Index>(l + 1) * (l + 1) != n)
      throw std::invalid_argument("channel count " + std::to_string(n) +
                                  " is not a square (L+1)^2");
    return l;
  }
};

}  // namespace gtvv
