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

#include <optional>
#include <vector>

#include "gtvv/core.hpp"

namespace gtvv {

/// A direction on the sphere. Azimuth is wrapped into (-pi, pi] at
/// construction; elevation outside [-pi/2, pi/2] is rejected.
class Direction {
 public:
  Direction(double azimuth, double elevation)
      : azimuth_(wrap_angle(azimuth)), elevation_(elevation) {
    if (elevation < -kPi / 2 - 1e-12 || elevation > kPi / 2 + 1e-12)
      throw std::invalid_argument("elevation out of [-pi/2, pi/2]");
    elevation_ = std::clamp(elevation_, -kPi / 2, kPi / 2);
  }

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }

  Eigen::Vector3d unit() const {
    const double c = std::cos(elevation_);
    return {c * std::cos(azimuth_), c * std::sin(azimuth_), std::sin(elevation_)};
  }

  static Direction from_unit(const Eigen::Vector3d& u) {
    const Eigen::Vector3d v = u.normalized();
    return {std::atan2(v.y(), v.x()), std::asin(std::clamp(v.z(), -1.0, 1.0))};
  }

  /// Great-circle angle to another direction, radians in [0, pi].
  double angle_to(const Direction& other) const {
    const Eigen::Vector3d a = unit(), b = other.unit();
    return std::atan2(a.cross(b).norm(), a.dot(b));
  }

 private:
  double azimuth_;
  double elevation_;
};

inline Direction direction_deg(double azimuth_deg, double elevation_deg) {
  return {deg2rad(azimuth_deg), deg2rad(elevation_deg)};
}

/// Real spherical-harmonic values of one direction, ACN order, N3D
/// normalization. coeffs[0] == 1 and |coeffs|^2 == (order+1)^2.
struct ShVector {
  int order = 0;
  Eigen::VectorXd coeffs;
};

namespace detail {

// Associated Legendre P_l^m without the Condon-Shortley phase, for all
// l <= order and 0 <= m <= l, evaluated at x = sin(elevation).
inline Eigen::MatrixXd legendre_table(int order, double x) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(order + 1, order + 1);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  p(0, 0) = 1.0;
  for (int m = 1; m <= order; ++m) p(m, m) = p(m - 1, m - 1) * (2.0 * m - 1.0) * s;
  for (int m = 0; m < order; ++m) p(m + 1, m) = x * (2.0 * m + 1.0) * p(m, m);
  for (int m = 0; m <= order; ++m)
    for (int l = m + 2; l <= order; ++l)
      p(l, m) = ((2.0 * l - 1.0) * x * p(l - 1, m) - (l + m - 1.0) * p(l - 2, m)) / (l - m);
  return p;
}

inline double n3d_norm(int l, int m) {
  double ratio = 1.0;  // (l-m)! / (l+m)!
  for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
  return std::sqrt((m == 0 ? 1.0 : 2.0) * (2.0 * l + 1.0) * ratio);
}

}  // namespace detail

/// SH encoding vector y(theta, phi) up to the given order.
inline ShVector encode(const Direction& dir, int order) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  const Eigen::MatrixXd p = detail::legendre_table(order, std::sin(dir.elevation()));
  Eigen::VectorXd y((order + 1) * (order + 1));
  for (int l = 0; l <= order; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int am = std::abs(m);
      const double trig = m >= 0 ? std::cos(m * dir.azimuth()) : std::sin(am * dir.azimuth());
      y[l * l + l + m] = detail::n3d_norm(l, am) * p(l, am) * trig;
    }
  }
  return {order, std::move(y)};
}

/// Wideband (frequency-flat) beamformer. When a steering direction is set,
/// the weights satisfy w' y(steering) == 1.
struct Beamformer {
  int order = 0;
  Eigen::VectorXd weights;
  std::optional<Direction> steering;

  double response(const Eigen::VectorXd& y) const { return weights.dot(y); }
  double response(const ShVector& y) const { return weights.dot(y.coeffs); }
};

/// Signal-independent maximum-directivity beamformer: w = y0 / (L+1)^2.
inline Beamformer max_directivity_beamformer(const Direction& steering, int order) {
  const ShVector y = encode(steering, order);
  const double n = static_cast<double>((order + 1) * (order + 1));
  return {order, y.coeffs / n, steering};
}

/// Omnidirectional reference: picks channel 0 (the classical relative-RIR
/// reference). No steering direction.
inline Beamformer omni_beamformer(int order) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  Eigen::VectorXd w = Eigen::VectorXd::Zero((order + 1) * (order + 1));
  w[0] = 1.0;
  return {order, std::move(w), std::nullopt};
}

/// Near-uniform spherical sampling with unit-norm SH atoms, one column per
/// direction.
struct DirectionGrid {
  std::vector<Direction> directions;
  Eigen::MatrixXd atoms;  // (order+1)^2 x n, unit columns
  int order = 0;
  double resolution_deg = 0.0;

  std::size_t size() const { return directions.size(); }
};

/// Fibonacci spherical lattice with roughly 41253/res^2 points (one point
/// per res x res square degree patch).
inline DirectionGrid build_grid(double resolution_deg, int order) {
  if (resolution_deg < 0.5 || resolution_deg > 30.0)
    throw std::invalid_argument("grid resolution must be in [0.5, 30] degrees");
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  const int n = std::max(4, static_cast<int>(std::lround(41253.0 / (resolution_deg * resolution_deg))));
  DirectionGrid grid;
  grid.order = order;
  grid.resolution_deg = resolution_deg;
  grid.directions.reserve(n);
  grid.atoms.resize((order + 1) * (order + 1), n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const Direction d(wrap_angle(golden * i), std::asin(std::clamp(z, -1.0, 1.0)));
    grid.directions.push_back(d);
    Eigen::VectorXd y = encode(d, order).coeffs;
    grid.atoms.col(i) = y / y.norm();
  }
  return grid;
}

struct DirectionMatch {
  Direction direction;
  double correlation = 0.0;
  Eigen::Index index = 0;
};

/// Grid direction whose atom maximizes |<v, atom>| / |v|. The absolute value
/// makes the match invariant to the sign of v (columns of a reduced RIR can
/// carry negative gains).
inline DirectionMatch nearest_direction(const Eigen::VectorXd& v, const DirectionGrid& grid) {
  if (v.size() != grid.atoms.rows())
    throw std::invalid_argument("vector length does not match grid order");
  const double norm = v.norm();
  if (norm <= 0.0) throw std::invalid_argument("cannot fit a direction to a zero vector");
  Eigen::Index best = 0;
  const Eigen::VectorXd scores = (grid.atoms.transpose() * v).cwiseAbs();
  scores.maxCoeff(&best);
  return {grid.directions[static_cast<std::size_t>(best)], scores[best] / norm, best};
}

}  // namespace gtvv
