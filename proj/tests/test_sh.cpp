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

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "gtvv/sh.hpp"

using namespace gtvv;

TEST_CASE("Direction wraps azimuth and validates elevation") {
  Direction d(3.0 * kPi, 0.2);
  CHECK(d.azimuth() == Catch::Approx(kPi));
  CHECK(d.elevation() == Catch::Approx(0.2));
  CHECK_THROWS_AS(Direction(0.0, 2.0), std::invalid_argument);
  Direction e(-kPi, 0.0);  // -pi wraps to +pi
  CHECK(e.azimuth() == Catch::Approx(kPi));
}

TEST_CASE("Direction round-trips through unit vectors") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> az(-kPi, kPi), el(-kPi / 2, kPi / 2);
  for (int i = 0; i < 200; ++i) {
    Direction d(az(rng), el(rng));
    Direction back = Direction::from_unit(d.unit());
    CHECK(d.angle_to(back) < 1e-12);
  }
}

TEST_CASE("encode at the zenith zeroes the azimuthal channels") {
  const ShVector y = encode(Direction(0.0, kPi / 2), 1);
  REQUIRE(y.coeffs.size() == 4);
  CHECK(y.coeffs[0] == Catch::Approx(1.0));
  CHECK(y.coeffs[1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(y.coeffs[2] == Catch::Approx(std::sqrt(3.0)));
  CHECK(y.coeffs[3] == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("encode on the x-axis puts the order-1 energy in the X channel") {
  const ShVector y = encode(Direction(0.0, 0.0), 1);
  CHECK(y.coeffs[0] == Catch::Approx(1.0));
  CHECK(y.coeffs[1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(y.coeffs[2] == Catch::Approx(0.0).margin(1e-14));
  CHECK(y.coeffs[3] == Catch::Approx(std::sqrt(3.0)));
}

TEST_CASE("encode satisfies the N3D completeness identities") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> az(-kPi, kPi), el(-kPi / 2, kPi / 2);
  for (int i = 0; i < 500; ++i) {
    Direction d(az(rng), el(rng));
    for (int order : {0, 1, 3}) {
      const ShVector y = encode(d, order);
      CHECK(y.coeffs[0] == Catch::Approx(1.0));
      const double n = (order + 1) * (order + 1);
      CHECK(y.coeffs.squaredNorm() == Catch::Approx(n).epsilon(0).margin(1e-10 * n));
    }
  }
}

TEST_CASE("encode parity: antipode flips odd degrees") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> az(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const double a = az(rng);
    const ShVector y = encode(Direction(a, 0.0), 3);
    const ShVector z = encode(Direction(a + kPi, 0.0), 3);
    for (int l = 0; l <= 3; ++l) {
      const double sign = (l % 2 == 0) ? 1.0 : -1.0;
      for (int m = -l; m <= l; ++m) {
        const int acn = l * l + l + m;
        CHECK(z.coeffs[acn] == Catch::Approx(sign * y.coeffs[acn]).margin(1e-12));
      }
    }
  }
}

TEST_CASE("max-directivity beamformer is distortionless") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> az(-kPi, kPi), el(-kPi / 2, kPi / 2);
  for (int i = 0; i < 1000; ++i) {
    Direction d(az(rng), el(rng));
    const Beamformer w = max_directivity_beamformer(d, 3);
    CHECK(std::abs(w.response(encode(d, 3)) - 1.0) < 1e-12);
  }
}

TEST_CASE("max-directivity weights at the zenith") {
  const Beamformer w = max_directivity_beamformer(Direction(0.0, kPi / 2), 1);
  Eigen::VectorXd expected(4);
  expected << 1.0, 0.0, std::sqrt(3.0), 0.0;
  CHECK((w.weights - expected / 4.0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(w.weights.squaredNorm() == Catch::Approx(1.0 / 4.0));
  const Beamformer w3 = max_directivity_beamformer(Direction(0.7, -0.3), 3);
  CHECK(w3.weights.squaredNorm() == Catch::Approx(1.0 / 16.0));
}

TEST_CASE("max-directivity at order 0 is the omni channel") {
  const Beamformer w = max_directivity_beamformer(Direction(0.0, 0.0), 0);
  REQUIRE(w.weights.size() == 1);
  CHECK(w.weights[0] == Catch::Approx(1.0));
}

TEST_CASE("omni beamformer selects channel 0") {
  const Beamformer w1 = omni_beamformer(1);
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(4);
  e0[0] = 1.0;
  CHECK(w1.weights == e0);
  CHECK(!w1.steering.has_value());
  const Beamformer w2 = omni_beamformer(2);
  CHECK(w2.weights.size() == 9);
  CHECK(w2.weights[0] == 1.0);
  CHECK(w2.weights.tail(8).cwiseAbs().maxCoeff() == 0.0);
  // omni channel unity for any direction
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> az(-kPi, kPi), el(-kPi / 2, kPi / 2);
  for (int i = 0; i < 100; ++i)
    CHECK(w2.response(encode(Direction(az(rng), el(rng)), 2)) == Catch::Approx(1.0));
}

TEST_CASE("build_grid produces unit atoms at the requested density") {
  const DirectionGrid g = build_grid(10.0, 1);
  CHECK(g.size() >= 370);
  CHECK(g.size() <= 455);
  for (Eigen::Index i = 0; i < g.atoms.cols(); ++i)
    CHECK(g.atoms.col(i).norm() == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(build_grid(0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(45.0, 1), std::invalid_argument);
}

TEST_CASE("build_grid order 0 degenerates to the omni atom") {
  const DirectionGrid g = build_grid(30.0, 0);
  for (Eigen::Index i = 0; i < g.atoms.cols(); ++i)
    CHECK(g.atoms(0, i) == Catch::Approx(1.0));
}

TEST_CASE("grid covers the sphere within its nominal resolution") {
  const DirectionGrid g = build_grid(5.0, 1);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> az(-kPi, kPi), z(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    Direction d(az(rng), std::asin(z(rng)));
    double best = kPi;
    for (const Direction& gd : g.directions) best = std::min(best, d.angle_to(gd));
    worst = std::max(worst, best);
  }
  CHECK(rad2deg(worst) < 5.0);
}

TEST_CASE("nearest_direction recovers grid atoms exactly, up to sign") {
  const DirectionGrid g = build_grid(8.0, 2);
  std::mt19937 rng(29);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = pick(rng);
    const Eigen::VectorXd y = encode(g.directions[k], 2).coeffs;
    for (double sign : {1.0, -1.0}) {
      const DirectionMatch m = nearest_direction(sign * y, g);
      CHECK(m.direction.angle_to(g.directions[k]) < 1e-12);
      CHECK(m.correlation == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("nearest_direction maps off-grid directions to a nearby atom") {
  const DirectionGrid g = build_grid(4.0, 3);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> az(-kPi, kPi), z(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Direction d(az(rng), std::asin(z(rng)));
    const DirectionMatch m = nearest_direction(encode(d, 3).coeffs, g);
    // oracle: exhaustive scan by angular distance
    double best = kPi;
    for (const Direction& gd : g.directions) best = std::min(best, d.angle_to(gd));
    CHECK(rad2deg(m.direction.angle_to(d)) <= 4.0 + 1e-9);
    CHECK(m.direction.angle_to(d) <= best + deg2rad(2.0));
  }
  CHECK_THROWS_AS(nearest_direction(Eigen::VectorXd::Zero(16), g), std::invalid_argument);
}
