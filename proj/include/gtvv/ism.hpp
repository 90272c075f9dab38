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
#include <random>
#include <vector>

#include "gtvv/fft.hpp"
#include "gtvv/sh.hpp"

namespace gtvv {

/// One specular wavefront: absolute time of arrival, absolute gain and
/// incidence direction. Index 0 of a scene is the direct path; relative
/// delay/gain of reflection n are toa_n - toa_0 and gain_n / gain_0.
struct Wavefront {
  double toa = 0.0;   // seconds, >= 0
  double gain = 1.0;  // in (0, 1]
  Direction direction{0.0, 0.0};
  double lowpass_hz = 0.0;  // optional one-pole absorption, 0 = frequency flat
};

/// Exponentially decaying isotropic noise appended after the last wavefront.
struct DiffuseTail {
  double onset = 0.0;  // seconds, >= last ToA
  double rt60 = 0.5;   // seconds
  double level = 0.0;  // channel-0 RMS at onset, relative to the direct gain
  unsigned seed = 0;
};

/// Wavefront-parametrized room model. Geometry is given directly as the
/// wavefront list, so the ground truth consumed by the estimators is exact.
struct IsmScene {
  std::vector<Wavefront> wavefronts;  // sorted by toa, [0] = direct
  int order = 1;
  double sample_rate = 16000.0;
  int pulse_halfwidth = 8;  // samples; 0 collapses to a nearest-sample impulse
  std::optional<DiffuseTail> diffuse_tail;

  void validate() const {
    if (wavefronts.empty()) throw std::invalid_argument("scene has no wavefronts");
    if (order < 0 || sample_rate <= 0.0 || pulse_halfwidth < 0)
      throw std::invalid_argument("invalid scene parameters");
    for (std::size_t n = 0; n < wavefronts.size(); ++n) {
      const Wavefront& w = wavefronts[n];
      if (w.toa < 0.0 || w.gain <= 0.0 || w.gain > 1.0 || w.lowpass_hz < 0.0)
        throw std::invalid_argument("invalid wavefront " + std::to_string(n));
      if (n > 0 && w.toa <= wavefronts[0].toa)
        throw std::invalid_argument("direct ToA must be strictly minimal");
      if (n > 0 && w.toa < wavefronts[n - 1].toa)
        throw std::invalid_argument("wavefronts must be sorted by ToA");
    }
    if (diffuse_tail) {
      if (diffuse_tail->onset < wavefronts.back().toa || diffuse_tail->rt60 <= 0.0)
        throw std::invalid_argument("invalid diffuse tail");
    }
  }

  std::size_t size() const { return wavefronts.size(); }
  double relative_delay(std::size_t n) const { return wavefronts[n].toa - wavefronts[0].toa; }
  double relative_delay_samples(std::size_t n) const { return relative_delay(n) * sample_rate; }
  double relative_gain(std::size_t n) const { return wavefronts[n].gain / wavefronts[0].gain; }
};

/// Rendering of a scene excited by a source signal, with the exact scene kept
/// alongside as ground truth.
struct RenderedSignal {
  AmbisonicSignal signal;
  IsmScene ground_truth;
  double snr_db = std::numeric_limits<double>::infinity();
};

namespace detail {

// Hann-windowed sinc, unit peak, support [-halfwidth, halfwidth].
inline double pulse_kernel(double x, int halfwidth) {
  if (std::abs(x) >= halfwidth) return 0.0;
  const double s = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
  return s * 0.5 * (1.0 + std::cos(kPi * x / halfwidth));
}

// One-pole lowpass magnitude response at normalized frequency f in [0, 0.5].
inline std::complex<double> one_pole_response(double f_norm, double cutoff_norm) {
  const double alpha = 1.0 - std::exp(-2.0 * kPi * cutoff_norm);
  const std::complex<double> z = std::polar(1.0, -2.0 * kPi * f_norm);
  return alpha / (1.0 - (1.0 - alpha) * z);
}

}  // namespace detail

inline Eigen::VectorXd white_noise(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = gauss(rng);
  return x;
}

/// AR(2) noise with a resonance around 450 Hz; a crude stand-in for the
/// long-term spectrum of speech. Unit RMS.
inline Eigen::VectorXd speech_shaped_noise(Eigen::Index n, double sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double r = 0.97, theta = 2.0 * kPi * 450.0 / sample_rate;
  const double a1 = 2.0 * r * std::cos(theta), a2 = -r * r;
  Eigen::VectorXd x(n);
  double y1 = 0.0, y2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = a1 * y1 + a2 * y2 + gauss(rng);
    x[i] = y;
    y2 = y1;
    y1 = y;
  }
  const double rms = std::sqrt(x.squaredNorm() / static_cast<double>(n));
  return rms > 0.0 ? Eigen::VectorXd(x / rms) : x;
}

/// Renders the multichannel RIR of a scene: channel l carries
/// sum_n gain_n * pulse(t - toa_n) * y_n[l], plus the optional decaying
/// isotropic tail. Fractional ToAs are realized by the windowed-sinc pulse.
inline AmbisonicSignal synthesize_rir(const IsmScene& scene, Eigen::Index length) {
  scene.validate();
  const double fs = scene.sample_rate;
  const int ch = (scene.order + 1) * (scene.order + 1);
  const double last = scene.wavefronts.back().toa * fs + scene.pulse_halfwidth;
  if (static_cast<double>(length) <= last)
    throw std::invalid_argument("RIR length does not cover all ToAs plus the pulse support");

  AmbisonicSignal rir{Eigen::MatrixXd::Zero(ch, length), fs};
  for (const Wavefront& w : scene.wavefronts) {
    const Eigen::VectorXd y = encode(w.direction, scene.order).coeffs;
    const double pos = w.toa * fs;
    if (scene.pulse_halfwidth == 0 && w.lowpass_hz <= 0.0) {
      const auto idx = static_cast<Eigen::Index>(std::lround(pos));
      rir.samples.col(idx) += w.gain * y;
      continue;
    }
    // Base pulse taps around the (possibly fractional) arrival.
    const Eigen::Index lo = std::max<Eigen::Index>(
        0, static_cast<Eigen::Index>(std::ceil(pos)) - scene.pulse_halfwidth);
    const Eigen::Index hi = std::min<Eigen::Index>(
        length - 1, static_cast<Eigen::Index>(std::floor(pos)) + scene.pulse_halfwidth);
    std::vector<double> taps;
    taps.reserve(hi - lo + 1);
    for (Eigen::Index t = lo; t <= hi; ++t)
      taps.push_back(scene.pulse_halfwidth == 0
                         ? (t == std::lround(pos) ? 1.0 : 0.0)
                         : detail::pulse_kernel(static_cast<double>(t) - pos, scene.pulse_halfwidth));
    if (w.lowpass_hz > 0.0) {
      // one-pole absorption smeared over the pulse
      const double alpha = 1.0 - std::exp(-2.0 * kPi * w.lowpass_hz / fs);
      double state = 0.0;
      const Eigen::Index extra = std::min<Eigen::Index>(
          length - 1 - hi, static_cast<Eigen::Index>(std::ceil(8.0 / alpha)));
      taps.resize(taps.size() + extra, 0.0);
      for (double& tap : taps) {
        state = alpha * tap + (1.0 - alpha) * state;
        tap = state;
      }
    }
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const Eigen::Index t = lo + static_cast<Eigen::Index>(k);
      if (t < length && taps[k] != 0.0) rir.samples.col(t) += w.gain * taps[k] * y;
    }
  }

  if (scene.diffuse_tail && scene.diffuse_tail->level > 0.0) {
    const DiffuseTail& tail = *scene.diffuse_tail;
    const auto onset = static_cast<Eigen::Index>(std::lround(tail.onset * fs));
    if (onset < length) {
      std::mt19937_64 rng(tail.seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      const int q_dirs = 64;
      const DirectionGrid dirs = build_grid(26.0, scene.order);
      const double amp = tail.level * scene.wavefronts[0].gain / std::sqrt(static_cast<double>(q_dirs));
      const double decay = std::pow(10.0, -3.0 / (tail.rt60 * fs));
      Eigen::MatrixXd basis(ch, q_dirs);
      for (int q = 0; q < q_dirs; ++q)
        basis.col(q) = encode(dirs.directions[q % dirs.size()], scene.order).coeffs;
      double env = 1.0;
      Eigen::VectorXd noise(q_dirs);
      for (Eigen::Index t = onset; t < length; ++t) {
        for (int q = 0; q < q_dirs; ++q) noise[q] = gauss(rng);
        rir.samples.col(t) += amp * env * (basis * noise);
        env *= decay;
      }
    }
  }
  return rir;
}

/// Per-channel convolution of a mono sequence with a multichannel kernel.
inline AmbisonicSignal convolve_channels(const AmbisonicSignal& kernel, const Eigen::VectorXd& x) {
  AmbisonicSignal out{Eigen::MatrixXd(kernel.channels(), x.size() + kernel.length() - 1),
                      kernel.sample_rate};
  for (Eigen::Index l = 0; l < kernel.channels(); ++l)
    out.samples.row(l) = fft::convolve(kernel.samples.row(l), x).transpose();
  return out;
}

namespace detail {

// Mean power of the frames whose energy exceeds the median frame energy.
inline double active_power(const Eigen::VectorXd& x, Eigen::Index frame_len = 1024) {
  const Eigen::Index n_frames = std::max<Eigen::Index>(1, x.size() / frame_len);
  std::vector<double> energies(n_frames);
  for (Eigen::Index k = 0; k < n_frames; ++k)
    energies[k] = x.segment(k * frame_len, std::min(frame_len, x.size() - k * frame_len)).squaredNorm();
  std::vector<double> sorted = energies;
  std::nth_element(sorted.begin(), sorted.begin() + n_frames / 2, sorted.end());
  const double median = sorted[n_frames / 2];
  double power = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < n_frames; ++k) {
    if (energies[k] >= median) {
      power += energies[k];
      count += std::min(frame_len, x.size() - k * frame_len);
    }
  }
  return count > 0 ? power / static_cast<double>(count) : 0.0;
}

}  // namespace detail

/// Convolves the excitation with the scene RIR and adds noise at the given
/// channel-0 SNR (measured over active frames). Pass +inf for a clean render.
/// When no noise signal is supplied, an isotropic (per-channel independent
/// white Gaussian) field is generated from noise_seed.
inline RenderedSignal render_recording(const IsmScene& scene, const Eigen::VectorXd& excitation,
                                       double snr_db,
                                       const std::optional<AmbisonicSignal>& noise = std::nullopt,
                                       std::uint64_t noise_seed = 1) {
  if (excitation.size() == 0) throw std::invalid_argument("empty excitation");
  scene.validate();
  const double fs = scene.sample_rate;
  const Eigen::Index rir_len = static_cast<Eigen::Index>(
      std::ceil((scene.diffuse_tail ? scene.diffuse_tail->onset + scene.diffuse_tail->rt60
                                    : scene.wavefronts.back().toa) * fs)) +
      scene.pulse_halfwidth + 2;
  const AmbisonicSignal rir = synthesize_rir(scene, rir_len);
  AmbisonicSignal clean = convolve_channels(rir, excitation);

  if (std::isinf(snr_db) && snr_db > 0.0) return {std::move(clean), scene, snr_db};

  const Eigen::Index len = clean.length();
  const Eigen::Index ch = clean.channels();
  Eigen::MatrixXd noise_mat(ch, len);
  if (noise) {
    if (noise->channels() != ch) throw std::invalid_argument("noise channel count mismatch");
    for (Eigen::Index t = 0; t < len; ++t) noise_mat.col(t) = noise->samples.col(t % noise->length());
  } else {
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index l = 0; l < ch; ++l)
      for (Eigen::Index t = 0; t < len; ++t) noise_mat(l, t) = gauss(rng);
  }
  const double sig_power = detail::active_power(clean.samples.row(0));
  const double noise_power = detail::active_power(noise_mat.row(0));
  if (noise_power <= 0.0) throw std::invalid_argument("zero-power noise with finite SNR requested");
  const double scale = std::sqrt(sig_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  clean.samples += scale * noise_mat;
  return {std::move(clean), scene, snr_db};
}

/// Average of the post-onset segments of the given RIRs, the convolutive
/// kernel for babble-style diffuse noise.
inline AmbisonicSignal build_diffuse_noise(const std::vector<AmbisonicSignal>& rirs, double onset) {
  if (rirs.empty()) throw std::invalid_argument("no input RIRs");
  const double fs = rirs.front().sample_rate;
  const auto onset_idx = static_cast<Eigen::Index>(std::lround(onset * fs));
  Eigen::Index out_len = 0;
  for (const AmbisonicSignal& r : rirs) out_len = std::max(out_len, r.length() - onset_idx);
  if (out_len <= 0) throw std::invalid_argument("all inputs are shorter than the onset");
  AmbisonicSignal avg{Eigen::MatrixXd::Zero(rirs.front().channels(), out_len), fs};
  for (const AmbisonicSignal& r : rirs) {
    if (r.channels() != avg.channels()) throw std::invalid_argument("channel count mismatch");
    const Eigen::Index n = std::max<Eigen::Index>(0, r.length() - onset_idx);
    avg.samples.leftCols(n) += r.samples.rightCols(n);
  }
  avg.samples /= static_cast<double>(rirs.size());
  return avg;
}

}  // namespace gtvv
