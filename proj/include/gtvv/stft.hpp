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

#include <memory>
#include <vector>

#include "gtvv/core.hpp"
#include "gtvv/fft.hpp"

namespace gtvv {

enum class Window { Rectangular, Hann, Tukey };

inline Eigen::VectorXd make_window(Window kind, int len, double taper = 0.25) {
  Eigen::VectorXd w(len);
  switch (kind) {
    case Window::Rectangular:
      w.setOnes();
      break;
    case Window::Hann:
      for (int n = 0; n < len; ++n)
        w[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * n / (len - 1));
      break;
    case Window::Tukey:
      for (int n = 0; n < len; ++n) {
        const double t = static_cast<double>(n) / (len - 1);
        if (t < taper / 2.0)
          w[n] = 0.5 * (1.0 + std::cos(kPi * (2.0 * t / taper - 1.0)));
        else if (t > 1.0 - taper / 2.0)
          w[n] = 0.5 * (1.0 + std::cos(kPi * (2.0 * t / taper - 2.0 / taper + 1.0)));
        else
          w[n] = 1.0;
      }
      break;
  }
  return w;
}

/// One-sided STFT of a multichannel signal: per channel a freq_bins x frames
/// complex matrix, freq_bins = window_len/2 + 1.
struct StftTensor {
  std::vector<Eigen::MatrixXcd> bins;  // one matrix per channel
  int window_len = 0;
  int hop = 0;
  double sample_rate = 0.0;
  Window window_kind = Window::Tukey;
  double taper = 0.25;
  Eigen::Index signal_length = 0;

  Eigen::Index channels() const { return static_cast<Eigen::Index>(bins.size()); }
  Eigen::Index frames() const { return bins.empty() ? 0 : bins.front().cols(); }
  Eigen::Index freq_bins() const { return bins.empty() ? 0 : bins.front().rows(); }
  double bin_hz(Eigen::Index f) const { return f * sample_rate / window_len; }
};

inline StftTensor stft(const AmbisonicSignal& x, int window_len, double overlap,
                       Window kind = Window::Tukey, double taper = 0.25) {
  if (window_len <= 0 || window_len % 2 != 0)
    throw std::invalid_argument("window length must be even and positive");
  if (overlap < 0.0 || overlap >= 1.0) throw std::invalid_argument("overlap must be in [0, 1)");
  if (x.length() < window_len) throw std::invalid_argument("signal shorter than one window");
  const int hop = std::max(1, static_cast<int>(std::lround(window_len * (1.0 - overlap))));
  const Eigen::Index n_frames = (x.length() - window_len + hop - 1) / hop + 1;

  StftTensor out;
  out.window_len = window_len;
  out.hop = hop;
  out.sample_rate = x.sample_rate;
  out.window_kind = kind;
  out.taper = taper;
  out.signal_length = x.length();
  out.bins.resize(x.channels());

  const Eigen::VectorXd w = make_window(kind, window_len, taper);
  Eigen::VectorXd frame(window_len);
  for (Eigen::Index l = 0; l < x.channels(); ++l) {
    out.bins[l].resize(window_len / 2 + 1, n_frames);
    for (Eigen::Index k = 0; k < n_frames; ++k) {
      const Eigen::Index start = k * hop;
      const Eigen::Index avail = std::min<Eigen::Index>(window_len, x.length() - start);
      frame.setZero();
      frame.head(avail) = x.samples.row(l).segment(start, avail);
      frame.array() *= w.array();
      out.bins[l].col(k) = fft::rfft(frame);
    }
  }
  return out;
}

/// Weighted overlap-add inverse: frames are re-windowed and the sum is
/// normalized by the accumulated squared window, so any window/hop pair with
/// full coverage reconstructs exactly.
inline AmbisonicSignal istft(const StftTensor& t) {
  if (t.bins.empty()) throw std::invalid_argument("empty tensor");
  if (t.hop <= 0 || t.hop > t.window_len)
    throw NumericalError("non-COLA configuration: hop outside (0, window]");
  const Eigen::Index n_frames = t.frames();
  const Eigen::Index padded = (n_frames - 1) * static_cast<Eigen::Index>(t.hop) + t.window_len;
  const Eigen::VectorXd w = make_window(t.window_kind, t.window_len, t.taper);

  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(padded);
  for (Eigen::Index k = 0; k < n_frames; ++k)
    wsum.segment(k * t.hop, t.window_len).array() += w.array().square();
  if (wsum.head(std::min<Eigen::Index>(padded, t.signal_length)).minCoeff() <
      1e-12 * wsum.maxCoeff())
    throw NumericalError("non-COLA configuration: window sum vanishes");

  AmbisonicSignal out{Eigen::MatrixXd::Zero(t.channels(), padded), t.sample_rate};
  for (Eigen::Index l = 0; l < t.channels(); ++l) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(padded);
    for (Eigen::Index k = 0; k < n_frames; ++k) {
      const Eigen::VectorXd frame = fft::irfft(t.bins[l].col(k), t.window_len);
      acc.segment(k * t.hop, t.window_len).array() += frame.array() * w.array();
    }
    out.samples.row(l) = (acc.array() / wsum.array()).transpose();
  }
  if (t.signal_length > 0 && t.signal_length <= padded)
    out.samples.conservativeResize(Eigen::NoChange, t.signal_length);
  return out;
}

/// Per-frame energy gate on channel 0: a frame is active when its energy
/// exceeds theta times the median frame energy.
inline std::vector<char> energy_vad(const StftTensor& t, double theta = 1.0) {
  const Eigen::Index n = t.frames();
  Eigen::VectorXd energy(n);
  for (Eigen::Index k = 0; k < n; ++k) energy[k] = t.bins[0].col(k).squaredNorm();
  std::vector<double> sorted(energy.data(), energy.data() + n);
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double gate = theta * sorted[n / 2];
  std::vector<char> active(n);
  for (Eigen::Index k = 0; k < n; ++k) active[k] = energy[k] > gate ? 1 : 0;
  return active;
}

/// Instantaneous cross-periodograms phi_{l',l}(f,t) = b_{l'} conj(b_l).
/// The rank-1 structure is kept implicit: the tensor is stored once and
/// entries are formed on demand, which also makes the Hermitian symmetry
/// exact. Expectations over a frame neighborhood happen in the least-squares
/// stack of the GFVV estimator.
class CrossSpectra {
 public:
  CrossSpectra(std::shared_ptr<const StftTensor> t, double vad_theta = 1.0)
      : tensor_(std::move(t)), active_(energy_vad(*tensor_, vad_theta)) {}

  std::complex<double> phi(Eigen::Index l_row, Eigen::Index l_col, Eigen::Index f,
                           Eigen::Index t) const {
    return tensor_->bins[l_row](f, t) * std::conj(tensor_->bins[l_col](f, t));
  }
  double variance(Eigen::Index l, Eigen::Index f, Eigen::Index t) const {
    return std::norm(tensor_->bins[l](f, t));
  }
  std::complex<double> stft_bin(Eigen::Index l, Eigen::Index f, Eigen::Index t) const {
    return tensor_->bins[l](f, t);
  }

  bool active(Eigen::Index t) const { return active_[static_cast<std::size_t>(t)] != 0; }
  const std::vector<char>& active_mask() const { return active_; }
  Eigen::Index channels() const { return tensor_->channels(); }
  Eigen::Index frames() const { return tensor_->frames(); }
  Eigen::Index freq_bins() const { return tensor_->freq_bins(); }
  const StftTensor& tensor() const { return *tensor_; }

 private:
  std::shared_ptr<const StftTensor> tensor_;
  std::vector<char> active_;
};

inline CrossSpectra cross_periodograms(std::shared_ptr<const StftTensor> t,
                                       double vad_theta = 1.0) {
  return CrossSpectra(std::move(t), vad_theta);
}

inline CrossSpectra cross_periodograms(const StftTensor& t, double vad_theta = 1.0) {
  return CrossSpectra(std::make_shared<StftTensor>(t), vad_theta);
}

}  // namespace gtvv
