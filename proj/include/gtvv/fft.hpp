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

#include <complex>
#include <unsupported/Eigen/FFT>

#include "gtvv/core.hpp"

namespace gtvv::fft {

inline Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

inline Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// One-sided spectrum of a real sequence: n/2+1 bins for even n.
inline Eigen::VectorXcd rfft(const Eigen::VectorXd& x) {
  Eigen::VectorXcd full;
  engine().fwd(full, x);
  return full.head(x.size() / 2 + 1);
}

/// Inverse of rfft. The one-sided input is expanded to a Hermitian spectrum,
/// so the result is real by construction.
inline Eigen::VectorXd irfft(const Eigen::VectorXcd& half, Eigen::Index n) {
  if (half.size() != n / 2 + 1)
    throw std::invalid_argument("irfft: bin count does not match fft length");
  Eigen::VectorXcd full(n);
  full.head(half.size()) = half;
  for (Eigen::Index k = half.size(); k < n; ++k) full[k] = std::conj(half[n - k]);
  full[0].imag(0.0);
  if (n % 2 == 0) full[n / 2].imag(0.0);
  Eigen::VectorXcd time;
  engine().inv(time, full);
  return time.real();
}

inline Eigen::VectorXcd fwd(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out;
  engine().fwd(out, x);
  return out;
}

inline Eigen::VectorXcd inv(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out;
  engine().inv(out, x);
  return out;
}

/// Full linear convolution, length a+b-1.
inline Eigen::VectorXd convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size() + b.size() - 1;
  if (a.size() == 0 || b.size() == 0) return Eigen::VectorXd::Zero(std::max<Eigen::Index>(n, 0));
  // direct form below ~64k multiplies, FFT above
  if (a.size() * b.size() <= 65536) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      out.segment(i, b.size()) += a[i] * b;
    return out;
  }
  const Eigen::Index m = next_pow2(n);
  Eigen::VectorXd pa = Eigen::VectorXd::Zero(m), pb = Eigen::VectorXd::Zero(m);
  pa.head(a.size()) = a;
  pb.head(b.size()) = b;
  Eigen::VectorXcd fa, fb;
  engine().fwd(fa, pa);
  engine().fwd(fb, pb);
  fa.array() *= fb.array();
  Eigen::VectorXd out;
  engine().inv(out, fa);
  return out.head(n);
}

/// Autocorrelation rho(d) = sum_u x[u] x[u+d] for d = 0..max_lag (zero padded).
inline Eigen::VectorXd autocorrelation(const Eigen::VectorXd& x, Eigen::Index max_lag) {
  const Eigen::Index m = next_pow2(x.size() + max_lag + 1);
  Eigen::VectorXd px = Eigen::VectorXd::Zero(m);
  px.head(x.size()) = x;
  Eigen::VectorXcd fx;
  engine().fwd(fx, px);
  fx = fx.array().abs2().cast<std::complex<double>>();
  Eigen::VectorXd r;
  engine().inv(r, fx);
  return r.head(max_lag + 1);
}

/// Cross-correlation c(s) = sum_p d[p] v[p-s] for s = 0..max_lag, where both
/// sequences share the same origin (zero padded outside their support).
inline Eigen::VectorXd cross_correlation(const Eigen::VectorXd& d, const Eigen::VectorXd& v,
                                         Eigen::Index max_lag) {
  const Eigen::Index m = next_pow2(std::max(d.size(), v.size()) + max_lag + 1);
  Eigen::VectorXd pd = Eigen::VectorXd::Zero(m), pv = Eigen::VectorXd::Zero(m);
  pd.head(d.size()) = d;
  pv.head(v.size()) = v;
  Eigen::VectorXcd fd, fv;
  engine().fwd(fd, pd);
  engine().fwd(fv, pv);
  fd.array() *= fv.array().conjugate();
  Eigen::VectorXd c;
  engine().inv(c, fd);
  return c.head(max_lag + 1);
}

}  // namespace gtvv::fft
