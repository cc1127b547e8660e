//
// Copyright 2026 The ssp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ssp/assignment.hpp"
#include "ssp/error.hpp"
#include "ssp/mechanisms.hpp"
#include "ssp/model.hpp"
#include "ssp/rng.hpp"

namespace ssp {

// Largest sample count accepted by the exact assignment-based estimator.
inline constexpr std::size_t kMaxExactW2Samples = 512;

// ---------------------------------------------------------------------------
// Closed forms for Gaussians
// ---------------------------------------------------------------------------

// W2 between diagonal-covariance Gaussians:
// W2^2 = sum (mu_j - mu'_j)^2 + sum (sigma_j - sigma'_j)^2.
inline double w2_gaussian_diag(const GaussianDiagParams& a, const GaussianDiagParams& b) {
  a.validate();
  b.validate();
  require(a.dims() == b.dims(), "w2_gaussian_diag: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.dims(); ++j) {
    const double dm = a.means[j] - b.means[j];
    const double ds = a.stds[j] - b.stds[j];
    acc += dm * dm + ds * ds;
  }
  return std::sqrt(acc);
}

// W2 between general 2-D Gaussians in eigen parametrization:
// W2^2 = |mu - mu'|^2 + l1 + l1' + l2 + l2'
//        - 2 sqrt((l1 l1' + l2 l2') cos^2(da) + (l1 l2' + l2 l1') sin^2(da)
//                 + 2 sqrt(l1 l1' l2 l2'))          with da = alpha - alpha'.
// Evaluated in the algebraically equivalent cancellation-free form
// W2^2 = |dmu|^2 + (a-a')^2 + (b-b')^2
//        + 2 sin^2(da) (l1 - l2)(l1' - l2') / (P + sqrt(P^2 cos^2 + Q^2 sin^2))
// with a = sqrt(l1), b = sqrt(l2), P = a a' + b b', Q = a b' + b a'.
inline double w2_gaussian_2d(const Gaussian2DParams& a, const Gaussian2DParams& b) {
  a.validate();
  b.validate();
  const double dm1 = a.mu1 - b.mu1;
  const double dm2 = a.mu2 - b.mu2;
  const double ra = std::sqrt(a.lambda1), rb = std::sqrt(a.lambda2);
  const double sa = std::sqrt(b.lambda1), sb = std::sqrt(b.lambda2);
  const double c = std::cos(a.alpha - b.alpha);
  const double s = std::sin(a.alpha - b.alpha);
  const double p = ra * sa + rb * sb;
  const double q = ra * sb + rb * sa;
  const double trace_cross = std::hypot(p * c, q * s);
  const double rotation_term = 2.0 * s * s * (a.lambda1 - a.lambda2) *
                               (b.lambda1 - b.lambda2) / (p + trace_cross);
  double sq = dm1 * dm1 + dm2 * dm2 + (ra - sa) * (ra - sa) + (rb - sb) * (rb - sb) +
              rotation_term;
  if (sq < 0.0) sq = 0.0;  // rounding guard
  return std::sqrt(sq);
}

// ---------------------------------------------------------------------------
// Empirical W2
// ---------------------------------------------------------------------------

namespace detail {

inline double w2_sorted_1d(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace detail

// Exact empirical W2 between equal-size samples: sqrt of the mean squared
// Euclidean cost of the optimal perfect matching.  1-D inputs use the sorted
// matching, which is provably optimal; higher dimensions solve the assignment
// problem and are capped at kMaxExactW2Samples.
inline double w2_empirical_exact(const Dataset& x, const Dataset& y) {
  x.validate();
  y.validate();
  require(x.rows == y.rows, "w2_empirical_exact: sample counts differ");
  require(x.cols == y.cols, "w2_empirical_exact: dimensions differ");
  const std::size_t m = x.rows, t = x.cols;
  if (t == 1) {
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = x.at(i, 0);
      b[i] = y.at(i, 0);
    }
    return detail::w2_sorted_1d(std::move(a), std::move(b));
  }
  require(m <= kMaxExactW2Samples,
          "w2_empirical_exact: " + std::to_string(m) + " samples exceed the exact cap of " +
              std::to_string(kMaxExactW2Samples) + "; use w2_empirical_sliced");
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t cidx = 0; cidx < t; ++cidx) {
        const double d = x.at(i, cidx) - y.at(j, cidx);
        acc += d * d;
      }
      cost[i * m + j] = acc;
    }
  const double total = solve_assignment(cost, m);
  return std::sqrt(std::max(total, 0.0) / static_cast<double>(m));
}

// Sliced approximation: root-mean of squared 1-D W2 over random unit
// projections.  Deterministic per seed; one stream per projection.
inline double w2_empirical_sliced(const Dataset& x, const Dataset& y,
                                  std::size_t n_projections, std::uint64_t seed) {
  x.validate();
  y.validate();
  require(x.rows == y.rows, "w2_empirical_sliced: sample counts differ");
  require(x.cols == y.cols, "w2_empirical_sliced: dimensions differ");
  require(n_projections >= 1, "w2_empirical_sliced: need at least one projection");
  const std::size_t m = x.rows, t = x.cols;
  Rng base(seed);
  double acc = 0.0;
  std::vector<double> px(m), py(m), dir(t);
  for (std::size_t l = 0; l < n_projections; ++l) {
    Rng r = base.stream(l);
    double norm = 0.0;
    for (std::size_t c = 0; c < t; ++c) {
      dir[c] = r.gaussian(0.0, 1.0);
      norm += dir[c] * dir[c];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      dir[0] = 1.0;
      norm = 1.0;
    }
    for (std::size_t c = 0; c < t; ++c) dir[c] /= norm;
    for (std::size_t i = 0; i < m; ++i) {
      double ax = 0.0, ay = 0.0;
      for (std::size_t c = 0; c < t; ++c) {
        ax += x.at(i, c) * dir[c];
        ay += y.at(i, c) * dir[c];
      }
      px[i] = ax;
      py[i] = ay;
    }
    const double w = detail::w2_sorted_1d(px, py);
    acc += w * w;
  }
  return std::sqrt(acc / static_cast<double>(n_projections));
}

// ---------------------------------------------------------------------------
// Worst-case mechanism distortion (closed forms)
// ---------------------------------------------------------------------------

// Alg. 1: sqrt(sum_i s_i^2).  Alg. 2 / Alg. 3: half of
// sqrt(sum over mean secrets of s_mu^2 + [any sigma secret] * sum of s_a^2).
inline double mechanism_distortion(MechanismId mech, const MechanismConfig& cfg,
                                   const SecretSpec& spec) {
  spec.validate();
  switch (mech) {
    case MechanismId::Alg1: {
      require(cfg.interval_lengths.size() == spec.size(),
              "mechanism_distortion: config must carry one interval per secret");
      double acc = 0.0;
      for (double s : cfg.interval_lengths) acc += s * s;
      return std::sqrt(acc);
    }
    case MechanismId::Alg2:
    case MechanismId::Alg3: {
      require(!cfg.mean_intervals.empty() || !spec.any_std(),
              "mechanism_distortion: midpoint config missing intervals");
      double acc = 0.0;
      for (const auto& t : spec.targets) {
        if (t.kind != ParamKind::Mean) continue;
        require(t.dim < cfg.mean_intervals.size(),
                "mechanism_distortion: no mean interval for " + to_string(t));
        acc += cfg.mean_intervals[t.dim] * cfg.mean_intervals[t.dim];
      }
      if (spec.any_std())
        for (double s : cfg.eig_intervals) acc += s * s;
      return 0.5 * std::sqrt(acc);
    }
    default:
      fail("mechanism_distortion: no closed form for mechanism '" + to_string(mech) + "'");
  }
}

}  // namespace ssp
