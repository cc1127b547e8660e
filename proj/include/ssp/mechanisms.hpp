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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssp/error.hpp"
#include "ssp/model.hpp"
#include "ssp/rng.hpp"

namespace ssp {

enum class MechanismId {
  Alg1,         // random-offset quantization of secret parameters
  Alg2,         // midpoint quantization, 2-D general Gaussian
  Alg3,         // midpoint quantization, k-D general Gaussian
  DatasetMode,  // Alg. 1 extension operating on raw samples
  ApGaussian,   // per-sample Gaussian noise baseline
  DistpLaplace, // per-sample Laplace noise baseline
  DpHistogram,  // noisy-histogram resampling baseline
};

inline std::string to_string(MechanismId id) {
  switch (id) {
    case MechanismId::Alg1: return "alg1";
    case MechanismId::Alg2: return "alg2";
    case MechanismId::Alg3: return "alg3";
    case MechanismId::DatasetMode: return "dataset";
    case MechanismId::ApGaussian: return "ap";
    case MechanismId::DistpLaplace: return "distp";
    case MechanismId::DpHistogram: return "dp-hist";
  }
  return "?";
}

inline MechanismId mechanism_from_string(const std::string& s) {
  if (s == "alg1") return MechanismId::Alg1;
  if (s == "alg2") return MechanismId::Alg2;
  if (s == "alg3") return MechanismId::Alg3;
  if (s == "dataset") return MechanismId::DatasetMode;
  if (s == "ap") return MechanismId::ApGaussian;
  if (s == "distp") return MechanismId::DistpLaplace;
  if (s == "dp-hist") return MechanismId::DpHistogram;
  fail("unknown mechanism '" + s + "'");
}

struct ReleaseOutcome {
  std::variant<std::monostate, GaussianDiagParams, Gaussian2DParams, GaussianGeneralParams>
      params;
  std::optional<Dataset> dataset;
  std::uint64_t seed = 0;
  MechanismId mechanism = MechanismId::Alg1;
  MechanismConfig config;

  const GaussianDiagParams& diag() const { return std::get<GaussianDiagParams>(params); }
  const Gaussian2DParams& g2d() const { return std::get<Gaussian2DParams>(params); }
  const GaussianGeneralParams& general() const {
    return std::get<GaussianGeneralParams>(params);
  }
};

namespace detail {

inline std::int64_t bin_index(double g, double anchor, double s) {
  return static_cast<std::int64_t>(std::floor((g - anchor) / s));
}

// Alg. 1 release rule for one secret, with the uniform draw u01 in [0, 1)
// supplied by the caller.  Guarded so the released value stays inside the
// bin of the original value even under floating-point rounding.
inline double quantize_random_offset(double g, double anchor, double s, double u01) {
  const std::int64_t idx = bin_index(g, anchor, s);
  const double left = anchor + static_cast<double>(idx) * s;
  double released = left + u01 * s;
  const double right = anchor + static_cast<double>(idx + 1) * s;
  if (!(released < right)) released = std::nextafter(right, left);
  if (released < left) released = left;
  return released;
}

// Alg. 2 / Alg. 3 release rule: midpoint of the bin containing g.
inline double quantize_midpoint(double g, double anchor, double s) {
  const std::int64_t idx = bin_index(g, anchor, s);
  return anchor + (static_cast<double>(idx) + 0.5) * s;
}

inline void check_secret_cfg(const SecretSpec& spec, const MechanismConfig& cfg) {
  require(cfg.mode == QuantizationMode::RandomOffset,
          "quantization config: mode must be random-offset");
  require(cfg.interval_lengths.size() == spec.size() &&
              cfg.lower_anchors.size() == spec.size(),
          "quantization config: one interval and anchor per secret required");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    require(cfg.interval_lengths[i] > 0.0,
            "quantization config: interval lengths must be positive");
    if (spec.targets[i].kind == ParamKind::Std)
      require(cfg.lower_anchors[i] >= 0.0,
              "quantization config: std secret " + to_string(spec.targets[i]) +
                  " requires a nonnegative anchor");
  }
}

inline void check_above_anchor(double g, double anchor, const SecretTarget& t) {
  require(g >= anchor, "release: secret " + to_string(t) + " value " +
                           std::to_string(g) + " lies below its anchor " +
                           std::to_string(anchor));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Alg. 1: random-offset quantization on diagonal-Gaussian parameters
// ---------------------------------------------------------------------------

inline ReleaseOutcome release_alg1(const GaussianDiagParams& params, const SecretSpec& spec,
                                   const MechanismConfig& cfg, std::uint64_t seed) {
  params.validate();
  spec.validate();
  spec.validate_for_dims(params.dims());
  detail::check_secret_cfg(spec, cfg);

  GaussianDiagParams out = params;
  const std::vector<double> g = secret_values(params, spec);
  Rng base(seed);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    detail::check_above_anchor(g[i], cfg.lower_anchors[i], spec.targets[i]);
    Rng r = base.stream(i);  // one stream per secret index
    const double released = detail::quantize_random_offset(
        g[i], cfg.lower_anchors[i], cfg.interval_lengths[i], r.next_unit());
    const auto& t = spec.targets[i];
    if (t.kind == ParamKind::Mean) {
      out.means[t.dim] = released;
    } else {
      require(released > 0.0,
              "release_alg1: released std for " + to_string(t) +
                  " is not positive (anchor/interval misconfigured)");
      out.stds[t.dim] = released;
    }
  }
  ReleaseOutcome res;
  res.params = out;
  res.seed = seed;
  res.mechanism = MechanismId::Alg1;
  res.config = cfg;
  return res;
}

// ---------------------------------------------------------------------------
// Alg. 2: midpoint quantization on 2-D general-Gaussian parameters
// ---------------------------------------------------------------------------

inline ReleaseOutcome release_alg2(const Gaussian2DParams& params, const SecretSpec& spec,
                                   const MechanismConfig& cfg) {
  params.validate();
  spec.validate();
  spec.validate_for_dims(2);
  require(cfg.mode == QuantizationMode::Midpoint, "release_alg2: config mode must be midpoint");
  require(cfg.mean_intervals.size() == 2 && cfg.mean_anchors.size() == 2 &&
              cfg.eig_intervals.size() == 2 && cfg.eig_anchors.size() == 2,
          "release_alg2: config must carry anchors/intervals for mu1, mu2, a, b");

  Gaussian2DParams out = params;
  bool sigma_secret = false;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    if (t.kind == ParamKind::Std) {
      sigma_secret = true;
      continue;
    }
    const double mu = (t.dim == 0) ? params.mu1 : params.mu2;
    detail::check_above_anchor(mu, cfg.mean_anchors[t.dim], t);
    const double released =
        detail::quantize_midpoint(mu, cfg.mean_anchors[t.dim], cfg.mean_intervals[t.dim]);
    (t.dim == 0 ? out.mu1 : out.mu2) = released;
  }
  if (sigma_secret) {
    const double a = std::sqrt(params.lambda1);
    const double b = std::sqrt(params.lambda2);
    require(a >= cfg.eig_anchors[0] && b >= cfg.eig_anchors[1],
            "release_alg2: sqrt-eigenvalue below its anchor");
    const double ar = detail::quantize_midpoint(a, cfg.eig_anchors[0], cfg.eig_intervals[0]);
    const double br = detail::quantize_midpoint(b, cfg.eig_anchors[1], cfg.eig_intervals[1]);
    require(ar > 0.0 && br > 0.0, "release_alg2: released sqrt-eigenvalue is not positive");
    out.lambda1 = ar * ar;
    out.lambda2 = br * br;
  }
  ReleaseOutcome res;
  res.params = out;
  res.seed = 0;
  res.mechanism = MechanismId::Alg2;
  res.config = cfg;
  return res;
}

// ---------------------------------------------------------------------------
// Alg. 3: midpoint quantization on k-D general-Gaussian parameters
// ---------------------------------------------------------------------------

inline ReleaseOutcome release_alg3(const GaussianGeneralParams& params, const SecretSpec& spec,
                                   const MechanismConfig& cfg) {
  params.validate();
  spec.validate();
  const std::size_t k = params.dims();
  spec.validate_for_dims(k);
  require(cfg.mode == QuantizationMode::Midpoint, "release_alg3: config mode must be midpoint");
  require(cfg.mean_intervals.size() == k && cfg.mean_anchors.size() == k &&
              cfg.eig_intervals.size() == k && cfg.eig_anchors.size() == k,
          "release_alg3: config must carry per-dimension anchors/intervals");

  GaussianGeneralParams out = params;
  bool sigma_secret = false;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    if (t.kind == ParamKind::Std) {
      sigma_secret = true;
      continue;
    }
    detail::check_above_anchor(params.means[t.dim], cfg.mean_anchors[t.dim], t);
    out.means[t.dim] = detail::quantize_midpoint(params.means[t.dim], cfg.mean_anchors[t.dim],
                                                 cfg.mean_intervals[t.dim]);
  }
  if (sigma_secret) {
    for (std::size_t j = 0; j < k; ++j) {
      require(params.eig_sqrt[j] >= cfg.eig_anchors[j],
              "release_alg3: sqrt-eigenvalue below its anchor");
      const double r =
          detail::quantize_midpoint(params.eig_sqrt[j], cfg.eig_anchors[j], cfg.eig_intervals[j]);
      require(r > 0.0, "release_alg3: released sqrt-eigenvalue is not positive");
      out.eig_sqrt[j] = r;
    }
  }
  ReleaseOutcome res;
  res.params = out;
  res.seed = 0;
  res.mechanism = MechanismId::Alg3;
  res.config = cfg;
  return res;
}

// ---------------------------------------------------------------------------
// Dataset mode: estimate, quantize, re-fit the samples
// ---------------------------------------------------------------------------

namespace detail {

// Released (mu_r, sigma_r) per column touched by the spec, via the Alg. 1 rule.
struct ColumnRelease {
  double mu_r;
  double sigma_r;
  bool touched;
};

inline std::vector<ColumnRelease> plan_dataset_release(const MomentEstimate& est,
                                                       std::size_t cols,
                                                       const SecretSpec& spec,
                                                       const MechanismConfig& cfg,
                                                       const std::vector<double>& offsets) {
  std::vector<ColumnRelease> plan(cols);
  for (std::size_t c = 0; c < cols; ++c)
    plan[c] = ColumnRelease{est.means[c], est.stds[c], false};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    const double g =
        (t.kind == ParamKind::Mean) ? est.means[t.dim] : est.stds[t.dim];
    if (t.kind == ParamKind::Std)
      require(!est.degenerate[t.dim],
              "release_dataset: std secret on a zero-variance column " +
                  std::to_string(t.dim));
    check_above_anchor(g, cfg.lower_anchors[i], t);
    const double released = quantize_random_offset(g, cfg.lower_anchors[i],
                                                   cfg.interval_lengths[i], offsets[i]);
    if (t.kind == ParamKind::Mean) {
      plan[t.dim].mu_r = released;
    } else {
      require(released > 0.0, "release_dataset: released std for " + to_string(t) +
                                  " is not positive");
      plan[t.dim].sigma_r = released;
    }
    plan[t.dim].touched = true;
  }
  return plan;
}

// Affine map per touched column so that the released empirical secrets equal
// the released parameters exactly (single map even when both mu and sigma of
// one column are secret).
inline Dataset apply_dataset_release(const Dataset& data, const MomentEstimate& est,
                                     const std::vector<ColumnRelease>& plan) {
  Dataset out = data;
  for (std::size_t c = 0; c < data.cols; ++c) {
    if (!plan[c].touched) continue;
    require(est.stds[c] > 0.0 || plan[c].sigma_r == est.stds[c],
            "release_dataset: degenerate column " + std::to_string(c));
    const double scale = (plan[c].sigma_r == est.stds[c] || est.stds[c] == 0.0)
                             ? 1.0
                             : plan[c].sigma_r / est.stds[c];
    const double mu_hat = est.means[c];
    const double mu_r = plan[c].mu_r;
    for (std::size_t r = 0; r < data.rows; ++r)
      out.at(r, c) = scale * (data.at(r, c) - mu_hat) + mu_r;
  }
  return out;
}

inline Dataset release_dataset_with_offsets(const Dataset& data, const SecretSpec& spec,
                                            const MechanismConfig& cfg,
                                            const std::vector<double>& offsets) {
  const MomentEstimate est = estimate_params(data);
  const auto plan = plan_dataset_release(est, data.cols, spec, cfg, offsets);
  return apply_dataset_release(data, est, plan);
}

}  // namespace detail

inline ReleaseOutcome release_dataset(const Dataset& data, const SecretSpec& spec,
                                      const MechanismConfig& cfg, std::uint64_t seed) {
  data.validate();
  spec.validate();
  spec.validate_for_dims(data.cols);
  detail::check_secret_cfg(spec, cfg);

  Rng base(seed);
  std::vector<double> offsets(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    Rng r = base.stream(i);
    offsets[i] = r.next_unit();
  }
  const MomentEstimate est = estimate_params(data);
  const auto plan = detail::plan_dataset_release(est, data.cols, spec, cfg, offsets);

  ReleaseOutcome res;
  GaussianDiagParams released_params;
  released_params.means.resize(data.cols);
  released_params.stds.resize(data.cols);
  bool valid_family = true;
  for (std::size_t c = 0; c < data.cols; ++c) {
    released_params.means[c] = plan[c].mu_r;
    released_params.stds[c] = plan[c].sigma_r;
    valid_family = valid_family && plan[c].sigma_r > 0.0;
  }
  // untouched zero-variance columns have no Gaussian parameter echo
  if (valid_family) res.params = released_params;
  res.dataset = detail::apply_dataset_release(data, est, plan);
  res.seed = seed;
  res.mechanism = MechanismId::DatasetMode;
  res.config = cfg;
  return res;
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

// AP: independent zero-mean Gaussian noise on every entry.
inline ReleaseOutcome release_ap_gaussian(const Dataset& data, double noise_sd,
                                          std::uint64_t seed) {
  data.validate();
  require(noise_sd >= 0.0, "release_ap_gaussian: noise_sd must be nonnegative");
  Dataset out = data;
  if (noise_sd > 0.0) {
    Rng base(seed);
    for (std::size_t c = 0; c < data.cols; ++c) {
      Rng r = base.stream(c);  // one stream per column
      for (std::size_t i = 0; i < data.rows; ++i)
        out.at(i, c) += r.gaussian(0.0, noise_sd);
    }
  }
  ReleaseOutcome res;
  res.dataset = std::move(out);
  res.seed = seed;
  res.mechanism = MechanismId::ApGaussian;
  res.config.noise_scale = noise_sd;
  return res;
}

// DistP: independent zero-mean Laplace noise on every entry.
inline ReleaseOutcome release_distp_laplace(const Dataset& data, double noise_scale,
                                            std::uint64_t seed) {
  data.validate();
  require(noise_scale >= 0.0, "release_distp_laplace: noise_scale must be nonnegative");
  Dataset out = data;
  if (noise_scale > 0.0) {
    Rng base(seed);
    for (std::size_t c = 0; c < data.cols; ++c) {
      Rng r = base.stream(c);
      for (std::size_t i = 0; i < data.rows; ++i)
        out.at(i, c) += r.laplace(noise_scale);
    }
  }
  ReleaseOutcome res;
  res.dataset = std::move(out);
  res.seed = seed;
  res.mechanism = MechanismId::DistpLaplace;
  res.config.noise_scale = noise_scale;
  return res;
}

namespace detail {

// Draw m positions from a clipped, renormalized noisy histogram.  Counts are
// allocated by largest remainder so a noiseless histogram reproduces the
// original bin counts exactly; positions are uniform within each bin.
inline std::vector<double> sample_from_noisy_histogram(std::vector<double> noisy_counts,
                                                       double lo, double width,
                                                       std::size_t m, Rng& rng) {
  double total = 0.0;
  for (double& c : noisy_counts) {
    if (c < 0.0) c = 0.0;
    total += c;
  }
  require(total > 0.0,
          "release_dp_histogram: histogram sums to zero after clipping (noise too large)");

  const std::size_t nbins = noisy_counts.size();
  std::vector<std::size_t> alloc(nbins, 0);
  std::vector<std::pair<double, std::size_t>> rem(nbins);
  std::size_t assigned = 0;
  for (std::size_t b = 0; b < nbins; ++b) {
    const double expect = noisy_counts[b] / total * static_cast<double>(m);
    alloc[b] = static_cast<std::size_t>(std::floor(expect));
    assigned += alloc[b];
    rem[b] = {expect - std::floor(expect), b};
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
    return x.first > y.first;  // ties keep lower bin index first
  });
  for (std::size_t i = 0; assigned < m; ++i, ++assigned) alloc[rem[i % nbins].second]++;

  std::vector<double> out;
  out.reserve(m);
  for (std::size_t b = 0; b < nbins; ++b)
    for (std::size_t i = 0; i < alloc[b]; ++i)
      out.push_back(lo + (static_cast<double>(b) + rng.next_unit()) * width);
  return out;
}

}  // namespace detail

// DP baseline: per column, histogram over [min, max], Laplace noise on counts,
// clip negatives, renormalize, redraw m samples.
inline ReleaseOutcome release_dp_histogram(const Dataset& data, double bin_width,
                                           double noise_scale, std::uint64_t seed) {
  data.validate();
  require(bin_width > 0.0, "release_dp_histogram: bin_width must be positive");
  require(noise_scale >= 0.0, "release_dp_histogram: noise_scale must be nonnegative");

  Dataset out = data;
  Rng base(seed);
  for (std::size_t c = 0; c < data.cols; ++c) {
    double lo = data.at(0, c), hi = data.at(0, c);
    for (std::size_t r = 1; r < data.rows; ++r) {
      lo = std::min(lo, data.at(r, c));
      hi = std::max(hi, data.at(r, c));
    }
    // Bins tile [min, max] exactly; a constant column degenerates to width 0.
    const double range = hi - lo;
    const std::size_t nbins =
        range > 0.0
            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / bin_width)))
            : 1;
    const double width = range > 0.0 ? range / static_cast<double>(nbins) : 0.0;

    std::vector<double> counts(nbins, 0.0);
    for (std::size_t r = 0; r < data.rows; ++r) {
      std::size_t b = 0;
      if (width > 0.0) {
        b = static_cast<std::size_t>((data.at(r, c) - lo) / width);
        if (b >= nbins) b = nbins - 1;
      }
      counts[b] += 1.0;
    }
    Rng rng = base.stream(c);
    if (noise_scale > 0.0)
      for (double& cnt : counts) cnt += rng.laplace(noise_scale);

    const auto samples =
        detail::sample_from_noisy_histogram(std::move(counts), lo, width, data.rows, rng);
    for (std::size_t r = 0; r < data.rows; ++r) out.at(r, c) = samples[r];
  }

  ReleaseOutcome res;
  res.dataset = std::move(out);
  res.seed = seed;
  res.mechanism = MechanismId::DpHistogram;
  res.config.noise_scale = noise_scale;
  res.config.bin_width = bin_width;
  return res;
}

}  // namespace ssp
