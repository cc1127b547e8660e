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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ssp/error.hpp"

namespace ssp {

// ---------------------------------------------------------------------------
// Parametric distribution families
// ---------------------------------------------------------------------------

// k-dimensional Gaussian with diagonal covariance: (mu_1..mu_k, sigma_1..sigma_k).
struct GaussianDiagParams {
  std::vector<double> means;
  std::vector<double> stds;

  GaussianDiagParams() = default;
  GaussianDiagParams(std::vector<double> m, std::vector<double> s)
      : means(std::move(m)), stds(std::move(s)) {
    validate();
  }

  std::size_t dims() const { return means.size(); }

  void validate() const {
    require(!means.empty(), "GaussianDiagParams: dimension must be >= 1");
    require(means.size() == stds.size(),
            "GaussianDiagParams: means and stds must have equal length");
    for (std::size_t j = 0; j < stds.size(); ++j) {
      require(std::isfinite(means[j]), "GaussianDiagParams: non-finite mean");
      require(stds[j] > 0.0 && std::isfinite(stds[j]),
              "GaussianDiagParams: stds[" + std::to_string(j) + "] must be positive");
    }
  }
};

// 2-dimensional Gaussian parametrized by five independent parameters:
// means, covariance eigenvalues, and the rotation angle of the eigenbasis.
struct Gaussian2DParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double alpha = 0.0;  // in [0, pi)

  Gaussian2DParams() = default;
  Gaussian2DParams(double m1, double m2, double l1, double l2, double a)
      : mu1(m1), mu2(m2), lambda1(l1), lambda2(l2), alpha(a) {
    validate();
  }

  // Per-axis standard deviations implied by the eigendecomposition.
  double sigma1() const {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return std::sqrt(lambda1 * c * c + lambda2 * s * s);
  }
  double sigma2() const {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return std::sqrt(lambda1 * s * s + lambda2 * c * c);
  }

  void validate() const {
    require(lambda1 > 0.0 && lambda2 > 0.0,
            "Gaussian2DParams: eigenvalues must be positive");
    require(alpha >= 0.0 && alpha < std::acos(-1.0),
            "Gaussian2DParams: alpha must lie in [0, pi)");
    require(std::isfinite(mu1) && std::isfinite(mu2), "Gaussian2DParams: non-finite mean");
  }
};

// k-dimensional Gaussian with general covariance, stored as eigenvalue square
// roots a_i = sqrt(lambda_i) plus an orthonormal eigenvector basis.  The basis
// plays the role of the k-1 rotation angles: it passes through release
// mechanisms untouched while the eigenvalues are quantized.
struct GaussianGeneralParams {
  std::vector<double> means;
  std::vector<double> eig_sqrt;   // a_i = sqrt(lambda_i), all positive
  std::vector<double> rotation;   // k x k, row-major, orthonormal

  GaussianGeneralParams() = default;
  GaussianGeneralParams(std::vector<double> m, std::vector<double> a, std::vector<double> rot)
      : means(std::move(m)), eig_sqrt(std::move(a)), rotation(std::move(rot)) {
    validate();
  }

  std::size_t dims() const { return means.size(); }

  double rot(std::size_t r, std::size_t c) const { return rotation[r * dims() + c]; }

  // sigma_j = sqrt((R diag(a^2) R^T)_{jj}) = sqrt(sum_i R_{ji}^2 a_i^2)
  double sigma(std::size_t j) const {
    const std::size_t k = dims();
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = rot(j, i);
      acc += r * r * eig_sqrt[i] * eig_sqrt[i];
    }
    return std::sqrt(acc);
  }

  void validate() const {
    const std::size_t k = means.size();
    require(k >= 1, "GaussianGeneralParams: dimension must be >= 1");
    require(eig_sqrt.size() == k, "GaussianGeneralParams: eig_sqrt length mismatch");
    require(rotation.size() == k * k, "GaussianGeneralParams: rotation must be k x k");
    for (double a : eig_sqrt)
      require(a > 0.0, "GaussianGeneralParams: eig_sqrt entries must be positive");
    // Orthonormality within 1e-9: R R^T = I.
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c <= r; ++c) {
        double dot = 0.0;
        for (std::size_t i = 0; i < k; ++i) dot += rot(r, i) * rot(c, i);
        const double want = (r == c) ? 1.0 : 0.0;
        require(std::fabs(dot - want) <= 1e-9,
                "GaussianGeneralParams: rotation is not orthonormal");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Secrets, groups, priors
// ---------------------------------------------------------------------------

enum class ParamKind { Mean, Std };

struct SecretTarget {
  ParamKind kind = ParamKind::Mean;
  std::size_t dim = 0;

  bool operator==(const SecretTarget&) const = default;
};

inline std::string to_string(const SecretTarget& t) {
  return std::string(t.kind == ParamKind::Mean ? "mean" : "std") + "[" +
         std::to_string(t.dim) + "]";
}

// Ordered list of secret statistics g_1..g_d and their tolerance ranges.
struct SecretSpec {
  std::vector<SecretTarget> targets;
  std::vector<double> tolerances;

  SecretSpec() = default;
  SecretSpec(std::vector<SecretTarget> t, std::vector<double> eps)
      : targets(std::move(t)), tolerances(std::move(eps)) {
    validate();
  }

  std::size_t size() const { return targets.size(); }

  bool any_std() const {
    for (const auto& t : targets)
      if (t.kind == ParamKind::Std) return true;
    return false;
  }

  void validate() const {
    require(!targets.empty(), "SecretSpec: at least one secret required");
    require(targets.size() == tolerances.size(),
            "SecretSpec: tolerances must match targets");
    for (std::size_t i = 0; i < targets.size(); ++i)
      require(tolerances[i] > 0.0, "SecretSpec: tolerance for secret " +
                                       std::to_string(i) + " must be positive");
    std::vector<SecretTarget> sorted = targets;
    std::sort(sorted.begin(), sorted.end(), [](const SecretTarget& a, const SecretTarget& b) {
      return a.kind != b.kind ? a.kind < b.kind : a.dim < b.dim;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i)
      require(!(sorted[i - 1] == sorted[i]),
              "SecretSpec: duplicate target " + to_string(sorted[i]));
  }

  void validate_for_dims(std::size_t k) const {
    for (const auto& t : targets)
      require(t.dim < k, "SecretSpec: target " + to_string(t) +
                             " out of range for dimension " + std::to_string(k));
  }
};

// Disjoint grouping of secret indices for the group-secrets metric.
struct GroupPartition {
  std::vector<std::vector<std::size_t>> groups;

  GroupPartition() = default;
  explicit GroupPartition(std::vector<std::vector<std::size_t>> g) : groups(std::move(g)) {
    validate();
  }

  std::size_t n_groups() const { return groups.size(); }

  void validate() const {
    require(!groups.empty(), "GroupPartition: at least one group required");
    std::vector<std::size_t> seen;
    for (const auto& g : groups) {
      require(!g.empty(), "GroupPartition: empty group");
      for (std::size_t i : g) {
        for (std::size_t s : seen)
          require(s != i, "GroupPartition: index " + std::to_string(i) +
                              " appears in more than one group");
        seen.push_back(i);
      }
    }
  }

  // A valid partition for d secrets; full coverage of [d] when required.
  void validate_for(std::size_t d, bool must_cover) const {
    validate();
    std::vector<bool> hit(d, false);
    std::size_t covered = 0;
    for (const auto& g : groups)
      for (std::size_t i : g) {
        require(i < d, "GroupPartition: index out of range");
        hit[i] = true;
        ++covered;
      }
    if (must_cover)
      require(covered == d, "GroupPartition: partition must cover all " +
                                std::to_string(d) + " secrets");
  }

  static GroupPartition singletons(std::size_t d) {
    std::vector<std::vector<std::size_t>> g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = {i};
    return GroupPartition(std::move(g));
  }

  static GroupPartition single_group(std::size_t d) {
    std::vector<std::size_t> all(d);
    for (std::size_t i = 0; i < d; ++i) all[i] = i;
    return GroupPartition({all});
  }
};

// Norm order and tolerance for the lp-norm privacy metric.  p may be infinity.
struct LpSpec {
  double p = 2.0;
  double eps_p = 1.0;

  LpSpec() = default;
  LpSpec(double order, double eps) : p(order), eps_p(eps) { validate(); }

  bool is_inf() const { return std::isinf(p); }

  void validate() const {
    require(p > 0.0, "LpSpec: norm order must be positive (or infinity)");
    require(eps_p > 0.0, "LpSpec: eps_p must be positive");
  }
};

inline double lp_norm(const std::vector<double>& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::fabs(x), p);
  return std::pow(acc, 1.0 / p);
}

// Independent uniform prior box over the secret values, one interval per secret.
struct PriorSpec {
  struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double width() const { return hi - lo; }
  };
  std::vector<Interval> boxes;

  PriorSpec() = default;
  explicit PriorSpec(std::vector<Interval> b) : boxes(std::move(b)) {}

  std::size_t size() const { return boxes.size(); }

  void validate_for(const SecretSpec& spec) const {
    require(boxes.size() == spec.size(), "PriorSpec: one interval per secret required");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      require(std::isfinite(boxes[i].lo) && std::isfinite(boxes[i].hi),
              "PriorSpec: support must be bounded");
      require(boxes[i].hi > boxes[i].lo, "PriorSpec: empty interval for secret " +
                                             std::to_string(i));
      if (spec.targets[i].kind == ParamKind::Std)
        require(boxes[i].lo > 0.0,
                "PriorSpec: std-type secret requires a positive support");
    }
  }
};

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

// m x t matrix of samples, row-major, with column labels.
struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // rows * cols, row-major
  std::vector<std::string> labels;

  Dataset() = default;
  Dataset(std::size_t m, std::size_t t)
      : rows(m), cols(t), values(m * t, 0.0), labels(t) {
    for (std::size_t j = 0; j < t; ++j) labels[j] = "c" + std::to_string(j);
  }

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  void validate() const {
    require(rows >= 2, "Dataset: at least 2 samples required");
    require(cols >= 1, "Dataset: at least 1 column required");
    require(values.size() == rows * cols, "Dataset: storage size mismatch");
    for (double v : values) require(std::isfinite(v), "Dataset: non-finite entry");
  }
};

// ---------------------------------------------------------------------------
// Mechanism configuration
// ---------------------------------------------------------------------------

enum class QuantizationMode {
  RandomOffset,  // Alg. 1: bin left edge + U(0, s)
  Midpoint,      // Alg. 2 / Alg. 3: bin midpoint, deterministic
};

struct MechanismConfig {
  QuantizationMode mode = QuantizationMode::RandomOffset;

  // Random-offset mode: one entry per secret, in SecretSpec order.
  std::vector<double> interval_lengths;
  std::vector<double> lower_anchors;

  // Midpoint mode: one entry per distribution dimension.
  std::vector<double> mean_intervals;
  std::vector<double> mean_anchors;
  std::vector<double> eig_intervals;  // for a_i = sqrt(lambda_i)
  std::vector<double> eig_anchors;

  // Baseline parameters.
  double noise_scale = 0.0;
  double bin_width = 0.0;
};

// ---------------------------------------------------------------------------
// Secret projections g_i(theta)
// ---------------------------------------------------------------------------

inline std::vector<double> secret_values(const GaussianDiagParams& params,
                                         const SecretSpec& spec) {
  spec.validate_for_dims(params.dims());
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    out[i] = (t.kind == ParamKind::Mean) ? params.means[t.dim] : params.stds[t.dim];
  }
  return out;
}

inline std::vector<double> secret_values(const Gaussian2DParams& params,
                                         const SecretSpec& spec) {
  spec.validate_for_dims(2);
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    if (t.kind == ParamKind::Mean)
      out[i] = (t.dim == 0) ? params.mu1 : params.mu2;
    else
      out[i] = (t.dim == 0) ? params.sigma1() : params.sigma2();
  }
  return out;
}

inline std::vector<double> secret_values(const GaussianGeneralParams& params,
                                         const SecretSpec& spec) {
  spec.validate_for_dims(params.dims());
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    out[i] = (t.kind == ParamKind::Mean) ? params.means[t.dim] : params.sigma(t.dim);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Moment estimation
// ---------------------------------------------------------------------------

// Empirical per-column mean and population (1/m) standard deviation.
// Zero-variance columns are kept with sigma = 0 and flagged; converting to
// GaussianDiagParams then fails its positivity invariant.
struct MomentEstimate {
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<bool> degenerate;

  bool any_degenerate() const {
    for (bool b : degenerate)
      if (b) return true;
    return false;
  }

  GaussianDiagParams to_params() const { return GaussianDiagParams(means, stds); }
};

inline MomentEstimate estimate_params(const Dataset& data) {
  data.validate();
  const std::size_t m = data.rows, t = data.cols;
  MomentEstimate est;
  est.means.assign(t, 0.0);
  est.stds.assign(t, 0.0);
  est.degenerate.assign(t, false);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < t; ++c) est.means[c] += data.at(r, c);
  for (std::size_t c = 0; c < t; ++c) est.means[c] /= static_cast<double>(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < t; ++c) {
      const double d = data.at(r, c) - est.means[c];
      est.stds[c] += d * d;
    }
  for (std::size_t c = 0; c < t; ++c) {
    est.stds[c] = std::sqrt(est.stds[c] / static_cast<double>(m));
    if (est.stds[c] == 0.0) est.degenerate[c] = true;
  }
  return est;
}

// Empirical secret values of a dataset under a spec (means / population SDs).
inline std::vector<double> dataset_secret_values(const Dataset& data,
                                                 const SecretSpec& spec) {
  spec.validate_for_dims(data.cols);
  const MomentEstimate est = estimate_params(data);
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    out[i] = (t.kind == ParamKind::Mean) ? est.means[t.dim] : est.stds[t.dim];
  }
  return out;
}

}  // namespace ssp
