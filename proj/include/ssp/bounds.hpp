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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ssp/error.hpp"
#include "ssp/model.hpp"
#include "ssp/privacy.hpp"

namespace ssp {

// Conversion parameter between secret-range aggregates and distributional
// distance.  For Gaussian mean/SD secrets the closed form is sqrt(d)/2 for
// all four metrics; other families must supply their own value.
struct GammaValue {
  Metric metric = Metric::Union;
  double value = 0.0;
  enum class Provenance { GaussianClosedForm, UserSupplied } provenance =
      Provenance::GaussianClosedForm;

  static GammaValue gaussian(Metric m, std::size_t d) {
    GammaValue g;
    g.metric = m;
    g.value = std::sqrt(static_cast<double>(d)) / 2.0;
    g.provenance = Provenance::GaussianClosedForm;
    return g;
  }

  static GammaValue user(Metric m, double v) {
    require(v >= 0.0, "GammaValue: gamma must be nonnegative");
    GammaValue g;
    g.metric = m;
    g.value = v;
    g.provenance = Provenance::UserSupplied;
    return g;
  }
};

namespace detail {

// Ceiling with an absolute/relative guard: formula arguments frequently land
// exactly on integers (e.g. 1/(1-(1-T)^(1/d)) - 1 at T = 19/27), where raw
// std::ceil would jump a whole unit on 1-ulp noise.
inline double ceil_tol(double x) {
  const double r = std::nearbyint(x);
  if (std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(r))) return r;
  return std::ceil(x);
}

inline void check_budget(double t) {
  require(t > 0.0 && t < 1.0, "bounds: privacy budget T must lie in (0, 1)");
}

inline void check_eps(const std::vector<double>& eps) {
  require(!eps.empty(), "bounds: at least one tolerance required");
  for (double e : eps) require(e > 0.0, "bounds: tolerances must be positive");
}

inline double geo_mean(const std::vector<double>& eps) {
  double acc = 0.0;
  for (double e : eps) acc += std::log(e);
  return std::exp(acc / static_cast<double>(eps.size()));
}

inline double arith_mean(const std::vector<double>& eps) {
  double acc = 0.0;
  for (double e : eps) acc += e;
  return acc / static_cast<double>(eps.size());
}

}  // namespace detail

// Union privacy: Delta > 2 gamma ceil(1/(1-(1-T)^(1/d)) - 1) (prod eps)^(1/d).
// proof_form = true keeps the intermediate (tighter) ceiling
// ceil((1-T)^(1/d) * ceil(1/(1-(1-T)^(1/d)))) from the derivation.
inline double lower_bound_union(double t, const std::vector<double>& eps,
                                const GammaValue& gamma, bool proof_form = false) {
  detail::check_budget(t);
  detail::check_eps(eps);
  const auto d = static_cast<double>(eps.size());
  const double root = std::pow(1.0 - t, 1.0 / d);
  const double u = 1.0 / (1.0 - root);
  const double ceil_term =
      proof_form ? detail::ceil_tol(root * detail::ceil_tol(u)) : detail::ceil_tol(u - 1.0);
  return 2.0 * gamma.value * ceil_term * detail::geo_mean(eps);
}

// Intersection privacy: Delta > 2 gamma (ceil(1/T)^(1/d) (prod eps)^(1/d)
//                                        - (1/d) sum eps).
inline double lower_bound_inter(double t, const std::vector<double>& eps,
                                const GammaValue& gamma) {
  detail::check_budget(t);
  detail::check_eps(eps);
  const auto d = static_cast<double>(eps.size());
  const double n_term = std::pow(detail::ceil_tol(1.0 / t), 1.0 / d);
  return 2.0 * gamma.value * (n_term * detail::geo_mean(eps) - detail::arith_mean(eps));
}

// Group-secrets privacy with beta = |B| groups.  The attacker-count bound
// from the proof is N >= ceil(1/(1-(1-T)^(1/beta))^beta); its d-th root is
// used here, which reduces exactly to the intersection expression at
// beta = 1 and never exceeds the union expression at beta = d.
inline double lower_bound_group(double t, const std::vector<double>& eps,
                                const GroupPartition& partition, const GammaValue& gamma) {
  detail::check_budget(t);
  detail::check_eps(eps);
  partition.validate_for(eps.size(), /*must_cover=*/true);
  const auto d = static_cast<double>(eps.size());
  const auto beta = static_cast<double>(partition.n_groups());
  const double inner = 1.0 / (1.0 - std::pow(1.0 - t, 1.0 / beta));
  const double n_term = std::pow(detail::ceil_tol(std::pow(inner, beta)), 1.0 / d);
  return 2.0 * gamma.value * (n_term * detail::geo_mean(eps) - detail::arith_mean(eps));
}

// lp-norm privacy: Delta > 2 gamma (ceil(1/T)^(1/d) - 1) eps_p / d^(1/p).
inline double lower_bound_lp(double t, const LpSpec& lp, std::size_t d,
                             const GammaValue& gamma) {
  detail::check_budget(t);
  lp.validate();
  require(d >= 1, "lower_bound_lp: d must be at least 1");
  const auto dd = static_cast<double>(d);
  const double n_term = std::pow(detail::ceil_tol(1.0 / t), 1.0 / dd);
  const double scale = lp.is_inf() ? 1.0 : std::pow(dd, 1.0 / lp.p);
  return 2.0 * gamma.value * (n_term - 1.0) * lp.eps_p / scale;
}

// ---------------------------------------------------------------------------
// Surrogate bound lines: Delta_tilde >= -c * Pi_tilde
// ---------------------------------------------------------------------------

// Coefficient c for each surrogate metric (mean-type secrets), generalized
// from the three-secret derivations to any d by the same Cauchy-Schwarz
// steps:
//   union:  sqrt(sum eps_i^2)
//   inter:  min eps_i
//   group:  sqrt(sum over groups of min_{i in group} eps_i^2)
//   lp:     eps_p / d^max(0, 1/p - 1/2)   (l1 -> eps_p / sqrt(d), linf -> eps_p)
inline double surrogate_bound_line(Metric metric, const std::vector<double>& eps,
                                   const GroupPartition* partition = nullptr,
                                   const LpSpec* lp = nullptr) {
  switch (metric) {
    case Metric::Union: {
      detail::check_eps(eps);
      double acc = 0.0;
      for (double e : eps) acc += e * e;
      return std::sqrt(acc);
    }
    case Metric::Intersection: {
      detail::check_eps(eps);
      double m = eps[0];
      for (double e : eps) m = std::min(m, e);
      return m;
    }
    case Metric::Group: {
      detail::check_eps(eps);
      require(partition != nullptr, "surrogate_bound_line: group metric needs a partition");
      partition->validate_for(eps.size(), /*must_cover=*/false);
      double acc = 0.0;
      for (const auto& g : partition->groups) {
        double m = eps[g.front()];
        for (std::size_t i : g) m = std::min(m, eps[i]);
        acc += m * m;
      }
      return std::sqrt(acc);
    }
    case Metric::Lp: {
      require(lp != nullptr, "surrogate_bound_line: lp metric needs an LpSpec");
      lp->validate();
      const auto d = static_cast<double>(eps.size());
      require(d >= 1.0, "surrogate_bound_line: lp metric needs the secret count via eps");
      const double expo = lp->is_inf() ? 0.0 : std::max(0.0, 1.0 / lp->p - 0.5);
      return lp->eps_p / std::pow(d, expo);
    }
  }
  fail("surrogate_bound_line: unreachable");
}

// ---------------------------------------------------------------------------
// Adaptive composition
// ---------------------------------------------------------------------------

// Privacy of m adaptively composed releases over a finite parameter set with
// prior mass bounds sup = a, inf = b:  Pi <= min(1, a * prod(Pi_i / b)).
inline double composition_bound(const std::vector<double>& per_mechanism_privacy,
                                double prior_sup, double prior_inf) {
  require(!per_mechanism_privacy.empty(), "composition_bound: need at least one mechanism");
  require(prior_inf > 0.0, "composition_bound: prior infimum b must be positive");
  require(prior_sup < 1.0, "composition_bound: prior supremum a must be below 1");
  require(prior_inf <= prior_sup, "composition_bound: b must not exceed a");
  double acc = prior_sup;
  for (double pi : per_mechanism_privacy) {
    require(pi > 0.0 && pi <= 1.0, "composition_bound: per-mechanism privacy must lie in (0,1]");
    acc *= pi / prior_inf;
  }
  return std::min(1.0, acc);
}

}  // namespace ssp
