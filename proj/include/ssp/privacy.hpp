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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ssp/error.hpp"
#include "ssp/mechanisms.hpp"
#include "ssp/model.hpp"
#include "ssp/rng.hpp"

namespace ssp {

enum class Metric { Union, Intersection, Group, Lp };
enum class Method { Analytic, Surrogate, MonteCarlo };
enum class Attacker { Grid, PosteriorBin };

inline std::string to_string(Metric m) {
  switch (m) {
    case Metric::Union: return "union";
    case Metric::Intersection: return "inter";
    case Metric::Group: return "group";
    case Metric::Lp: return "lp";
  }
  return "?";
}

inline Metric metric_from_string(const std::string& s) {
  if (s == "union") return Metric::Union;
  if (s == "inter" || s == "intersection") return Metric::Intersection;
  if (s == "group") return Metric::Group;
  if (s == "lp") return Metric::Lp;
  fail("unknown metric '" + s + "'");
}

struct PrivacyReport {
  Metric metric = Metric::Union;
  double value = 0.0;
  Method method = Method::Analytic;
  std::optional<double> half_width;  // Monte-Carlo only, 95% normal approx
  bool is_upper_bound = false;       // analytic lp bound is an upper bound
  std::string attacker;              // Monte-Carlo only
  std::string config_echo;
  std::string note;
};

namespace detail {

inline std::string echo_intervals(const MechanismConfig& cfg) {
  std::string s = "s=[";
  for (std::size_t i = 0; i < cfg.interval_lengths.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(cfg.interval_lengths[i]);
  }
  return s + "]";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Analytic mechanism privacy under independent uniform priors (Alg. 1)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> per_secret_ratios(const SecretSpec& spec,
                                             const MechanismConfig& cfg,
                                             const std::vector<double>& eps) {
  require(cfg.interval_lengths.size() == spec.size(),
          "analytic_privacy_alg1: config must carry one interval per secret");
  std::vector<double> q(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double s = cfg.interval_lengths[i];
    require(s > 0.0, "analytic_privacy_alg1: interval lengths must be positive");
    require(2.0 * eps[i] <= s,
            "analytic_privacy_alg1: formula requires 2*eps <= s for secret " +
                std::to_string(i));
    q[i] = 2.0 * eps[i] / s;
  }
  return q;
}

}  // namespace detail

// Closed-form privacy of the random-offset quantization mechanism assuming
// each secret parameter has an independent uniform prior:
//   union:  1 - prod(1 - 2 eps_i / s_i)
//   inter:  prod(2 eps_i / s_i)
//   group:  1 - prod_b (1 - prod_{i in b} 2 eps_i / s_i)
//   lp:     1 - prod(1 - 2 eps_p / (d^(1/p) s_i)), an upper bound
inline PrivacyReport analytic_privacy_alg1(const SecretSpec& spec, const MechanismConfig& cfg,
                                           Metric metric,
                                           const GroupPartition* partition = nullptr,
                                           const LpSpec* lp = nullptr) {
  spec.validate();
  const std::size_t d = spec.size();
  PrivacyReport rep;
  rep.metric = metric;
  rep.method = Method::Analytic;
  rep.config_echo = detail::echo_intervals(cfg);
  switch (metric) {
    case Metric::Union: {
      const auto q = detail::per_secret_ratios(spec, cfg, spec.tolerances);
      double miss = 1.0;
      for (double qi : q) miss *= 1.0 - qi;
      rep.value = 1.0 - miss;
      break;
    }
    case Metric::Intersection: {
      const auto q = detail::per_secret_ratios(spec, cfg, spec.tolerances);
      double hit = 1.0;
      for (double qi : q) hit *= qi;
      rep.value = hit;
      break;
    }
    case Metric::Group: {
      require(partition != nullptr, "analytic_privacy_alg1: group metric needs a partition");
      partition->validate_for(d, /*must_cover=*/true);
      const auto q = detail::per_secret_ratios(spec, cfg, spec.tolerances);
      double miss = 1.0;
      for (const auto& g : partition->groups) {
        double hit = 1.0;
        for (std::size_t i : g) hit *= q[i];
        miss *= 1.0 - hit;
      }
      rep.value = 1.0 - miss;
      break;
    }
    case Metric::Lp: {
      require(lp != nullptr, "analytic_privacy_alg1: lp metric needs an LpSpec");
      lp->validate();
      const double scale = lp->is_inf() ? 1.0 : std::pow(static_cast<double>(d), 1.0 / lp->p);
      const std::vector<double> eps(d, lp->eps_p / scale);
      const auto q = detail::per_secret_ratios(spec, cfg, eps);
      double miss = 1.0;
      for (double qi : q) miss *= 1.0 - qi;
      rep.value = 1.0 - miss;
      rep.is_upper_bound = true;
      rep.note = "upper bound";
      break;
    }
  }
  return rep;
}

// Upper bound on the privacy of the 2-D midpoint mechanism (general Gaussian),
// P_mu + P_sigma - P_mu * P_sigma, under uniform priors on mu1, mu2, sqrt(l1),
// sqrt(l2).  alpha enters through the secret-to-eigenvalue geometry; the
// cos^2/sin^2 symmetry lets angles be folded into [0, pi/2].
inline PrivacyReport analytic_privacy_alg2_upper(const SecretSpec& spec,
                                                 const MechanismConfig& cfg, double alpha) {
  spec.validate();
  spec.validate_for_dims(2);
  require(cfg.mean_intervals.size() == 2 && cfg.eig_intervals.size() == 2,
          "analytic_privacy_alg2_upper: config must carry intervals for mu1, mu2, a, b");
  const double ca = std::fabs(std::cos(alpha));
  const double sa = std::fabs(std::sin(alpha));
  const double s_a = cfg.eig_intervals[0];
  const double s_b = cfg.eig_intervals[1];

  bool mu_secret[2] = {false, false};
  bool sigma_secret[2] = {false, false};
  double eps_mu[2] = {0.0, 0.0};
  double eps_sigma[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    if (t.kind == ParamKind::Mean) {
      mu_secret[t.dim] = true;
      eps_mu[t.dim] = spec.tolerances[i];
    } else {
      sigma_secret[t.dim] = true;
      eps_sigma[t.dim] = spec.tolerances[i];
    }
  }

  double p_mu = 1.0;
  for (int j = 0; j < 2; ++j) {
    if (!mu_secret[j]) continue;
    require(2.0 * eps_mu[j] <= cfg.mean_intervals[j],
            "analytic_privacy_alg2_upper: 2*eps must not exceed the mean interval");
    p_mu *= 1.0 - 2.0 * eps_mu[j] / cfg.mean_intervals[j];
  }
  p_mu = 1.0 - p_mu;

  const auto bound_from = [&](double la, double lb) {
    if (la <= 0.0 || lb <= 0.0) return 1.0;
    return 1.0 - 0.5 * la * lb / (s_a * s_b);
  };
  const double root2 = std::sqrt(2.0);
  double p_sigma = 0.0;
  if (sigma_secret[0] && !sigma_secret[1]) {
    const double e = eps_sigma[0];
    p_sigma = bound_from(s_a - 2.0 * e / ca - root2 * e * ca,
                         s_b - 2.0 * e / sa - root2 * e * sa);
  } else if (!sigma_secret[0] && sigma_secret[1]) {
    const double e = eps_sigma[1];
    p_sigma = bound_from(s_a - 2.0 * e / sa - root2 * e * sa,
                         s_b - 2.0 * e / ca - root2 * e * ca);
  } else if (sigma_secret[0] && sigma_secret[1]) {
    const double e1 = eps_sigma[0], e2 = eps_sigma[1];
    const double la = s_a - std::max(e1 / ca, e2 / sa) -
                      std::max(e1 / ca + root2 * e1 * ca, e2 / sa + root2 * e2 * sa);
    const double lb = s_b - std::max(e1 / sa, e2 / ca) -
                      std::max(e1 / sa + root2 * e1 * sa, e2 / ca + root2 * e2 * ca);
    p_sigma = bound_from(la, lb);
  }

  PrivacyReport rep;
  rep.metric = Metric::Union;
  rep.method = Method::Analytic;
  rep.value = p_mu + p_sigma - p_mu * p_sigma;
  rep.is_upper_bound = true;
  rep.note = "upper bound";
  return rep;
}

// ---------------------------------------------------------------------------
// Surrogate (dataset-level) privacy
// ---------------------------------------------------------------------------

namespace detail {

inline double surrogate_from_errors(const std::vector<double>& neg_norm_err, Metric metric,
                                    const GroupPartition* partition) {
  switch (metric) {
    case Metric::Union:
      return *std::max_element(neg_norm_err.begin(), neg_norm_err.end());
    case Metric::Intersection:
      return *std::min_element(neg_norm_err.begin(), neg_norm_err.end());
    case Metric::Group: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& g : partition->groups) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i : g) worst = std::min(worst, neg_norm_err[i]);
        best = std::max(best, worst);
      }
      return best;
    }
    default:
      fail("surrogate_from_errors: lp handled separately");
  }
}

}  // namespace detail

// Negated normalized secret error between two datasets; always <= 0 and
// smaller values mean stronger privacy.
inline PrivacyReport surrogate_privacy(const Dataset& x, const Dataset& y,
                                       const SecretSpec& spec, Metric metric,
                                       const GroupPartition* partition = nullptr,
                                       const LpSpec* lp = nullptr) {
  spec.validate();
  require(x.cols == y.cols, "surrogate_privacy: datasets have different widths");
  const auto gx = dataset_secret_values(x, spec);
  const auto gy = dataset_secret_values(y, spec);

  PrivacyReport rep;
  rep.metric = metric;
  rep.method = Method::Surrogate;
  if (metric == Metric::Lp) {
    require(lp != nullptr, "surrogate_privacy: lp metric needs an LpSpec");
    lp->validate();
    std::vector<double> diff(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) diff[i] = gx[i] - gy[i];
    rep.value = -lp_norm(diff, lp->p) / lp->eps_p;
    return rep;
  }
  if (metric == Metric::Group) {
    require(partition != nullptr, "surrogate_privacy: group metric needs a partition");
    partition->validate_for(spec.size(), /*must_cover=*/false);
  }
  std::vector<double> neg(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i)
    neg[i] = -std::fabs(gx[i] - gy[i]) / spec.tolerances[i];
  rep.value = detail::surrogate_from_errors(neg, metric, partition);
  return rep;
}

// ---------------------------------------------------------------------------
// Grid attackers (lower-bound proof construction)
// ---------------------------------------------------------------------------

// Product family of constant attackers guessing the midpoints of a
// 2*eps segmentation of each secret's support.  None of them reads the
// released parameter.
struct GridAttackerFamily {
  std::vector<std::vector<double>> midpoints;  // per secret, N_i midpoints
  std::size_t total = 1;                       // prod N_i

  std::size_t secrets() const { return midpoints.size(); }
};

inline GridAttackerFamily grid_attackers(const PriorSpec& support, const SecretSpec& spec) {
  spec.validate();
  support.validate_for(spec);
  GridAttackerFamily fam;
  fam.midpoints.resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double lo = support.boxes[i].lo;
    const double width = support.boxes[i].width();
    const double eps = spec.tolerances[i];
    const auto n = static_cast<std::size_t>(std::ceil(width / (2.0 * eps) - 1e-12));
    const std::size_t count = std::max<std::size_t>(1, n);
    fam.midpoints[i].resize(count);
    for (std::size_t v = 0; v < count; ++v)
      fam.midpoints[i][v] = lo + (static_cast<double>(v) + 0.5) * 2.0 * eps;
    fam.total *= count;
  }
  return fam;
}

// Fallback support when only a dataset is available: per-secret empirical
// range widened by one tolerance.  Mean secrets use the column value range;
// std secrets use [~0, column range / 2], the largest SD a distribution on
// that range can have.  Heuristic, documented as such; not a true prior.
inline PriorSpec empirical_grid_support(const Dataset& data, const SecretSpec& spec) {
  spec.validate();
  spec.validate_for_dims(data.cols);
  PriorSpec prior;
  prior.boxes.resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.targets[i];
    double lo = data.at(0, t.dim), hi = data.at(0, t.dim);
    for (std::size_t r = 1; r < data.rows; ++r) {
      lo = std::min(lo, data.at(r, t.dim));
      hi = std::max(hi, data.at(r, t.dim));
    }
    const double eps = spec.tolerances[i];
    if (t.kind == ParamKind::Mean) {
      prior.boxes[i] = {lo - eps, hi + eps};
    } else {
      const double sd_cap = (hi - lo) / 2.0;
      prior.boxes[i] = {std::numeric_limits<double>::min(), sd_cap + eps};
    }
  }
  return prior;
}

// ---------------------------------------------------------------------------
// Monte-Carlo privacy estimation
// ---------------------------------------------------------------------------

struct McOptions {
  std::size_t n_trials = 100000;
  std::uint64_t seed = 0;
  Attacker attacker = Attacker::PosteriorBin;
  std::size_t n_workers = 0;  // 0 = hardware concurrency
};

namespace detail {

struct McCounts {
  std::uint64_t union_ = 0;
  std::uint64_t inter = 0;
  std::uint64_t group = 0;
  std::uint64_t lp = 0;
};

// Posterior-bin guess: the optimal window inside (released bin intersected
// with the prior support) under a uniform prior.
inline double posterior_bin_guess(double released, double anchor, double s, double lo,
                                  double hi, double eps) {
  const std::int64_t idx = bin_index(released, anchor, s);
  const double left = std::max(anchor + static_cast<double>(idx) * s, lo);
  const double right = std::min(anchor + static_cast<double>(idx + 1) * s, hi);
  if (right - left <= 2.0 * eps) return 0.5 * (left + right);
  const double bin_mid = anchor + (static_cast<double>(idx) + 0.5) * s;
  return std::clamp(bin_mid, left + eps, right - eps);
}

struct McContext {
  const SecretSpec* spec;
  const MechanismConfig* cfg;
  const PriorSpec* prior;
  const GroupPartition* partition;  // may be null
  const LpSpec* lp;                 // may be null
  const GridAttackerFamily* grid;   // grid attacker only
};

// One worker block: trials [begin, end).  Per-trial RNG streams make the
// result independent of how trials are distributed over workers.
inline void mc_block_posterior(const McContext& ctx, std::uint64_t seed, std::size_t begin,
                               std::size_t end, McCounts& out) {
  const std::size_t d = ctx.spec->size();
  Rng base(seed);
  std::vector<double> g(d), guess(d);
  for (std::size_t trial = begin; trial < end; ++trial) {
    Rng r = base.stream(trial);
    for (std::size_t i = 0; i < d; ++i)
      g[i] = r.uniform(ctx.prior->boxes[i].lo, ctx.prior->boxes[i].hi);
    bool all = true, any = false;
    for (std::size_t i = 0; i < d; ++i) {
      const double released = quantize_random_offset(g[i], ctx.cfg->lower_anchors[i],
                                                     ctx.cfg->interval_lengths[i], r.next_unit());
      guess[i] = posterior_bin_guess(released, ctx.cfg->lower_anchors[i],
                                     ctx.cfg->interval_lengths[i], ctx.prior->boxes[i].lo,
                                     ctx.prior->boxes[i].hi, ctx.spec->tolerances[i]);
      const bool hit = std::fabs(guess[i] - g[i]) <= ctx.spec->tolerances[i];
      all = all && hit;
      any = any || hit;
    }
    if (any) ++out.union_;
    if (all) ++out.inter;
    if (ctx.partition) {
      bool ghit = false;
      for (const auto& grp : ctx.partition->groups) {
        bool whole = true;
        for (std::size_t i : grp)
          whole = whole && std::fabs(guess[i] - g[i]) <= ctx.spec->tolerances[i];
        if (whole) {
          ghit = true;
          break;
        }
      }
      if (ghit) ++out.group;
    }
    if (ctx.lp) {
      std::vector<double> diff(d);
      for (std::size_t i = 0; i < d; ++i) diff[i] = guess[i] - g[i];
      if (lp_norm(diff, ctx.lp->p) <= ctx.lp->eps_p) ++out.lp;
    }
  }
}

// Grid-attacker block: per-attacker success counts for each metric event.
// counts layout: attacker-major, 4 event slots each.
inline void mc_block_grid(const McContext& ctx, std::uint64_t seed, std::size_t begin,
                          std::size_t end, std::vector<std::uint64_t>& counts) {
  const std::size_t d = ctx.spec->size();
  const auto& fam = *ctx.grid;
  Rng base(seed);
  std::vector<double> g(d);
  std::vector<std::vector<char>> hit(d);
  std::vector<std::vector<double>> dist(d);
  for (std::size_t i = 0; i < d; ++i) {
    hit[i].resize(fam.midpoints[i].size());
    dist[i].resize(fam.midpoints[i].size());
  }
  std::vector<std::size_t> v(d, 0);
  for (std::size_t trial = begin; trial < end; ++trial) {
    Rng r = base.stream(trial);
    for (std::size_t i = 0; i < d; ++i)
      g[i] = r.uniform(ctx.prior->boxes[i].lo, ctx.prior->boxes[i].hi);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < fam.midpoints[i].size(); ++j) {
        dist[i][j] = std::fabs(fam.midpoints[i][j] - g[i]);
        hit[i][j] = dist[i][j] <= ctx.spec->tolerances[i] ? 1 : 0;
      }
    std::fill(v.begin(), v.end(), 0);
    for (std::size_t a = 0; a < fam.total; ++a) {
      bool all = true, any = false;
      for (std::size_t i = 0; i < d; ++i) {
        const bool h = hit[i][v[i]] != 0;
        all = all && h;
        any = any || h;
      }
      std::uint64_t* slot = counts.data() + 4 * a;
      if (any) ++slot[0];
      if (all) ++slot[1];
      if (ctx.partition) {
        bool ghit = false;
        for (const auto& grp : ctx.partition->groups) {
          bool whole = true;
          for (std::size_t i : grp) whole = whole && hit[i][v[i]] != 0;
          if (whole) {
            ghit = true;
            break;
          }
        }
        if (ghit) ++slot[2];
      }
      if (ctx.lp) {
        std::vector<double> diff(d);
        for (std::size_t i = 0; i < d; ++i) diff[i] = dist[i][v[i]];
        if (lp_norm(diff, ctx.lp->p) <= ctx.lp->eps_p) ++slot[3];
      }
      // next attacker in mixed-radix order
      for (std::size_t i = 0; i < d; ++i) {
        if (++v[i] < fam.midpoints[i].size()) break;
        v[i] = 0;
      }
    }
  }
}

template <typename BlockFn>
inline void run_blocks(std::size_t n_trials, std::size_t n_workers, BlockFn&& fn) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t n_blocks = (n_trials + kBlock - 1) / kBlock;
  std::size_t workers = n_workers ? n_workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, n_blocks);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::size_t begin = b * kBlock;
      const std::size_t end = std::min(begin + kBlock, n_trials);
      fn(b, begin, end);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
}

struct McResult {
  double union_ = 0, inter = 0, group = 0, lp = 0;
  double hw_union = 0, hw_inter = 0, hw_group = 0, hw_lp = 0;
};

inline double half_width(double p, std::size_t n) {
  return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

inline McResult mc_estimate(const McContext& ctx, const McOptions& opt) {
  McResult res;
  const std::size_t n = opt.n_trials;
  if (ctx.grid == nullptr) {
    constexpr std::size_t kBlock = 4096;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<McCounts> per_block(n_blocks);
    run_blocks(n, opt.n_workers, [&](std::size_t b, std::size_t begin, std::size_t end) {
      mc_block_posterior(ctx, opt.seed, begin, end, per_block[b]);
    });
    McCounts total;
    for (const auto& c : per_block) {
      total.union_ += c.union_;
      total.inter += c.inter;
      total.group += c.group;
      total.lp += c.lp;
    }
    res.union_ = static_cast<double>(total.union_) / static_cast<double>(n);
    res.inter = static_cast<double>(total.inter) / static_cast<double>(n);
    res.group = static_cast<double>(total.group) / static_cast<double>(n);
    res.lp = static_cast<double>(total.lp) / static_cast<double>(n);
  } else {
    const std::size_t slots = 4 * ctx.grid->total;
    constexpr std::size_t kBlock = 4096;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<std::uint64_t>> per_block(n_blocks);
    run_blocks(n, opt.n_workers, [&](std::size_t b, std::size_t begin, std::size_t end) {
      per_block[b].assign(slots, 0);
      mc_block_grid(ctx, opt.seed, begin, end, per_block[b]);
    });
    std::vector<std::uint64_t> total(slots, 0);
    for (const auto& blk : per_block)
      for (std::size_t i = 0; i < slots; ++i) total[i] += blk[i];
    std::uint64_t best[4] = {0, 0, 0, 0};
    for (std::size_t a = 0; a < ctx.grid->total; ++a)
      for (int e = 0; e < 4; ++e) best[e] = std::max(best[e], total[4 * a + e]);
    res.union_ = static_cast<double>(best[0]) / static_cast<double>(n);
    res.inter = static_cast<double>(best[1]) / static_cast<double>(n);
    res.group = static_cast<double>(best[2]) / static_cast<double>(n);
    res.lp = static_cast<double>(best[3]) / static_cast<double>(n);
  }
  res.hw_union = half_width(res.union_, n);
  res.hw_inter = half_width(res.inter, n);
  res.hw_group = half_width(res.group, n);
  res.hw_lp = half_width(res.lp, n);
  return res;
}

}  // namespace detail

// Estimates for all four metrics from one set of trials (shared attacker
// guesses, so the per-trial event containments inter <= lp <= union carry
// over to the estimates exactly).
struct McAllMetrics {
  PrivacyReport union_;
  PrivacyReport inter;
  std::optional<PrivacyReport> group;
  std::optional<PrivacyReport> lp;
};

inline McAllMetrics monte_carlo_privacy_all(MechanismId mech, const MechanismConfig& cfg,
                                            const PriorSpec& prior, const SecretSpec& spec,
                                            const GroupPartition* partition, const LpSpec* lp,
                                            const McOptions& opt) {
  spec.validate();
  prior.validate_for(spec);
  require(opt.n_trials >= 1000, "monte_carlo_privacy: need at least 1e3 trials");
  if (opt.attacker == Attacker::PosteriorBin)
    require(mech == MechanismId::Alg1,
            "monte_carlo_privacy: the posterior-bin attacker is only optimal for Alg. 1; "
            "its optimality claim does not transfer to other mechanisms");
  detail::check_secret_cfg(spec, cfg);
  if (partition) partition->validate_for(spec.size(), /*must_cover=*/true);
  if (lp) lp->validate();

  GridAttackerFamily fam;
  detail::McContext ctx{&spec, &cfg, &prior, partition, lp, nullptr};
  if (opt.attacker == Attacker::Grid) {
    fam = grid_attackers(prior, spec);
    require(fam.total <= (1u << 20),
            "monte_carlo_privacy: grid attacker family too large (" +
                std::to_string(fam.total) + ")");
    ctx.grid = &fam;
  }
  const detail::McResult r = detail::mc_estimate(ctx, opt);

  const std::string attacker_name =
      opt.attacker == Attacker::Grid ? "grid" : "posterior-bin";
  const std::string echo = detail::echo_intervals(cfg) + ", trials=" +
                           std::to_string(opt.n_trials) + ", seed=" +
                           std::to_string(opt.seed);
  auto mk = [&](Metric m, double v, double hw) {
    PrivacyReport rep;
    rep.metric = m;
    rep.method = Method::MonteCarlo;
    rep.value = v;
    rep.half_width = hw;
    rep.attacker = attacker_name;
    rep.config_echo = echo;
    return rep;
  };
  McAllMetrics out;
  out.union_ = mk(Metric::Union, r.union_, r.hw_union);
  out.inter = mk(Metric::Intersection, r.inter, r.hw_inter);
  if (partition) out.group = mk(Metric::Group, r.group, r.hw_group);
  if (lp) out.lp = mk(Metric::Lp, r.lp, r.hw_lp);
  return out;
}

inline PrivacyReport monte_carlo_privacy(MechanismId mech, const MechanismConfig& cfg,
                                         const PriorSpec& prior, const SecretSpec& spec,
                                         Metric metric,
                                         const GroupPartition* partition = nullptr,
                                         const LpSpec* lp = nullptr,
                                         const McOptions& opt = {}) {
  if (metric == Metric::Group)
    require(partition != nullptr, "monte_carlo_privacy: group metric needs a partition");
  if (metric == Metric::Lp)
    require(lp != nullptr, "monte_carlo_privacy: lp metric needs an LpSpec");
  const McAllMetrics all =
      monte_carlo_privacy_all(mech, cfg, prior, spec, partition, lp, opt);
  switch (metric) {
    case Metric::Union: return all.union_;
    case Metric::Intersection: return all.inter;
    case Metric::Group: return *all.group;
    case Metric::Lp: return *all.lp;
  }
  fail("monte_carlo_privacy: unreachable");
}

// ---------------------------------------------------------------------------
// Multi-shot attack (single secret, d guesses)
// ---------------------------------------------------------------------------

// The attacker fires n_guesses guesses: the distinct grid midpoints nearest
// the bin implied by the released parameter.  Success counts if any guess
// lands within the tolerance; nondecreasing in n_guesses.
inline PrivacyReport multi_shot_privacy(const MechanismConfig& cfg, const PriorSpec& prior,
                                        const SecretSpec& spec, std::size_t n_guesses,
                                        const McOptions& opt = {}) {
  spec.validate();
  require(spec.size() == 1, "multi_shot_privacy: exactly one underlying secret");
  prior.validate_for(spec);
  require(n_guesses >= 1, "multi_shot_privacy: need at least one guess");
  require(opt.n_trials >= 1000, "multi_shot_privacy: need at least 1e3 trials");
  detail::check_secret_cfg(spec, cfg);

  const GridAttackerFamily fam = grid_attackers(prior, spec);
  const auto& mids = fam.midpoints[0];
  std::string note;
  if (n_guesses > mids.size()) {
    note = "n_guesses clamped to grid size " + std::to_string(mids.size());
    n_guesses = mids.size();
  }

  const double eps = spec.tolerances[0];
  const double lo = prior.boxes[0].lo, hi = prior.boxes[0].hi;
  const double anchor = cfg.lower_anchors[0], s = cfg.interval_lengths[0];

  constexpr std::size_t kBlock = 4096;
  const std::size_t n = opt.n_trials;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> per_block(n_blocks, 0);
  detail::run_blocks(n, opt.n_workers, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng base(opt.seed);
    std::vector<std::pair<double, std::size_t>> order(mids.size());
    std::uint64_t hits = 0;
    for (std::size_t trial = begin; trial < end; ++trial) {
      Rng r = base.stream(trial);
      const double g = r.uniform(lo, hi);
      const double released = detail::quantize_random_offset(g, anchor, s, r.next_unit());
      const double bin_mid =
          anchor + (static_cast<double>(detail::bin_index(released, anchor, s)) + 0.5) * s;
      for (std::size_t j = 0; j < mids.size(); ++j)
        order[j] = {std::fabs(mids[j] - bin_mid), j};
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_guesses),
                        order.end());
      bool hit = false;
      for (std::size_t q = 0; q < n_guesses && !hit; ++q)
        hit = std::fabs(mids[order[q].second] - g) <= eps;
      if (hit) ++hits;
    }
    per_block[b] = hits;
  });
  std::uint64_t total = 0;
  for (std::uint64_t h : per_block) total += h;

  PrivacyReport rep;
  rep.metric = Metric::Union;
  rep.method = Method::MonteCarlo;
  rep.value = static_cast<double>(total) / static_cast<double>(n);
  rep.half_width = detail::half_width(rep.value, n);
  rep.attacker = "multi-shot-grid";
  rep.config_echo = detail::echo_intervals(cfg) + ", guesses=" + std::to_string(n_guesses) +
                    ", trials=" + std::to_string(n) + ", seed=" + std::to_string(opt.seed);
  rep.note = note;
  return rep;
}

}  // namespace ssp
