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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ssp/bounds.hpp"
#include "ssp/csv.hpp"
#include "ssp/distortion.hpp"
#include "ssp/error.hpp"
#include "ssp/mechanisms.hpp"
#include "ssp/model.hpp"
#include "ssp/privacy.hpp"
#include "ssp/rng.hpp"

namespace ssp {

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

// Web-traffic-like synthetic profile: independent Gaussian columns.  Secret
// columns get the supplied means (defaults 15, 68, 54); every column uses
// kSyntheticDefaultSd unless overridden; remaining columns use
// kSyntheticDefaultMean.
inline constexpr double kSyntheticDefaultSd = 10.0;
inline constexpr double kSyntheticDefaultMean = 100.0;

inline const std::vector<double>& default_secret_means() {
  static const std::vector<double> kMeans{15.0, 68.0, 54.0};
  return kMeans;
}

inline Dataset generate_synthetic(std::size_t m, std::size_t t,
                                  const std::vector<double>& secret_means,
                                  std::uint64_t seed,
                                  const std::vector<double>& sds = {}) {
  require(m >= 2, "generate_synthetic: need at least 2 samples");
  require(t >= 1, "generate_synthetic: need at least 1 column");
  require(secret_means.size() <= t,
          "generate_synthetic: more secret means than columns");
  require(sds.empty() || sds.size() == t,
          "generate_synthetic: sds must be empty or one per column");
  Dataset d(m, t);
  Rng base(seed);
  for (std::size_t c = 0; c < t; ++c) {
    const double mean =
        c < secret_means.size() ? secret_means[c] : kSyntheticDefaultMean;
    const double sd = sds.empty() ? kSyntheticDefaultSd : sds[c];
    require(sd > 0.0, "generate_synthetic: sds must be positive");
    Rng r = base.stream(c);
    for (std::size_t i = 0; i < m; ++i) d.at(i, c) = r.gaussian(mean, sd);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Tradeoff records
// ---------------------------------------------------------------------------

// One mechanism realization.  The primary (distortion, privacy) pair is
// computed on one seeded row subsample of both datasets so the surrogate
// bound inequalities hold for it as theorems; full-data surrogate privacy
// and the sliced full-data distortion ride along for reference.
struct TradeoffRecord {
  std::string mechanism;
  double hyper = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_sub = 0;
  std::string estimator;  // estimator behind `distortion`

  double distortion = 0.0;         // exact W2 on the subsample pair
  double distortion_sliced = 0.0;  // sliced W2 on the full pair

  double privacy_union = 0.0, privacy_inter = 0.0, privacy_group = 0.0;
  double privacy_l1 = 0.0, privacy_linf = 0.0;

  double privacy_full_union = 0.0, privacy_full_inter = 0.0, privacy_full_group = 0.0;
  double privacy_full_l1 = 0.0, privacy_full_linf = 0.0;

  // Closed-form mechanism privacy, NaN when undefined for the mechanism.
  double analytic_union = std::numeric_limits<double>::quiet_NaN();
  double analytic_inter = std::numeric_limits<double>::quiet_NaN();
  double analytic_group = std::numeric_limits<double>::quiet_NaN();
  double analytic_l1 = std::numeric_limits<double>::quiet_NaN();
  double analytic_linf = std::numeric_limits<double>::quiet_NaN();

  // Surrogate bound line evaluated at this record's primary privacy.
  double bound_union = 0.0, bound_inter = 0.0, bound_group = 0.0;
  double bound_l1 = 0.0, bound_linf = 0.0;
};

struct SweepMechanism {
  MechanismId id = MechanismId::Alg1;
  std::vector<double> hypers;  // interval scale (alg1) or noise level (baselines)
};

struct SweepConfig {
  SecretSpec spec;
  GroupPartition partition;
  LpSpec lp1;
  LpSpec lpinf;
  std::vector<double> alg1_base_intervals;
  std::vector<double> alg1_anchors;
  double dp_bin_width = 5.0;
  std::size_t subsample = 512;
  std::size_t sliced_projections = 64;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  std::size_t n_workers = 0;  // 0 = hardware concurrency

  // Experiment defaults: secrets are the means of the first three columns
  // with tolerances (1, 4, 3); the first two means form one group; the lp
  // tolerances aggregate the per-secret ones (l1: 8, linf: 4).
  static SweepConfig defaults() {
    SweepConfig cfg;
    cfg.spec = SecretSpec({{ParamKind::Mean, 0}, {ParamKind::Mean, 1}, {ParamKind::Mean, 2}},
                          {1.0, 4.0, 3.0});
    cfg.partition = GroupPartition({{0, 1}, {2}});
    cfg.lp1 = LpSpec(1.0, 8.0);
    cfg.lpinf = LpSpec(std::numeric_limits<double>::infinity(), 4.0);
    cfg.alg1_base_intervals = {6.0, 24.0, 18.0};
    cfg.alg1_anchors = {0.0, 0.0, 0.0};
    return cfg;
  }

  static std::vector<SweepMechanism> default_mechanisms() {
    return {
        {MechanismId::Alg1, {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}},
        {MechanismId::ApGaussian, {0.5, 1.0, 2.0, 4.0, 8.0}},
        {MechanismId::DistpLaplace, {0.5, 1.0, 2.0, 4.0, 8.0}},
        {MechanismId::DpHistogram, {0.5, 1.0, 2.0, 4.0, 8.0}},
    };
  }
};

namespace detail {

inline Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out(rows.size(), d.cols);
  out.labels = d.labels;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < d.cols; ++c) out.at(i, c) = d.at(rows[i], c);
  return out;
}

inline std::vector<std::size_t> sample_rows(std::size_t m, std::size_t want, Rng rng) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  if (want >= m) return idx;
  // partial Fisher-Yates, then restore order
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.next_unit() * static_cast<double>(m - i));
    std::swap(idx[i], idx[std::min(j, m - 1)]);
  }
  idx.resize(want);
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct SurrogateSet {
  double u, i, g, l1, linf;
};

inline SurrogateSet surrogates(const Dataset& x, const Dataset& y, const SweepConfig& cfg) {
  SurrogateSet s{};
  s.u = surrogate_privacy(x, y, cfg.spec, Metric::Union).value;
  s.i = surrogate_privacy(x, y, cfg.spec, Metric::Intersection).value;
  s.g = surrogate_privacy(x, y, cfg.spec, Metric::Group, &cfg.partition).value;
  s.l1 = surrogate_privacy(x, y, cfg.spec, Metric::Lp, nullptr, &cfg.lp1).value;
  s.linf = surrogate_privacy(x, y, cfg.spec, Metric::Lp, nullptr, &cfg.lpinf).value;
  return s;
}

}  // namespace detail

inline std::vector<TradeoffRecord> run_sweep(const Dataset& data, const SweepConfig& cfg,
                                             const std::vector<SweepMechanism>& mechanisms) {
  data.validate();
  cfg.spec.validate();
  cfg.spec.validate_for_dims(data.cols);
  cfg.partition.validate_for(cfg.spec.size(), /*must_cover=*/true);
  require(cfg.repeats >= 1, "run_sweep: repeats must be at least 1");

  struct Point {
    MechanismId id;
    double hyper;
    std::size_t repeat;
  };
  std::vector<Point> points;
  for (const auto& mech : mechanisms)
    for (double h : mech.hypers)
      for (std::size_t rep = 0; rep < cfg.repeats; ++rep)
        points.push_back({mech.id, h, rep});
  std::vector<TradeoffRecord> records(points.size());
  if (points.empty()) return records;

  const double c_union = surrogate_bound_line(Metric::Union, cfg.spec.tolerances);
  const double c_inter = surrogate_bound_line(Metric::Intersection, cfg.spec.tolerances);
  const double c_group =
      surrogate_bound_line(Metric::Group, cfg.spec.tolerances, &cfg.partition);
  const double c_l1 = surrogate_bound_line(Metric::Lp, cfg.spec.tolerances, nullptr, &cfg.lp1);
  const double c_linf =
      surrogate_bound_line(Metric::Lp, cfg.spec.tolerances, nullptr, &cfg.lpinf);

  auto run_point = [&](std::size_t p) {
    const Point& pt = points[p];
    const std::uint64_t point_seed =
        detail::splitmix64(cfg.seed ^ detail::splitmix64(0xC0FFEE ^ p));
    try {
      ReleaseOutcome outcome;
      TradeoffRecord rec;
      rec.mechanism = to_string(pt.id);
      rec.hyper = pt.hyper;
      rec.seed = point_seed;
      switch (pt.id) {
        case MechanismId::Alg1: {
          MechanismConfig mc;
          mc.mode = QuantizationMode::RandomOffset;
          mc.lower_anchors = cfg.alg1_anchors;
          mc.interval_lengths.resize(cfg.alg1_base_intervals.size());
          for (std::size_t i = 0; i < mc.interval_lengths.size(); ++i)
            mc.interval_lengths[i] = pt.hyper * cfg.alg1_base_intervals[i];
          outcome = release_dataset(data, cfg.spec, mc, point_seed);
          bool defined = true;
          for (std::size_t i = 0; i < cfg.spec.size(); ++i)
            defined = defined && 2.0 * cfg.spec.tolerances[i] <= mc.interval_lengths[i];
          if (defined) {
            rec.analytic_union =
                analytic_privacy_alg1(cfg.spec, mc, Metric::Union).value;
            rec.analytic_inter =
                analytic_privacy_alg1(cfg.spec, mc, Metric::Intersection).value;
            rec.analytic_group =
                analytic_privacy_alg1(cfg.spec, mc, Metric::Group, &cfg.partition).value;
            const auto def_lp = [&](const LpSpec& lp) {
              const double scale =
                  lp.is_inf() ? 1.0
                              : std::pow(static_cast<double>(cfg.spec.size()), 1.0 / lp.p);
              for (double s : mc.interval_lengths)
                if (2.0 * lp.eps_p / scale > s) return std::numeric_limits<double>::quiet_NaN();
              return analytic_privacy_alg1(cfg.spec, mc, Metric::Lp, nullptr, &lp).value;
            };
            rec.analytic_l1 = def_lp(cfg.lp1);
            rec.analytic_linf = def_lp(cfg.lpinf);
          }
          break;
        }
        case MechanismId::ApGaussian:
          outcome = release_ap_gaussian(data, pt.hyper, point_seed);
          break;
        case MechanismId::DistpLaplace:
          outcome = release_distp_laplace(data, pt.hyper, point_seed);
          break;
        case MechanismId::DpHistogram:
          outcome = release_dp_histogram(data, cfg.dp_bin_width, pt.hyper, point_seed);
          break;
        default:
          fail("run_sweep: mechanism '" + to_string(pt.id) + "' is not sweepable");
      }
      const Dataset& released = *outcome.dataset;

      Rng point_rng(point_seed, /*stream=*/0x5357);
      const auto rows = detail::sample_rows(data.rows, cfg.subsample, point_rng.stream(1));
      const Dataset x_sub = detail::take_rows(data, rows);
      const Dataset y_sub = detail::take_rows(released, rows);

      rec.n_sub = rows.size();
      rec.estimator = "w2-exact-subsample";
      rec.distortion = w2_empirical_exact(x_sub, y_sub);
      rec.distortion_sliced = w2_empirical_sliced(data, released, cfg.sliced_projections,
                                                  detail::splitmix64(point_seed ^ 0x51ced));

      const auto sub = detail::surrogates(x_sub, y_sub, cfg);
      rec.privacy_union = sub.u;
      rec.privacy_inter = sub.i;
      rec.privacy_group = sub.g;
      rec.privacy_l1 = sub.l1;
      rec.privacy_linf = sub.linf;
      const auto full = detail::surrogates(data, released, cfg);
      rec.privacy_full_union = full.u;
      rec.privacy_full_inter = full.i;
      rec.privacy_full_group = full.g;
      rec.privacy_full_l1 = full.l1;
      rec.privacy_full_linf = full.linf;

      rec.bound_union = -c_union * rec.privacy_union;
      rec.bound_inter = -c_inter * rec.privacy_inter;
      rec.bound_group = -c_group * rec.privacy_group;
      rec.bound_l1 = -c_l1 * rec.privacy_l1;
      rec.bound_linf = -c_linf * rec.privacy_linf;

      records[p] = std::move(rec);
    } catch (const Error& e) {
      fail("run_sweep: grid point " + std::to_string(p) + " (" + to_string(pt.id) +
           ", hyper=" + std::to_string(pt.hyper) + "): " + e.what());
    }
  };

  std::size_t workers = cfg.n_workers ? cfg.n_workers : std::thread::hardware_concurrency();
  if (workers <= 1 || points.size() == 1) {
    for (std::size_t p = 0; p < points.size(); ++p) run_point(p);
  } else {
    workers = std::min(workers, points.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::string> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w]() {
        try {
          for (;;) {
            const std::size_t p = next.fetch_add(1);
            if (p >= points.size()) return;
            run_point(p);
          }
        } catch (const Error& e) {
          errors[w] = e.what();
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (!e.empty()) fail(e);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Emission: CSV and JSON lines
// ---------------------------------------------------------------------------

enum class EmitFormat { Csv, JsonLines };

inline const std::vector<std::string>& tradeoff_columns() {
  static const std::vector<std::string> kCols{
      "mechanism", "hyper", "seed", "n_sub", "estimator",
      "distortion", "distortion_sliced",
      "privacy_union", "privacy_inter", "privacy_group", "privacy_l1", "privacy_linf",
      "privacy_full_union", "privacy_full_inter", "privacy_full_group", "privacy_full_l1",
      "privacy_full_linf",
      "analytic_union", "analytic_inter", "analytic_group", "analytic_l1", "analytic_linf",
      "bound_union", "bound_inter", "bound_group", "bound_l1", "bound_linf"};
  return kCols;
}

namespace detail {

inline std::vector<double> record_numbers(const TradeoffRecord& r) {
  return {r.distortion, r.distortion_sliced,
          r.privacy_union, r.privacy_inter, r.privacy_group, r.privacy_l1, r.privacy_linf,
          r.privacy_full_union, r.privacy_full_inter, r.privacy_full_group, r.privacy_full_l1,
          r.privacy_full_linf,
          r.analytic_union, r.analytic_inter, r.analytic_group, r.analytic_l1, r.analytic_linf,
          r.bound_union, r.bound_inter, r.bound_group, r.bound_l1, r.bound_linf};
}

inline void assign_record_numbers(TradeoffRecord& r, const std::vector<double>& v) {
  std::size_t i = 0;
  r.distortion = v[i++];
  r.distortion_sliced = v[i++];
  r.privacy_union = v[i++];
  r.privacy_inter = v[i++];
  r.privacy_group = v[i++];
  r.privacy_l1 = v[i++];
  r.privacy_linf = v[i++];
  r.privacy_full_union = v[i++];
  r.privacy_full_inter = v[i++];
  r.privacy_full_group = v[i++];
  r.privacy_full_l1 = v[i++];
  r.privacy_full_linf = v[i++];
  r.analytic_union = v[i++];
  r.analytic_inter = v[i++];
  r.analytic_group = v[i++];
  r.analytic_l1 = v[i++];
  r.analytic_linf = v[i++];
  r.bound_union = v[i++];
  r.bound_inter = v[i++];
  r.bound_group = v[i++];
  r.bound_l1 = v[i++];
  r.bound_linf = v[i++];
}

inline nlohmann::json record_to_json(const TradeoffRecord& r) {
  nlohmann::json j;
  j["version"] = 1;
  j["mechanism"] = r.mechanism;
  j["hyper"] = r.hyper;
  j["seed"] = r.seed;
  j["n_sub"] = r.n_sub;
  j["estimator"] = r.estimator;
  const auto& cols = tradeoff_columns();
  const auto nums = record_numbers(r);
  for (std::size_t i = 5; i < cols.size(); ++i) {
    const double v = nums[i - 5];
    if (std::isnan(v))
      j[cols[i]] = nullptr;
    else
      j[cols[i]] = v;
  }
  return j;
}

}  // namespace detail

inline void emit(const std::vector<TradeoffRecord>& records, EmitFormat format,
                 std::ostream& out) {
  if (format == EmitFormat::Csv) {
    out << "# ssp-tradeoff v1\n";
    const auto& cols = tradeoff_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out << ',';
      out << cols[i];
    }
    out << '\n';
    out << std::setprecision(17);
    for (const auto& r : records) {
      out << r.mechanism << ',' << r.hyper << ',' << r.seed << ',' << r.n_sub << ','
          << r.estimator;
      for (double v : detail::record_numbers(r)) out << ',' << v;
      out << '\n';
    }
  } else {
    for (const auto& r : records) out << detail::record_to_json(r).dump() << '\n';
  }
  require(out.good(), "emit: write failed");
}

inline std::vector<TradeoffRecord> read_records(std::istream& in, EmitFormat format) {
  std::vector<TradeoffRecord> records;
  std::string line;
  bool header_done = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (format == EmitFormat::Csv) {
      if (!header_done) {
        header_done = true;
        continue;
      }
      const auto fields = detail::split_line(line, ',');
      require(fields.size() == tradeoff_columns().size(),
              "read_records: wrong column count on line " + std::to_string(line_no));
      TradeoffRecord r;
      r.mechanism = fields[0];
      r.hyper = detail::parse_real(fields[1], line_no);
      r.seed = std::stoull(fields[2]);
      r.n_sub = std::stoull(fields[3]);
      r.estimator = fields[4];
      std::vector<double> nums(fields.size() - 5);
      for (std::size_t i = 5; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        nums[i - 5] = (f == "nan" || f == "-nan")
                          ? std::numeric_limits<double>::quiet_NaN()
                          : detail::parse_real(f, line_no);
      }
      detail::assign_record_numbers(r, nums);
      records.push_back(std::move(r));
    } else {
      const auto j = nlohmann::json::parse(line);
      TradeoffRecord r;
      r.mechanism = j.at("mechanism").get<std::string>();
      r.hyper = j.at("hyper").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.n_sub = j.at("n_sub").get<std::size_t>();
      r.estimator = j.at("estimator").get<std::string>();
      const auto& cols = tradeoff_columns();
      std::vector<double> nums(cols.size() - 5);
      for (std::size_t i = 5; i < cols.size(); ++i) {
        const auto& v = j.at(cols[i]);
        nums[i - 5] = v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                  : v.get<double>();
      }
      detail::assign_record_numbers(r, nums);
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace ssp
