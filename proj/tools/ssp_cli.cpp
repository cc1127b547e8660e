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
// Command-line harness: release mechanisms, privacy and distortion metrics,
// tradeoff lower bounds, synthetic data, and experiment sweeps.

#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssp/ssp.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

// "0,1;2" -> {{0,1},{2}}
ssp::GroupPartition parse_groups(const std::string& text) {
  std::vector<std::vector<std::size_t>> groups;
  std::stringstream ss(text);
  std::string grp;
  while (std::getline(ss, grp, ';')) {
    std::vector<std::size_t> g;
    std::stringstream gs(grp);
    std::string tok;
    while (std::getline(gs, tok, ',')) {
      if (tok.empty()) continue;
      g.push_back(std::stoull(tok));
    }
    if (!g.empty()) groups.push_back(std::move(g));
  }
  return ssp::GroupPartition(std::move(groups));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  ssp::require(in.good(), "cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

struct SecretsFile {
  ssp::SecretSpec spec;
  std::optional<ssp::GroupPartition> groups;
  std::optional<ssp::PriorSpec> prior;
};

// Secrets file schema:
// {
//   "targets":    [{"kind": "mean"|"std", "dim": 0}, ...],
//   "tolerances": [1, 4, 3],
//   "groups":     [[0, 1], [2]],          // optional
//   "prior":      [[lo, hi], ...]          // optional, one box per secret
// }
SecretsFile load_secrets(const std::string& path) {
  const json j = load_json_file(path);
  SecretsFile out;
  std::vector<ssp::SecretTarget> targets;
  for (const auto& t : j.at("targets")) {
    ssp::SecretTarget tgt;
    const std::string kind = t.at("kind").get<std::string>();
    ssp::require(kind == "mean" || kind == "std", "secrets: kind must be mean or std");
    tgt.kind = kind == "mean" ? ssp::ParamKind::Mean : ssp::ParamKind::Std;
    tgt.dim = t.at("dim").get<std::size_t>();
    targets.push_back(tgt);
  }
  out.spec = ssp::SecretSpec(std::move(targets), j.at("tolerances").get<std::vector<double>>());
  if (j.contains("groups"))
    out.groups =
        ssp::GroupPartition(j.at("groups").get<std::vector<std::vector<std::size_t>>>());
  if (j.contains("prior")) {
    std::vector<ssp::PriorSpec::Interval> boxes;
    for (const auto& b : j.at("prior"))
      boxes.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    out.prior = ssp::PriorSpec(std::move(boxes));
  }
  return out;
}

// Mechanism config schema (fields used depend on the mechanism):
// {
//   "mode":             "random-offset"|"midpoint",
//   "interval_lengths": [...], "lower_anchors": [...],       // per secret
//   "mean_intervals":   [...], "mean_anchors":  [...],       // per dimension
//   "eig_intervals":    [...], "eig_anchors":   [...],
//   "noise_scale":      0.0,   "bin_width":     0.0
// }
ssp::MechanismConfig load_config(const std::string& path) {
  const json j = load_json_file(path);
  ssp::MechanismConfig cfg;
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    ssp::require(mode == "random-offset" || mode == "midpoint",
                 "config: mode must be random-offset or midpoint");
    cfg.mode = mode == "random-offset" ? ssp::QuantizationMode::RandomOffset
                                       : ssp::QuantizationMode::Midpoint;
  }
  const auto grab = [&](const char* key, std::vector<double>& dst) {
    if (j.contains(key)) dst = j.at(key).get<std::vector<double>>();
  };
  grab("interval_lengths", cfg.interval_lengths);
  grab("lower_anchors", cfg.lower_anchors);
  grab("mean_intervals", cfg.mean_intervals);
  grab("mean_anchors", cfg.mean_anchors);
  grab("eig_intervals", cfg.eig_intervals);
  grab("eig_anchors", cfg.eig_anchors);
  if (j.contains("noise_scale")) cfg.noise_scale = j.at("noise_scale").get<double>();
  if (j.contains("bin_width")) cfg.bin_width = j.at("bin_width").get<double>();
  return cfg;
}

// Parameter file schema: {"family": "diag-gaussian", "means": [...], "stds": [...]}
// or {"family": "gaussian-2d", "mu1":, "mu2":, "lambda1":, "lambda2":, "alpha":}
// or {"family": "gaussian-general", "means": [...], "eig_sqrt": [...], "rotation": [...]}
json params_to_json(const ssp::ReleaseOutcome& out) {
  json j;
  if (std::holds_alternative<ssp::GaussianDiagParams>(out.params)) {
    const auto& p = out.diag();
    j["family"] = "diag-gaussian";
    j["means"] = p.means;
    j["stds"] = p.stds;
  } else if (std::holds_alternative<ssp::Gaussian2DParams>(out.params)) {
    const auto& p = out.g2d();
    j["family"] = "gaussian-2d";
    j["mu1"] = p.mu1;
    j["mu2"] = p.mu2;
    j["lambda1"] = p.lambda1;
    j["lambda2"] = p.lambda2;
    j["alpha"] = p.alpha;
  } else if (std::holds_alternative<ssp::GaussianGeneralParams>(out.params)) {
    const auto& p = out.general();
    j["family"] = "gaussian-general";
    j["means"] = p.means;
    j["eig_sqrt"] = p.eig_sqrt;
    j["rotation"] = p.rotation;
  }
  j["mechanism"] = ssp::to_string(out.mechanism);
  j["seed"] = out.seed;
  return j;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  ssp::require(file.good(), "cannot open '" + path + "' for writing");
  return file;
}

double parse_norm_order(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

int run(int argc, char** argv) {
  CLI::App app{"multi-secret summary-statistic privacy toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string output;
  std::string format = "csv";
  std::string delimiter = ",";
  bool no_header = false;
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
  app.add_option("--output", output, "output path (default stdout)");
  app.add_option("--format", format, "output format: csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--delimiter", delimiter, "CSV field delimiter")->capture_default_str();
  app.add_flag("--no-header", no_header, "input CSVs have no header row");

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic web-traffic-like dataset");
  std::size_t synth_rows = 2000, synth_cols = 5;
  std::string synth_means = "15,68,54", synth_sds;
  synth->add_option("--rows", synth_rows, "sample count")->capture_default_str();
  synth->add_option("--cols", synth_cols, "column count")->capture_default_str();
  synth->add_option("--secret-means", synth_means, "comma-separated secret column means")
      ->capture_default_str();
  synth->add_option("--sds", synth_sds, "comma-separated per-column SDs (optional)");

  // --- release -------------------------------------------------------------
  auto* release = app.add_subcommand("release", "run a data release mechanism");
  std::string rel_input, rel_params, rel_secrets, rel_config, rel_mechanism, rel_family =
      "diag-gaussian";
  release->add_option("--input", rel_input, "input dataset CSV");
  release->add_option("--params", rel_params, "input parameter JSON (alg1/alg2/alg3)");
  release->add_option("--family", rel_family, "parametric family of --input")
      ->check(CLI::IsMember({"diag-gaussian"}));
  release->add_option("--secrets", rel_secrets, "secrets spec JSON")->required();
  release
      ->add_option("--mechanism", rel_mechanism,
                   "alg1|alg2|alg3|dataset|ap|distp|dp-hist")
      ->required();
  release->add_option("--config", rel_config, "mechanism config JSON");

  // --- privacy -------------------------------------------------------------
  auto* privacy = app.add_subcommand("privacy", "evaluate a privacy metric");
  std::string pr_metric = "union", pr_method = "analytic", pr_secrets, pr_config;
  std::string pr_groups, pr_p = "2", pr_original, pr_released, pr_attacker = "posterior-bin";
  double pr_eps_p = 0.0;
  std::size_t pr_trials = 100000;
  privacy->add_option("--metric", pr_metric, "union|inter|group|lp")->capture_default_str();
  privacy->add_option("--method", pr_method, "analytic|surrogate|mc")->capture_default_str();
  privacy->add_option("--secrets", pr_secrets, "secrets spec JSON")->required();
  privacy->add_option("--config", pr_config, "mechanism config JSON (analytic/mc)");
  privacy->add_option("--groups", pr_groups, "inline partition, e.g. \"0,1;2\"");
  privacy->add_option("--p", pr_p, "lp norm order (number or inf)")->capture_default_str();
  privacy->add_option("--eps-p", pr_eps_p, "lp tolerance");
  privacy->add_option("--original", pr_original, "original dataset CSV (surrogate)");
  privacy->add_option("--released", pr_released, "released dataset CSV (surrogate)");
  privacy->add_option("--trials", pr_trials, "Monte-Carlo trials")->capture_default_str();
  privacy->add_option("--attacker", pr_attacker, "mc attacker: posterior-bin|grid")
      ->check(CLI::IsMember({"posterior-bin", "grid"}));

  // --- distortion ----------------------------------------------------------
  auto* distortion = app.add_subcommand("distortion", "Wasserstein-2 distortion");
  std::string di_a, di_b, di_params_a, di_params_b, di_estimator = "auto";
  std::size_t di_projections = 64;
  distortion->add_option("--a", di_a, "first dataset CSV");
  distortion->add_option("--b", di_b, "second dataset CSV");
  distortion->add_option("--params-a", di_params_a, "first parameter JSON");
  distortion->add_option("--params-b", di_params_b, "second parameter JSON");
  distortion->add_option("--estimator", di_estimator, "auto|exact|sliced")
      ->check(CLI::IsMember({"auto", "exact", "sliced"}));
  distortion->add_option("--projections", di_projections, "sliced projection count")
      ->capture_default_str();

  // --- bounds --------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "tradeoff lower-bound table over a T grid");
  std::string bo_secrets, bo_groups, bo_p = "2";
  double bo_eps_p = 0.0, bo_tmin = 0.05, bo_tmax = 0.95, bo_gamma = -1.0;
  std::size_t bo_steps = 19;
  bounds->add_option("--secrets", bo_secrets, "secrets spec JSON")->required();
  bounds->add_option("--groups", bo_groups, "inline partition, e.g. \"0,1;2\"");
  bounds->add_option("--p", bo_p, "lp norm order")->capture_default_str();
  bounds->add_option("--eps-p", bo_eps_p, "lp tolerance (default (sum eps^p)^(1/p))");
  bounds->add_option("--t-min", bo_tmin, "grid start")->capture_default_str();
  bounds->add_option("--t-max", bo_tmax, "grid end")->capture_default_str();
  bounds->add_option("--t-steps", bo_steps, "grid size")->capture_default_str();
  bounds->add_option("--gamma", bo_gamma, "user gamma (default Gaussian sqrt(d)/2)");

  // --- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "mechanism tradeoff sweep");
  std::string sw_input, sw_mechs = "alg1,ap,distp,dp-hist";
  std::size_t sw_rows = 2000, sw_cols = 5, sw_repeats = 1, sw_subsample = 512,
              sw_projections = 64;
  sweep->add_option("--input", sw_input, "dataset CSV (default: synthetic)");
  sweep->add_option("--rows", sw_rows, "synthetic sample count")->capture_default_str();
  sweep->add_option("--cols", sw_cols, "synthetic column count")->capture_default_str();
  sweep->add_option("--mechanisms", sw_mechs, "comma-separated mechanism list")
      ->capture_default_str();
  sweep->add_option("--repeats", sw_repeats, "seeds per grid point")->capture_default_str();
  sweep->add_option("--subsample", sw_subsample, "rows for the exact W2 estimator")
      ->capture_default_str();
  sweep->add_option("--projections", sw_projections, "sliced W2 projections")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  ssp::require(delimiter.size() == 1, "--delimiter must be a single character");
  ssp::CsvOptions csv_opt;
  csv_opt.delimiter = delimiter[0];
  csv_opt.has_header = !no_header;
  const auto load_csv = [&](const std::string& path) {
    return ssp::read_csv_file(path, csv_opt);
  };

  std::ofstream out_file;
  std::ostream& out = open_output(output, out_file);
  out << std::setprecision(17);

  if (*synth) {
    std::vector<double> means = parse_reals(synth_means);
    std::vector<double> sds = synth_sds.empty() ? std::vector<double>{} : parse_reals(synth_sds);
    const ssp::Dataset d = ssp::generate_synthetic(synth_rows, synth_cols, means, seed, sds);
    ssp::write_csv(out, d, csv_opt);
    return 0;
  }

  if (*release) {
    const SecretsFile sf = load_secrets(rel_secrets);
    ssp::MechanismConfig cfg;
    if (!rel_config.empty()) cfg = load_config(rel_config);
    const ssp::MechanismId mech = ssp::mechanism_from_string(rel_mechanism);
    ssp::ReleaseOutcome outcome;
    switch (mech) {
      case ssp::MechanismId::Alg1: {
        ssp::GaussianDiagParams p;
        if (!rel_params.empty()) {
          const json j = load_json_file(rel_params);
          p = ssp::GaussianDiagParams(j.at("means").get<std::vector<double>>(),
                                      j.at("stds").get<std::vector<double>>());
        } else {
          ssp::require(!rel_input.empty(), "release alg1: need --params or --input");
          p = ssp::estimate_params(load_csv(rel_input)).to_params();
        }
        outcome = ssp::release_alg1(p, sf.spec, cfg, seed);
        break;
      }
      case ssp::MechanismId::Alg2: {
        ssp::require(!rel_params.empty(), "release alg2: need --params");
        const json j = load_json_file(rel_params);
        const ssp::Gaussian2DParams p(j.at("mu1").get<double>(), j.at("mu2").get<double>(),
                                      j.at("lambda1").get<double>(),
                                      j.at("lambda2").get<double>(), j.at("alpha").get<double>());
        outcome = ssp::release_alg2(p, sf.spec, cfg);
        break;
      }
      case ssp::MechanismId::Alg3: {
        ssp::require(!rel_params.empty(), "release alg3: need --params");
        const json j = load_json_file(rel_params);
        const ssp::GaussianGeneralParams p(j.at("means").get<std::vector<double>>(),
                                           j.at("eig_sqrt").get<std::vector<double>>(),
                                           j.at("rotation").get<std::vector<double>>());
        outcome = ssp::release_alg3(p, sf.spec, cfg);
        break;
      }
      case ssp::MechanismId::DatasetMode:
        outcome = ssp::release_dataset(load_csv(rel_input), sf.spec, cfg, seed);
        break;
      case ssp::MechanismId::ApGaussian:
        outcome = ssp::release_ap_gaussian(load_csv(rel_input), cfg.noise_scale, seed);
        break;
      case ssp::MechanismId::DistpLaplace:
        outcome =
            ssp::release_distp_laplace(load_csv(rel_input), cfg.noise_scale, seed);
        break;
      case ssp::MechanismId::DpHistogram:
        outcome = ssp::release_dp_histogram(load_csv(rel_input), cfg.bin_width,
                                            cfg.noise_scale, seed);
        break;
    }
    if (outcome.dataset)
      ssp::write_csv(out, *outcome.dataset, csv_opt);
    else
      out << params_to_json(outcome).dump(2) << '\n';
    return 0;
  }

  if (*privacy) {
    const SecretsFile sf = load_secrets(pr_secrets);
    const ssp::Metric metric = ssp::metric_from_string(pr_metric);
    std::optional<ssp::GroupPartition> groups = sf.groups;
    if (!pr_groups.empty()) groups = parse_groups(pr_groups);
    std::optional<ssp::LpSpec> lp;
    if (metric == ssp::Metric::Lp) {
      double eps_p = pr_eps_p;
      if (eps_p <= 0.0) {
        const double p = parse_norm_order(pr_p);
        eps_p = ssp::lp_norm(sf.spec.tolerances, p);
      }
      lp = ssp::LpSpec(parse_norm_order(pr_p), eps_p);
    }
    ssp::PrivacyReport rep;
    if (pr_method == "analytic") {
      ssp::require(!pr_config.empty(), "privacy analytic: need --config");
      rep = ssp::analytic_privacy_alg1(sf.spec, load_config(pr_config), metric,
                                       groups ? &*groups : nullptr, lp ? &*lp : nullptr);
    } else if (pr_method == "surrogate") {
      ssp::require(!pr_original.empty() && !pr_released.empty(),
                   "privacy surrogate: need --original and --released");
      rep = ssp::surrogate_privacy(load_csv(pr_original),
                                   load_csv(pr_released), sf.spec, metric,
                                   groups ? &*groups : nullptr, lp ? &*lp : nullptr);
    } else if (pr_method == "mc") {
      ssp::require(!pr_config.empty(), "privacy mc: need --config");
      ssp::require(sf.prior.has_value(), "privacy mc: secrets file must carry a prior");
      ssp::McOptions opt;
      opt.n_trials = pr_trials;
      opt.seed = seed;
      opt.attacker =
          pr_attacker == "grid" ? ssp::Attacker::Grid : ssp::Attacker::PosteriorBin;
      rep = ssp::monte_carlo_privacy(ssp::MechanismId::Alg1, load_config(pr_config), *sf.prior,
                                     sf.spec, metric, groups ? &*groups : nullptr,
                                     lp ? &*lp : nullptr, opt);
    } else {
      ssp::fail("privacy: unknown method '" + pr_method + "'");
    }
    json j;
    j["metric"] = ssp::to_string(rep.metric);
    j["value"] = rep.value;
    j["method"] = pr_method;
    if (rep.half_width) j["half_width"] = *rep.half_width;
    if (rep.is_upper_bound) j["upper_bound"] = true;
    if (!rep.attacker.empty()) j["attacker"] = rep.attacker;
    if (!rep.note.empty()) j["note"] = rep.note;
    out << j.dump(2) << '\n';
    return 0;
  }

  if (*distortion) {
    json j;
    if (!di_params_a.empty() || !di_params_b.empty()) {
      ssp::require(!di_params_a.empty() && !di_params_b.empty(),
                   "distortion: need both --params-a and --params-b");
      const json a = load_json_file(di_params_a);
      const json b = load_json_file(di_params_b);
      const std::string fam = a.at("family").get<std::string>();
      ssp::require(fam == b.at("family").get<std::string>(),
                   "distortion: parameter families differ");
      if (fam == "diag-gaussian") {
        const ssp::GaussianDiagParams pa(a.at("means").get<std::vector<double>>(),
                                         a.at("stds").get<std::vector<double>>());
        const ssp::GaussianDiagParams pb(b.at("means").get<std::vector<double>>(),
                                         b.at("stds").get<std::vector<double>>());
        j["value"] = ssp::w2_gaussian_diag(pa, pb);
        j["estimator"] = "w2-gaussian-diag";
      } else if (fam == "gaussian-2d") {
        const ssp::Gaussian2DParams pa(a.at("mu1").get<double>(), a.at("mu2").get<double>(),
                                       a.at("lambda1").get<double>(),
                                       a.at("lambda2").get<double>(),
                                       a.at("alpha").get<double>());
        const ssp::Gaussian2DParams pb(b.at("mu1").get<double>(), b.at("mu2").get<double>(),
                                       b.at("lambda1").get<double>(),
                                       b.at("lambda2").get<double>(),
                                       b.at("alpha").get<double>());
        j["value"] = ssp::w2_gaussian_2d(pa, pb);
        j["estimator"] = "w2-gaussian-2d";
      } else {
        ssp::fail("distortion: unsupported family '" + fam + "'");
      }
    } else {
      ssp::require(!di_a.empty() && !di_b.empty(), "distortion: need --a and --b");
      const ssp::Dataset a = load_csv(di_a);
      const ssp::Dataset b = load_csv(di_b);
      const bool exact = di_estimator == "exact" ||
                         (di_estimator == "auto" &&
                          (a.cols == 1 || a.rows <= ssp::kMaxExactW2Samples));
      if (exact) {
        j["value"] = ssp::w2_empirical_exact(a, b);
        j["estimator"] = "w2-exact";
      } else {
        j["value"] = ssp::w2_empirical_sliced(a, b, di_projections, seed);
        j["estimator"] = "w2-sliced";
        j["projections"] = di_projections;
      }
    }
    out << j.dump(2) << '\n';
    return 0;
  }

  if (*bounds) {
    const SecretsFile sf = load_secrets(bo_secrets);
    const std::size_t d = sf.spec.size();
    const auto& eps = sf.spec.tolerances;
    ssp::GroupPartition groups =
        !bo_groups.empty() ? parse_groups(bo_groups)
                           : (sf.groups ? *sf.groups : ssp::GroupPartition::singletons(d));
    const double p = parse_norm_order(bo_p);
    const double eps_p = bo_eps_p > 0.0 ? bo_eps_p : ssp::lp_norm(eps, p);
    const ssp::LpSpec lp(p, eps_p);
    ssp::require(bo_steps >= 1 && bo_tmin > 0.0 && bo_tmax < 1.0 && bo_tmin <= bo_tmax,
                 "bounds: T grid must lie inside (0, 1)");
    const auto gamma = [&](ssp::Metric m) {
      return bo_gamma >= 0.0 ? ssp::GammaValue::user(m, bo_gamma)
                             : ssp::GammaValue::gaussian(m, d);
    };
    out << "T,union,inter,group,lp\n";
    for (std::size_t i = 0; i < bo_steps; ++i) {
      const double t =
          bo_steps == 1
              ? bo_tmin
              : bo_tmin + (bo_tmax - bo_tmin) * static_cast<double>(i) /
                              static_cast<double>(bo_steps - 1);
      out << t << ',' << ssp::lower_bound_union(t, eps, gamma(ssp::Metric::Union)) << ','
          << ssp::lower_bound_inter(t, eps, gamma(ssp::Metric::Intersection)) << ','
          << ssp::lower_bound_group(t, eps, groups, gamma(ssp::Metric::Group)) << ','
          << ssp::lower_bound_lp(t, lp, d, gamma(ssp::Metric::Lp)) << '\n';
    }
    return 0;
  }

  if (*sweep) {
    ssp::SweepConfig cfg = ssp::SweepConfig::defaults();
    cfg.seed = seed;
    cfg.repeats = sw_repeats;
    cfg.subsample = sw_subsample;
    cfg.sliced_projections = sw_projections;
    const ssp::Dataset data =
        sw_input.empty()
            ? ssp::generate_synthetic(sw_rows, sw_cols, ssp::default_secret_means(), seed)
            : load_csv(sw_input);
    std::vector<ssp::SweepMechanism> mechs;
    const auto defaults = ssp::SweepConfig::default_mechanisms();
    std::stringstream ss(sw_mechs);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      const ssp::MechanismId id = ssp::mechanism_from_string(tok);
      bool found = false;
      for (const auto& m : defaults)
        if (m.id == id) {
          mechs.push_back(m);
          found = true;
        }
      ssp::require(found, "sweep: mechanism '" + tok + "' has no default grid");
    }
    const auto records = ssp::run_sweep(data, cfg, mechs);
    ssp::emit(records, format == "jsonl" ? ssp::EmitFormat::JsonLines : ssp::EmitFormat::Csv,
              out);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
