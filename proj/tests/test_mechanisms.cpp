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
#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "ssp/mechanisms.hpp"
#include "ssp/sweep.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

ssp::SecretSpec three_means(std::vector<double> eps = {1.0, 4.0, 3.0}) {
  return ssp::SecretSpec({{ssp::ParamKind::Mean, 0},
                          {ssp::ParamKind::Mean, 1},
                          {ssp::ParamKind::Mean, 2}},
                         std::move(eps));
}

ssp::MechanismConfig alg1_cfg(std::vector<double> s, std::vector<double> anchors) {
  ssp::MechanismConfig cfg;
  cfg.mode = ssp::QuantizationMode::RandomOffset;
  cfg.interval_lengths = std::move(s);
  cfg.lower_anchors = std::move(anchors);
  return cfg;
}

ssp::MechanismConfig midpoint_cfg(std::vector<double> mean_s, std::vector<double> mean_a,
                                  std::vector<double> eig_s, std::vector<double> eig_a) {
  ssp::MechanismConfig cfg;
  cfg.mode = ssp::QuantizationMode::Midpoint;
  cfg.mean_intervals = std::move(mean_s);
  cfg.mean_anchors = std::move(mean_a);
  cfg.eig_intervals = std::move(eig_s);
  cfg.eig_anchors = std::move(eig_a);
  return cfg;
}

}  // namespace

TEST_CASE("random-offset rule places the release inside the original bin") {
  // mu = 7.3 with anchor 0 and s = 4 lives in [4, 8); a drawn offset of 1.0
  // releases 5.0
  REQUIRE(ssp::detail::quantize_random_offset(7.3, 0.0, 4.0, 0.25) == Approx(5.0));
  REQUIRE(ssp::detail::quantize_random_offset(7.3, 0.0, 4.0, 0.0) == Approx(4.0));
}

TEST_CASE("release_alg1 keeps each secret in its bin and non-secrets unchanged") {
  const ssp::GaussianDiagParams params({15.0, 68.0, 54.0}, {1.0, 1.0, 2.5});
  const auto spec = three_means();
  const auto cfg = alg1_cfg({6.0, 24.0, 18.0}, {0.0, 0.0, 0.0});
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto out = ssp::release_alg1(params, spec, cfg, seed);
    const auto& released = out.diag();
    REQUIRE(released.means[0] >= 12.0);
    REQUIRE(released.means[0] < 18.0);
    REQUIRE(released.means[1] >= 48.0);
    REQUIRE(released.means[1] < 72.0);
    REQUIRE(released.means[2] >= 54.0);
    REQUIRE(released.means[2] < 72.0);
    REQUIRE(released.stds == params.stds);  // sigma_3 = 2.5 untouched
  }
}

TEST_CASE("release_alg1 is deterministic per seed and varies across seeds") {
  const ssp::GaussianDiagParams params({15.0}, {1.0});
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}}, {1.0});
  const auto cfg = alg1_cfg({6.0}, {0.0});
  const auto a = ssp::release_alg1(params, spec, cfg, 42);
  const auto b = ssp::release_alg1(params, spec, cfg, 42);
  REQUIRE(a.diag().means[0] == b.diag().means[0]);
  std::set<double> seen;
  for (std::uint64_t seed = 0; seed < 32; ++seed)
    seen.insert(ssp::release_alg1(params, spec, cfg, seed).diag().means[0]);
  REQUIRE(seen.size() > 20);
}

TEST_CASE("release_alg1 rejects secrets below the anchor and bad std anchors") {
  const ssp::GaussianDiagParams params({-3.0}, {1.0});
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}}, {1.0});
  REQUIRE_THROWS_WITH(ssp::release_alg1(params, spec, alg1_cfg({6.0}, {0.0}), 1),
                      ContainsSubstring("below its anchor"));

  const ssp::GaussianDiagParams sp({0.0}, {0.5});
  const ssp::SecretSpec sspec({{ssp::ParamKind::Std, 0}}, {0.1});
  REQUIRE_THROWS_WITH(ssp::release_alg1(sp, sspec, alg1_cfg({1.0}, {-10.0}), 1),
                      ContainsSubstring("nonnegative anchor"));
}

TEST_CASE("release_alg2 midpoints") {
  SECTION("only mu1 secret") {
    const ssp::Gaussian2DParams p(7.3, -1.0, 2.0, 3.0, 0.4);
    const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}}, {1.0});
    const auto cfg = midpoint_cfg({4.0, 4.0}, {0.0, -8.0}, {1.0, 1.0}, {0.0, 0.0});
    const auto out = ssp::release_alg2(p, spec, cfg);
    REQUIRE(out.g2d().mu1 == Approx(6.0));
    REQUIRE(out.g2d().mu2 == p.mu2);
    REQUIRE(out.g2d().lambda1 == p.lambda1);
    REQUIRE(out.g2d().lambda2 == p.lambda2);
    REQUIRE(out.g2d().alpha == p.alpha);
  }
  SECTION("sigma secret quantizes both eigen square roots") {
    const ssp::Gaussian2DParams p(0.0, 0.0, 1.2 * 1.2, 2.7 * 2.7, 0.4);
    const ssp::SecretSpec spec({{ssp::ParamKind::Std, 0}}, {0.2});
    const auto cfg = midpoint_cfg({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0});
    const auto out = ssp::release_alg2(p, spec, cfg);
    REQUIRE(std::sqrt(out.g2d().lambda1) == Approx(1.5));
    REQUIRE(std::sqrt(out.g2d().lambda2) == Approx(2.5));
    REQUIRE(out.g2d().alpha == p.alpha);
  }
  SECTION("no secrets leaves theta unchanged") {
    // omitting every parameter from the spec is not representable (d >= 1),
    // so use a mean secret of the other dimension and check identity wiring
    const ssp::Gaussian2DParams p(1.0, 2.5, 2.0, 3.0, 1.0);
    const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 1}}, {0.5});
    const auto cfg = midpoint_cfg({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0});
    const auto out = ssp::release_alg2(p, spec, cfg);
    REQUIRE(out.g2d().mu1 == p.mu1);
    REQUIRE(out.g2d().mu2 == Approx(2.5));
    REQUIRE(out.g2d().lambda1 == p.lambda1);
  }
}

TEST_CASE("release_alg2 is idempotent on already-released parameters") {
  const ssp::Gaussian2DParams p(7.3, 2.2, 1.44, 7.29, 0.4);
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}, {ssp::ParamKind::Std, 0}},
                             {1.0, 0.2});
  const auto cfg = midpoint_cfg({4.0, 4.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0});
  const auto once = ssp::release_alg2(p, spec, cfg);
  const auto twice = ssp::release_alg2(once.g2d(), spec, cfg);
  REQUIRE(twice.g2d().mu1 == once.g2d().mu1);
  REQUIRE(twice.g2d().lambda1 == once.g2d().lambda1);
  REQUIRE(twice.g2d().lambda2 == once.g2d().lambda2);
}

TEST_CASE("release_alg3 agrees with release_alg2 on the equivalent 2-D instance") {
  const double alpha = 0.4;
  const double c = std::cos(alpha), s = std::sin(alpha);
  const ssp::Gaussian2DParams p2(7.3, 2.2, 1.44, 7.29, alpha);
  const ssp::GaussianGeneralParams pg({7.3, 2.2}, {1.2, 2.7}, {c, -s, s, c});
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}, {ssp::ParamKind::Std, 1}},
                             {1.0, 0.2});
  const auto cfg = midpoint_cfg({4.0, 4.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0});
  const auto out2 = ssp::release_alg2(p2, spec, cfg);
  const auto out3 = ssp::release_alg3(pg, spec, cfg);
  REQUIRE(out3.general().means[0] == Approx(out2.g2d().mu1));
  REQUIRE(out3.general().means[1] == Approx(out2.g2d().mu2));
  REQUIRE(out3.general().eig_sqrt[0] == Approx(std::sqrt(out2.g2d().lambda1)));
  REQUIRE(out3.general().eig_sqrt[1] == Approx(std::sqrt(out2.g2d().lambda2)));
  REQUIRE(out3.general().rotation == pg.rotation);
}

TEST_CASE("release_alg3 midpoint eigenvalues, identity rotation") {
  const ssp::GaussianGeneralParams p({0.0, 0.0}, {1.2, 3.4}, {1.0, 0.0, 0.0, 1.0});
  const ssp::SecretSpec spec({{ssp::ParamKind::Std, 0}}, {0.2});
  const auto cfg = midpoint_cfg({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0});
  const auto out = ssp::release_alg3(p, spec, cfg);
  REQUIRE(out.general().eig_sqrt[0] == Approx(1.5));
  REQUIRE(out.general().eig_sqrt[1] == Approx(3.5));

  const ssp::SecretSpec mean_only({{ssp::ParamKind::Mean, 0}}, {0.2});
  const auto out2 = ssp::release_alg3(p, mean_only, cfg);
  REQUIRE(out2.general().eig_sqrt == p.eig_sqrt);
}

TEST_CASE("release_dataset follows the estimate-quantize-refit steps") {
  ssp::Dataset d(3, 1);
  d.at(0, 0) = 1.0;
  d.at(1, 0) = 2.0;
  d.at(2, 0) = 3.0;
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}}, {1.0});
  auto cfg = alg1_cfg({10.0}, {0.0});

  SECTION("forced offset reproduces the worked example") {
    // mu_hat = 2 in bin [0, 10); released mean 5 shifts the column to {4,5,6}
    const auto released = ssp::detail::release_dataset_with_offsets(d, spec, cfg, {0.5});
    REQUIRE(released.at(0, 0) == Approx(4.0));
    REQUIRE(released.at(1, 0) == Approx(5.0));
    REQUIRE(released.at(2, 0) == Approx(6.0));
  }

  SECTION("re-estimated secrets equal the released parameters") {
    const auto out = ssp::release_dataset(d, spec, cfg, 9);
    const auto est = ssp::estimate_params(*out.dataset);
    REQUIRE(est.means[0] == Approx(out.diag().means[0]).margin(1e-12));
    // mean-only secret keeps the empirical SD
    REQUIRE(est.stds[0] == Approx(std::sqrt(2.0 / 3.0)).margin(1e-12));
  }
}

TEST_CASE("release_dataset leaves untouched columns byte-identical") {
  ssp::Rng rng(3);
  ssp::Dataset d(50, 3);
  for (auto& v : d.values) v = rng.gaussian(10.0, 2.0);
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 1}}, {1.0});
  const auto out = ssp::release_dataset(d, spec, alg1_cfg({6.0}, {0.0}), 17);
  for (std::size_t r = 0; r < d.rows; ++r) {
    REQUIRE(out.dataset->at(r, 0) == d.at(r, 0));
    REQUIRE(out.dataset->at(r, 2) == d.at(r, 2));
  }
}

TEST_CASE("release_dataset handles joint mean+std secrets with one affine map") {
  ssp::Rng rng(11);
  ssp::Dataset d(200, 1);
  for (auto& v : d.values) v = rng.gaussian(20.0, 3.0);
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}, {ssp::ParamKind::Std, 0}},
                             {1.0, 0.5});
  const auto out =
      ssp::release_dataset(d, spec, alg1_cfg({6.0, 2.0}, {0.0, 0.0}), 23);
  const auto est = ssp::estimate_params(*out.dataset);
  REQUIRE(est.means[0] == Approx(out.diag().means[0]).epsilon(1e-9));
  REQUIRE(est.stds[0] == Approx(out.diag().stds[0]).epsilon(1e-9));
}

TEST_CASE("release_dataset with a std-only secret keeps the empirical mean") {
  ssp::Rng rng(13);
  ssp::Dataset d(500, 2);
  for (auto& v : d.values) v = rng.gaussian(30.0, 4.0);
  const auto base = ssp::estimate_params(d);
  const ssp::SecretSpec spec({{ssp::ParamKind::Std, 0}}, {0.5});
  const auto out = ssp::release_dataset(d, spec, alg1_cfg({3.0}, {0.0}), 41);
  const auto est = ssp::estimate_params(*out.dataset);
  REQUIRE(est.means[0] == Approx(base.means[0]).epsilon(1e-12));  // mu_r = mu_hat
  REQUIRE(est.stds[0] == Approx(out.diag().stds[0]).epsilon(1e-9));
  REQUIRE(est.stds[0] != Approx(base.stds[0]).epsilon(1e-6));
}

TEST_CASE("release_dataset on a mean secret over a constant column translates it") {
  ssp::Dataset d(4, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    d.at(r, 0) = 7.0;                           // zero-variance column
    d.at(r, 1) = static_cast<double>(r);
  }
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}}, {1.0});
  const auto out = ssp::release_dataset(d, spec, alg1_cfg({10.0}, {0.0}), 3);
  const auto est = ssp::estimate_params(*out.dataset);
  REQUIRE(est.stds[0] == 0.0);  // still constant, only shifted
  REQUIRE(est.means[0] >= 0.0);
  REQUIRE(est.means[0] < 10.0);
  // parameter echo is withheld when a column has no Gaussian representation
  REQUIRE(std::holds_alternative<std::monostate>(out.params));
}

TEST_CASE("dp-histogram releases are deterministic per seed") {
  ssp::Rng rng(14);
  ssp::Dataset d(800, 2);
  for (auto& v : d.values) v = rng.gaussian(0.0, 3.0);
  const auto a = ssp::release_dp_histogram(d, 1.0, 2.0, 77);
  const auto b = ssp::release_dp_histogram(d, 1.0, 2.0, 77);
  REQUIRE(a.dataset->values == b.dataset->values);
  const auto c = ssp::release_dp_histogram(d, 1.0, 2.0, 78);
  REQUIRE(a.dataset->values != c.dataset->values);
}

TEST_CASE("release_dataset rejects std secrets on degenerate columns") {
  ssp::Dataset d(4, 1);
  for (auto& v : d.values) v = 7.0;
  const ssp::SecretSpec spec({{ssp::ParamKind::Std, 0}}, {0.5});
  REQUIRE_THROWS_WITH(ssp::release_dataset(d, spec, alg1_cfg({2.0}, {0.0}), 5),
                      ContainsSubstring("zero-variance"));
}

TEST_CASE("AP Gaussian baseline") {
  ssp::Rng rng(5);
  ssp::Dataset d(4000, 2);
  for (auto& v : d.values) v = rng.gaussian(50.0, 5.0);

  SECTION("zero noise is the identity") {
    const auto out = ssp::release_ap_gaussian(d, 0.0, 1);
    REQUIRE(out.dataset->values == d.values);
  }
  SECTION("seeded runs repeat") {
    const auto a = ssp::release_ap_gaussian(d, 2.0, 99);
    const auto b = ssp::release_ap_gaussian(d, 2.0, 99);
    REQUIRE(a.dataset->values == b.dataset->values);
  }
  SECTION("perturbed mean stays within the CLT band") {
    const double noise_sd = 3.0;
    const auto out = ssp::release_ap_gaussian(d, noise_sd, 7);
    const auto base = ssp::estimate_params(d);
    const auto est = ssp::estimate_params(*out.dataset);
    const double band = 5.0 * noise_sd / std::sqrt(static_cast<double>(d.rows));
    REQUIRE(std::fabs(est.means[0] - base.means[0]) < band);
    REQUIRE(std::fabs(est.means[1] - base.means[1]) < band);
  }
}

TEST_CASE("DistP Laplace baseline") {
  ssp::Rng rng(6);
  ssp::Dataset d(20000, 1);
  for (auto& v : d.values) v = rng.gaussian(0.0, 2.0);

  SECTION("zero scale is the identity") {
    const auto out = ssp::release_distp_laplace(d, 0.0, 1);
    REQUIRE(out.dataset->values == d.values);
  }
  SECTION("seeded determinism") {
    REQUIRE(ssp::release_distp_laplace(d, 1.0, 3).dataset->values ==
            ssp::release_distp_laplace(d, 1.0, 3).dataset->values);
  }
  SECTION("variance grows by 2 scale^2") {
    const double scale = 1.5;
    const auto out = ssp::release_distp_laplace(d, scale, 11);
    const double v0 = std::pow(ssp::estimate_params(d).stds[0], 2);
    const double v1 = std::pow(ssp::estimate_params(*out.dataset).stds[0], 2);
    // Laplace(0, b) has variance 2 b^2; allow a generous statistical band
    REQUIRE(v1 - v0 == Approx(2.0 * scale * scale).epsilon(0.15));
  }
}

TEST_CASE("DP histogram baseline") {
  ssp::Rng rng(8);
  ssp::Dataset d(1000, 1);
  for (auto& v : d.values) v = rng.uniform(10.0, 30.0);

  SECTION("released column count is always m") {
    const auto out = ssp::release_dp_histogram(d, 2.0, 1.0, 3);
    REQUIRE(out.dataset->rows == d.rows);
  }
  SECTION("zero noise preserves the histogram exactly") {
    const double bin_width = 2.0;
    const auto out = ssp::release_dp_histogram(d, bin_width, 0.0, 3);
    double lo = d.values[0], hi = d.values[0];
    for (double v : d.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const auto nbins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width));
    const double width = (hi - lo) / static_cast<double>(nbins);
    std::vector<int> want(nbins, 0), got(nbins, 0);
    for (double v : d.values) {
      auto b = static_cast<std::size_t>((v - lo) / width);
      want[std::min(b, nbins - 1)]++;
    }
    for (double v : out.dataset->values) {
      auto b = static_cast<std::size_t>((v - lo) / width);
      got[std::min(b, nbins - 1)]++;
    }
    REQUIRE(want == got);
  }
  SECTION("single bin with zero noise is uniform on [min, max]") {
    const auto out = ssp::release_dp_histogram(d, 100.0, 0.0, 3);
    double lo = d.values[0], hi = d.values[0];
    for (double v : d.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (double v : out.dataset->values) {
      REQUIRE(v >= lo);
      REQUIRE(v <= hi);
    }
    const auto est = ssp::estimate_params(*out.dataset);
    REQUIRE(est.means[0] == Approx((lo + hi) / 2.0).margin(1.0));
  }
  SECTION("fully clipped histogram is an error") {
    ssp::Rng r(1);
    REQUIRE_THROWS_WITH(
        ssp::detail::sample_from_noisy_histogram({-5.0, -3.0}, 0.0, 1.0, 10, r),
        ContainsSubstring("noise too large"));
  }
}

TEST_CASE("mechanism ids round-trip through strings") {
  for (auto id : {ssp::MechanismId::Alg1, ssp::MechanismId::Alg2, ssp::MechanismId::Alg3,
                  ssp::MechanismId::DatasetMode, ssp::MechanismId::ApGaussian,
                  ssp::MechanismId::DistpLaplace, ssp::MechanismId::DpHistogram})
    REQUIRE(ssp::mechanism_from_string(ssp::to_string(id)) == id);
}
