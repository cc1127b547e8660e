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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ssp/distortion.hpp"
#include "ssp/rng.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

// Acklam's inverse normal CDF approximation (|error| < 1.2e-9); test-only
// oracle, independent of the library's sampling paths.
double inv_norm_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    const double q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

ssp::Dataset column(std::vector<double> v) {
  ssp::Dataset d(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) d.at(i, 0) = v[i];
  return d;
}

ssp::Dataset gaussian_cloud(std::size_t m, const std::vector<double>& mean, double sd,
                            std::uint64_t seed) {
  ssp::Dataset d(m, mean.size());
  ssp::Rng base(seed);
  for (std::size_t c = 0; c < mean.size(); ++c) {
    ssp::Rng r = base.stream(c);
    for (std::size_t i = 0; i < m; ++i) d.at(i, c) = r.gaussian(mean[c], sd);
  }
  return d;
}

// Brute-force optimal matching cost by permutation enumeration.
double brute_force_w2(const ssp::Dataset& x, const ssp::Dataset& y) {
  const std::size_t m = x.rows;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < x.cols; ++c) {
        const double diff = x.at(i, c) - y.at(perm[i], c);
        acc += diff * diff;
      }
    best = std::min(best, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(m));
}

}  // namespace

TEST_CASE("w2_gaussian_diag closed form") {
  const ssp::GaussianDiagParams a({0.0, 0.0}, {1.0, 2.0});
  const ssp::GaussianDiagParams b({3.0, 4.0}, {1.0, 2.0});
  REQUIRE(ssp::w2_gaussian_diag(a, b) == Approx(5.0));
  REQUIRE(ssp::w2_gaussian_diag(a, a) == 0.0);
  REQUIRE(ssp::w2_gaussian_diag(a, b) == ssp::w2_gaussian_diag(b, a));

  const ssp::GaussianDiagParams c({0.0}, {1.0});
  const ssp::GaussianDiagParams d({0.0}, {3.0});
  REQUIRE(ssp::w2_gaussian_diag(c, d) == Approx(2.0));

  REQUIRE_THROWS_WITH(ssp::w2_gaussian_diag(a, c), ContainsSubstring("dimension"));
}

TEST_CASE("w2_gaussian_diag sigma shift matches the quantile-sample oracle") {
  // N(0,1) vs N(0,3) at 1e4 quantile points
  const std::size_t n = 10000;
  ssp::Dataset x(n, 1), y(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    x.at(i, 0) = inv_norm_cdf(p);
    y.at(i, 0) = 3.0 * inv_norm_cdf(p);
  }
  const double oracle = ssp::w2_empirical_exact(x, y);
  REQUIRE(oracle == Approx(2.0).margin(1e-2));
}

TEST_CASE("w2_gaussian_2d closed form") {
  SECTION("isotropic covariances ignore rotation") {
    const ssp::Gaussian2DParams a(1.0, 2.0, 1.0, 1.0, 0.3);
    const ssp::Gaussian2DParams b(1.0, 2.0, 1.0, 1.0, 1.2);
    REQUIRE(ssp::w2_gaussian_2d(a, b) == Approx(0.0).margin(1e-12));
  }
  SECTION("equal angles reduce to the eigen square-root distance") {
    const ssp::Gaussian2DParams a(0.0, 0.0, 1.0, 4.0, 0.7);
    const ssp::Gaussian2DParams b(0.0, 0.0, 2.25, 6.25, 0.7);
    REQUIRE(ssp::w2_gaussian_2d(a, b) == Approx(std::sqrt(0.5)));  // 0.70711
  }
  SECTION("identical parameters give zero, symmetric in general") {
    const ssp::Gaussian2DParams a(0.5, -1.0, 2.0, 5.0, 1.1);
    const ssp::Gaussian2DParams b(1.5, 0.0, 3.0, 1.0, 0.2);
    REQUIRE(ssp::w2_gaussian_2d(a, a) == 0.0);
    REQUIRE(ssp::w2_gaussian_2d(a, b) == Approx(ssp::w2_gaussian_2d(b, a)));
  }
}

TEST_CASE("w2_gaussian_2d dominates the marginal-SD lower bound") {
  ssp::Rng rng(314);
  const double pi = std::acos(-1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const ssp::Gaussian2DParams a(rng.uniform(-5, 5), rng.uniform(-5, 5),
                                  rng.uniform(0.1, 9.0), rng.uniform(0.1, 9.0),
                                  rng.uniform(0.0, pi * 0.999));
    const ssp::Gaussian2DParams b(rng.uniform(-5, 5), rng.uniform(-5, 5),
                                  rng.uniform(0.1, 9.0), rng.uniform(0.1, 9.0),
                                  rng.uniform(0.0, pi * 0.999));
    const double w2 = ssp::w2_gaussian_2d(a, b);
    const double dm1 = a.mu1 - b.mu1, dm2 = a.mu2 - b.mu2;
    const double ds1 = a.sigma1() - b.sigma1(), ds2 = a.sigma2() - b.sigma2();
    const double lower = std::sqrt(dm1 * dm1 + dm2 * dm2 + ds1 * ds1 + ds2 * ds2);
    REQUIRE(w2 >= lower - 1e-9);
  }
}

TEST_CASE("w2_empirical_exact basics") {
  REQUIRE(ssp::w2_empirical_exact(column({0.0, 2.0}), column({1.0, 3.0})) == Approx(1.0));
  const auto x = gaussian_cloud(32, {0.0, 0.0}, 1.0, 5);
  REQUIRE(ssp::w2_empirical_exact(x, x) == 0.0);
  REQUIRE_THROWS_WITH(
      ssp::w2_empirical_exact(gaussian_cloud(600, {0.0, 0.0}, 1.0, 1),
                              gaussian_cloud(600, {0.0, 0.0}, 1.0, 2)),
      ContainsSubstring("w2_empirical_sliced"));
}

TEST_CASE("assignment solver matches brute-force enumeration") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ssp::Rng r(seed);
    const std::size_t m = 2 + static_cast<std::size_t>(r.next_unit() * 5.0);
    const auto x = gaussian_cloud(m, {0.0, 0.0}, 2.0, seed * 2 + 100);
    const auto y = gaussian_cloud(m, {1.0, -1.0}, 2.0, seed * 2 + 101);
    REQUIRE(ssp::w2_empirical_exact(x, y) == Approx(brute_force_w2(x, y)).epsilon(1e-10));
  }
}

TEST_CASE("w2_empirical_exact recovers the closed form for shifted clouds") {
  // m=64 from N(0, I) vs N((3,4), I): mean 5.0 within 3 standard errors
  std::vector<double> vals;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = gaussian_cloud(64, {0.0, 0.0}, 1.0, 1000 + seed * 2);
    const auto y = gaussian_cloud(64, {3.0, 4.0}, 1.0, 1001 + seed * 2);
    vals.push_back(ssp::w2_empirical_exact(x, y));
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(vals.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(vals.size()));
  REQUIRE(std::fabs(mean - 5.0) <= 3.0 * se);
}

TEST_CASE("sorted and assignment paths agree on 1-D data") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = gaussian_cloud(40, {2.0}, 3.0, 300 + seed);
    const auto y = gaussian_cloud(40, {5.0}, 1.0, 400 + seed);
    // embed the 1-D data as a second constant coordinate so the exact
    // estimator takes the assignment path with identical costs
    ssp::Dataset x2(40, 2), y2(40, 2);
    for (std::size_t i = 0; i < 40; ++i) {
      x2.at(i, 0) = x.at(i, 0);
      y2.at(i, 0) = y.at(i, 0);
      x2.at(i, 1) = 7.0;
      y2.at(i, 1) = 7.0;
    }
    REQUIRE(ssp::w2_empirical_exact(x, y) ==
            Approx(ssp::w2_empirical_exact(x2, y2)).margin(1e-12));
  }
}

TEST_CASE("w2_empirical_exact satisfies the triangle inequality") {
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    ssp::Rng r(trial);
    const std::size_t m = 3 + static_cast<std::size_t>(r.next_unit() * 13.0);
    const auto x = gaussian_cloud(m, {0.0, 0.0}, 1.5, trial * 3 + 1);
    const auto y = gaussian_cloud(m, {1.0, 2.0}, 1.0, trial * 3 + 2);
    const auto z = gaussian_cloud(m, {-2.0, 0.5}, 2.0, trial * 3 + 3);
    const double xy = ssp::w2_empirical_exact(x, y);
    const double yz = ssp::w2_empirical_exact(y, z);
    const double xz = ssp::w2_empirical_exact(x, z);
    REQUIRE(xz <= xy + yz + 1e-9);
  }
}

TEST_CASE("w2_empirical_sliced") {
  SECTION("equals the exact estimator in 1-D for any seed") {
    const auto x = gaussian_cloud(100, {0.0}, 2.0, 1);
    const auto y = gaussian_cloud(100, {3.0}, 2.0, 2);
    const double exact = ssp::w2_empirical_exact(x, y);
    for (std::uint64_t seed : {0ULL, 7ULL, 123ULL})
      REQUIRE(ssp::w2_empirical_sliced(x, y, 8, seed) == Approx(exact).margin(1e-12));
  }
  SECTION("zero on identical inputs") {
    const auto x = gaussian_cloud(64, {1.0, 2.0, 3.0}, 1.0, 9);
    REQUIRE(ssp::w2_empirical_sliced(x, x, 16, 4) == 0.0);
  }
  SECTION("estimator variance shrinks as projections increase") {
    const auto x = gaussian_cloud(128, {0.0, 0.0}, 1.0, 21);
    const auto y = gaussian_cloud(128, {3.0, 4.0}, 1.0, 22);
    std::vector<double> variances;
    for (std::size_t nproj : {2UL, 8UL, 32UL}) {
      std::vector<double> est;
      for (std::uint64_t seed = 0; seed < 300; ++seed)
        est.push_back(ssp::w2_empirical_sliced(x, y, nproj, seed));
      double mean = 0.0;
      for (double v : est) mean += v;
      mean /= static_cast<double>(est.size());
      double var = 0.0;
      for (double v : est) var += (v - mean) * (v - mean);
      variances.push_back(var / static_cast<double>(est.size() - 1));
    }
    REQUIRE(variances[1] < variances[0]);
    REQUIRE(variances[2] < variances[1]);
  }
}

TEST_CASE("mechanism_distortion closed forms") {
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0},
                              {ssp::ParamKind::Mean, 1},
                              {ssp::ParamKind::Mean, 2}},
                             {1.0, 4.0, 3.0});
  ssp::MechanismConfig cfg;
  cfg.mode = ssp::QuantizationMode::RandomOffset;
  cfg.interval_lengths = {6.0, 24.0, 18.0};
  cfg.lower_anchors = {0.0, 0.0, 0.0};
  REQUIRE(ssp::mechanism_distortion(ssp::MechanismId::Alg1, cfg, spec) ==
          Approx(std::sqrt(936.0)));  // 30.5941

  const ssp::SecretSpec single({{ssp::ParamKind::Mean, 0}}, {0.4});
  ssp::MechanismConfig one;
  one.interval_lengths = {1.0};
  one.lower_anchors = {0.0};
  REQUIRE(ssp::mechanism_distortion(ssp::MechanismId::Alg1, one, single) == Approx(1.0));

  ssp::MechanismConfig mid;
  mid.mode = ssp::QuantizationMode::Midpoint;
  mid.mean_intervals = {4.0, 2.0};
  mid.eig_intervals = {1.0, 1.0};
  const ssp::SecretSpec mu1_only({{ssp::ParamKind::Mean, 0}}, {1.0});
  REQUIRE(ssp::mechanism_distortion(ssp::MechanismId::Alg2, mid, mu1_only) == Approx(2.0));
  const ssp::SecretSpec with_sigma({{ssp::ParamKind::Mean, 0}, {ssp::ParamKind::Std, 1}},
                                   {1.0, 0.3});
  REQUIRE(ssp::mechanism_distortion(ssp::MechanismId::Alg3, mid, with_sigma) ==
          Approx(0.5 * std::sqrt(16.0 + 2.0)));

  REQUIRE_THROWS_WITH(ssp::mechanism_distortion(ssp::MechanismId::ApGaussian, cfg, spec),
                      ContainsSubstring("no closed form"));
}

TEST_CASE("Alg. 1 distortion supremum is tight over seeds") {
  // single secret at its anchor: released values sweep the whole bin
  const ssp::GaussianDiagParams params({0.0}, {1.0});
  const ssp::SecretSpec spec({{ssp::ParamKind::Mean, 0}}, {0.5});
  ssp::MechanismConfig cfg;
  cfg.mode = ssp::QuantizationMode::RandomOffset;
  cfg.interval_lengths = {3.0};
  cfg.lower_anchors = {0.0};
  const double bound = ssp::mechanism_distortion(ssp::MechanismId::Alg1, cfg, spec);
  double sup = 0.0;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const auto out = ssp::release_alg1(params, spec, cfg, seed);
    sup = std::max(sup, ssp::w2_gaussian_diag(params, out.diag()));
  }
  REQUIRE(sup <= bound);
  REQUIRE(sup > 0.99 * bound);
}
