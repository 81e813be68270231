// Copyright 2026 The eitspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eitspec/errors.hpp"
#include "eitspec/fluctuation.hpp"
#include "oracle.hpp"

using namespace eitspec;
using units::khz_to_angular;

namespace {

// (gamma_0, Omega_sb, Omega_p, kappa, chi_qt) = 2 pi x (450, 100, 264, 19, 7.8) kHz.
const ModelParams kBiasSet = oracle::khz(100, 264, 450, 0, 19, 7.8);

std::vector<double> grid() {
  return linspace(khz_to_angular(-800), khz_to_angular(800), 161);
}

double max_abs_diff(const SpectrumTrace& a, const SpectrumTrace& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.rho_ee[i] - b.rho_ee[i]));
  return m;
}

}  // namespace

TEST_CASE("fluctuation rates") {
  FluctuationSpec s{FluctuationTrend::Telegraphic, 0.2, 10.0, 100};
  CHECK(fluctuation_rates(s) == std::vector<double>{8.0, 12.0});
  s.trend = FluctuationTrend::Diffusive;
  s.n_sweeps = 5;
  const auto r = fluctuation_rates(s);
  REQUIRE(r.size() == 5);
  CHECK(r.front() == doctest::Approx(8.0));
  CHECK(r.back() == doctest::Approx(12.0));
  CHECK(r[2] == doctest::Approx(10.0));
  s.eta = 1.0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s.eta = 0.1;
  s.n_sweeps = 1;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  CHECK(trend_from_string("diffusive") == FluctuationTrend::Diffusive);
  CHECK(to_string(FluctuationTrend::Telegraphic) == "telegraphic");
  CHECK_THROWS_AS(trend_from_string("random"), InvalidInput);
}

TEST_CASE("zero amplitude leaves the spectrum unchanged") {
  const SpectrumTrace base = compute_spectrum(kBiasSet, grid(), HilbertConfig{});
  const SpectrumTrace tele = telegraphic_spectrum(kBiasSet, grid(), 0.0, HilbertConfig{});
  const SpectrumTrace diff = diffusive_spectrum(kBiasSet, grid(), 0.0, 7, HilbertConfig{});
  CHECK(max_abs_diff(base, tele) < 1e-14);
  CHECK(max_abs_diff(base, diff) < 1e-14);
}

TEST_CASE("telegraphic trace is the mean of the two endpoint spectra") {
  const double eta = 0.3;
  ModelParams lo = kBiasSet, hi = kBiasSet;
  lo.gamma *= 1.0 - eta;
  hi.gamma *= 1.0 + eta;
  const SpectrumTrace a = compute_spectrum(lo, grid(), HilbertConfig{});
  const SpectrumTrace b = compute_spectrum(hi, grid(), HilbertConfig{});
  const SpectrumTrace t = telegraphic_spectrum(kBiasSet, grid(), eta, HilbertConfig{});
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.rho_ee[i] == doctest::Approx(0.5 * (a.rho_ee[i] + b.rho_ee[i])).epsilon(1e-12));
    CHECK(t.rho_ee[i] >= 0.0);
    CHECK(t.rho_ee[i] <= 1.0);
  }
  const SpectrumTrace base = compute_spectrum(kBiasSet, grid(), HilbertConfig{});
  CHECK(max_abs_diff(t, base) > 0.0);
}

TEST_CASE("diffusive averaging converges and distorts less than the jump") {
  const double eta = 0.3;
  const auto x = linspace(khz_to_angular(-800), khz_to_angular(800), 41);
  const SpectrumTrace d100 = diffusive_spectrum(kBiasSet, x, eta, 100, HilbertConfig{});
  const SpectrumTrace d200 = diffusive_spectrum(kBiasSet, x, eta, 200, HilbertConfig{});
  CHECK(max_abs_diff(d100, d200) < 1e-5);
  const SpectrumTrace base = compute_spectrum(kBiasSet, x, HilbertConfig{});
  const SpectrumTrace tele = telegraphic_spectrum(kBiasSet, x, eta, HilbertConfig{});
  CHECK(max_abs_diff(d100, base) < max_abs_diff(tele, base));
  for (double y : d100.rho_ee) {
    CHECK(y >= 0.0);
    CHECK(y <= 1.0);
  }
}

TEST_CASE("distorted_spectrum dispatches on the trend") {
  const auto x = linspace(khz_to_angular(-400), khz_to_angular(400), 9);
  FluctuationSpec s{FluctuationTrend::Telegraphic, 0.2, kBiasSet.gamma, 3};
  const SpectrumTrace a = distorted_spectrum(kBiasSet, x, s, HilbertConfig{});
  CHECK(a.rho_ee == telegraphic_spectrum(kBiasSet, x, 0.2, HilbertConfig{}).rho_ee);
  s.trend = FluctuationTrend::Diffusive;
  const SpectrumTrace b = distorted_spectrum(kBiasSet, x, s, HilbertConfig{});
  CHECK(b.rho_ee == diffusive_spectrum(kBiasSet, x, 0.2, 3, HilbertConfig{}).rho_ee);
}

TEST_CASE("bias curve records the unperturbed fit at zero amplitude") {
  const auto x = linspace(khz_to_angular(-800), khz_to_angular(800), 81);
  CHECK_THROWS_AS(bias_curve(kBiasSet, x, {0.1}, FluctuationTrend::Telegraphic, HilbertConfig{}),
                  InvalidInput);
  const BiasCurve c =
      bias_curve(kBiasSet, x, {0.0, 0.2}, FluctuationTrend::Telegraphic, HilbertConfig{});
  REQUIRE(c.points.size() == 2);
  CHECK(c.kappa_true == kBiasSet.kappa);
  CHECK(c.points[0].ok);
  CHECK(c.points[0].kappa_fit == doctest::Approx(kBiasSet.kappa).epsilon(1e-4));
  CHECK(c.points[1].ok);
  CHECK(c.points[1].eta == 0.2);
  CHECK(std::isfinite(c.points[1].kappa_fit));
}
