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
#include <string>

#include "eitspec/errors.hpp"
#include "eitspec/spectrum.hpp"
#include "oracle.hpp"

using namespace eitspec;
using units::angular_to_khz;
using units::khz_to_angular;

namespace {

SpectrumTrace synthetic(const std::vector<double>& x,
                        double (*f)(double)) {
  SpectrumTrace t;
  t.delta = x;
  for (double d : x) t.rho_ee.push_back(f(d));
  return t;
}

// Broad Lorentzian (FWHM 4 MHz) minus a narrow one (FWHM 20 kHz). The broad
// line is nearly flat across the dip, so the chord baseline is exact to
// well under a percent.
double broad_minus_narrow(double d) {
  return oracle::lorentzian(d, 0.2, 0.0, khz_to_angular(4000.0)) -
         oracle::lorentzian(d, 0.1, khz_to_angular(5.0), khz_to_angular(20.0));
}

double monotone(double d) { return 1.0 / (1.0 + std::exp(-d / 1e5)); }

}  // namespace

TEST_CASE("spectrum values match the oracle steady state") {
  const ModelParams p = oracle::khz(100, 100, 400, 20, 30, 10);
  const std::vector<double> deltas =
      linspace(khz_to_angular(-800), khz_to_angular(800), 9);
  const SpectrumTrace t = compute_spectrum(p, deltas, HilbertConfig{});
  CHECK(t.size() == 9);
  CHECK(t.hilbert.fock_dim >= 6);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    ModelParams q = p;
    q.delta = deltas[i];
    const double ref =
        oracle::excited(oracle::steady_state(q, t.hilbert.fock_dim), t.hilbert.fock_dim);
    CHECK(t.rho_ee[i] == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("EIT example point: broad peak with an interior dip") {
  const ModelParams p = oracle::khz(100, 100, 400, 0, 30, 10);
  const SpectrumTrace t = compute_spectrum(p, default_sweep(p), HilbertConfig{});
  const auto maxima = local_maxima(t.rho_ee);
  const auto minima = local_minima(t.rho_ee);
  CHECK(maxima.size() == 2);
  REQUIRE(minima.size() == 1);
  CHECK(minima[0] > maxima[0]);
  CHECK(minima[0] < maxima[1]);
  // The dip sits at the two-photon resonance Delta = delta_sb - 2 chi.
  CHECK(std::abs(angular_to_khz(t.delta[minima[0]]) + 20.0) < 3.0);
  const DipMetrics m = measure_dip(t);
  CHECK(m.width < m.total_linewidth);
  CHECK(m.depth >= 0.0);
  CHECK(m.depth <= *std::max_element(t.rho_ee.begin(), t.rho_ee.end()));
}

TEST_CASE("ATS example point: two peaks split by the sideband rate") {
  const ModelParams p = oracle::khz(1000, 100, 400, 0, 30, 10);
  const SpectrumTrace t = compute_spectrum(
      p, linspace(khz_to_angular(-1500), khz_to_angular(1500), 401), HilbertConfig{});
  const auto maxima = local_maxima(t.rho_ee);
  REQUIRE(maxima.size() == 2);
  const double sep = angular_to_khz(t.delta[maxima[1]] - t.delta[maxima[0]]);
  CHECK(std::abs(sep - 1000.0) < 50.0);
}

TEST_CASE("bare qubit line: symmetric Lorentzian of width gamma + 2 gamma_phi") {
  for (double gphi : {0.0, 40.0}) {
    const ModelParams p = oracle::khz(0, 8, 400, gphi, 30, 0);
    const std::vector<double> deltas =
        linspace(khz_to_angular(-2000), khz_to_angular(2000), 2001);
    const SpectrumTrace t = compute_spectrum(p, deltas, HilbertConfig{});
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(std::abs(t.rho_ee[i] - t.rho_ee[t.size() - 1 - i]) < 1e-12);
    }
    // FWHM from linear interpolation of the half-maximum crossings.
    const double peak = *std::max_element(t.rho_ee.begin(), t.rho_ee.end());
    double lo = 0, hi = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double a = t.rho_ee[i - 1] - 0.5 * peak, b = t.rho_ee[i] - 0.5 * peak;
      if (a < 0 && b >= 0) lo = t.delta[i - 1] + (t.delta[i] - t.delta[i - 1]) * a / (a - b);
      if (a >= 0 && b < 0) hi = t.delta[i - 1] + (t.delta[i] - t.delta[i - 1]) * a / (a - b);
    }
    CHECK(angular_to_khz(hi - lo) == doctest::Approx(400.0 + 2 * gphi).epsilon(0.02));
  }
}

TEST_CASE("compute_spectrum input errors and annotation") {
  const ModelParams p = oracle::khz(100, 100, 400, 0, 30, 10);
  CHECK_THROWS_AS(compute_spectrum(p, {}, HilbertConfig{}), InvalidInput);
  CHECK_THROWS_AS(compute_spectrum(p, {2.0, 1.0}, HilbertConfig{}), InvalidInput);
  ModelParams strong = oracle::khz(112, 264, 446, 0, 20.3, 7.8);
  HilbertConfig small;
  small.fock_dim = 2;
  small.max_fock_dim = 4;
  try {
    compute_spectrum(strong, {0.0, 1.0}, small);
    FAIL("expected truncation failure");
  } catch (const TruncationInsufficient& e) {
    CHECK(std::string(e.what()).find("kHz") != std::string::npos);
  }
}

TEST_CASE("compute_spectrum is deterministic") {
  const ModelParams p = oracle::khz(100, 100, 400, 10, 30, 10);
  const auto deltas = linspace(khz_to_angular(-500), khz_to_angular(500), 41);
  const SpectrumTrace a = compute_spectrum(p, deltas, HilbertConfig{});
  const SpectrumTrace b = compute_spectrum(p, deltas, HilbertConfig{});
  CHECK(a.rho_ee == b.rho_ee);
}

TEST_CASE("detuning map symmetry and dip tracking") {
  const ModelParams p = oracle::khz(100, 100, 400, 0, 30, 0);
  const auto deltas = linspace(khz_to_angular(-600), khz_to_angular(600), 241);
  const std::vector<double> sbs = {khz_to_angular(-200), 0.0, khz_to_angular(200)};
  const auto map = compute_detuning_map(p, deltas, sbs, HilbertConfig{});
  REQUIRE(map.size() == 3);
  const std::size_t n = deltas.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(map[0].rho_ee[i] - map[2].rho_ee[n - 1 - i]) < 1e-8);
  }
  CHECK(map[1].params.delta_sb == 0.0);
  const double step = deltas[1] - deltas[0];
  const auto centre = local_minima(map[1].rho_ee);
  REQUIRE(centre.size() == 1);
  CHECK(std::abs(map[1].delta[centre[0]]) <= step);

  // delta_sb = +200 kHz: locate the dip minimum from the oracle on a fine
  // grid around the coarse minimum.
  const SpectrumTrace& row = map[2];
  const auto minima = local_minima(row.rho_ee);
  REQUIRE(!minima.empty());
  std::size_t k = minima[0];
  for (std::size_t j : minima) {
    if (std::abs(row.delta[j] - sbs[2]) < std::abs(row.delta[k] - sbs[2])) k = j;
  }
  ModelParams q = p;
  q.delta_sb = sbs[2];
  double best = 1e9, best_x = 0.0;
  for (int j = -50; j <= 50; ++j) {
    q.delta = row.delta[k] + j * step / 25.0;
    const double v = oracle::excited(oracle::steady_state(q, 6), 6);
    if (v < best) best = v, best_x = q.delta;
  }
  CHECK(std::abs(row.delta[k] - best_x) <= step);
  CHECK(std::abs(angular_to_khz(best_x) - 200.0) < 10.0);
}

TEST_CASE("measure_dip on a synthetic two-Lorentzian trace") {
  const SpectrumTrace t = synthetic(
      linspace(khz_to_angular(-8000), khz_to_angular(8000), 16001), broad_minus_narrow);
  const DipMetrics m = measure_dip(t);
  // The chord baseline sits slightly below the true envelope because the
  // narrow line still has Lorentzian tails at the flanking maxima.
  CHECK(angular_to_khz(m.width) == doctest::Approx(20.0).epsilon(0.02));
  CHECK(angular_to_khz(m.center) == doctest::Approx(5.0).epsilon(0.2));
  CHECK(angular_to_khz(m.total_linewidth) == doctest::Approx(4000.0).epsilon(0.02));
  CHECK(m.depth == doctest::Approx(broad_minus_narrow(m.center)).epsilon(1e-3));
}

TEST_CASE("measure_dip error paths") {
  const auto x = linspace(khz_to_angular(-1500), khz_to_angular(1500), 301);
  CHECK_THROWS_AS(measure_dip(synthetic(x, monotone)), NotInEitRegime);
  const ModelParams p = oracle::khz(0, 100, 400, 0, 30, 10);
  CHECK_THROWS_AS(measure_dip(compute_spectrum(p, x, HilbertConfig{})), NotInEitRegime);
  const auto coarse = linspace(khz_to_angular(-8000), khz_to_angular(8000), 1001);
  CHECK_THROWS_AS(measure_dip(synthetic(coarse, broad_minus_narrow)), NeedsFinerGrid);
}

TEST_CASE("analytic dip width") {
  const double w = analytic_dip_width(khz_to_angular(400), 0, khz_to_angular(30),
                                      khz_to_angular(100));
  CHECK(angular_to_khz(w) == doctest::Approx(430.0 - std::sqrt(430.0 * 430.0 - 1e4)).epsilon(1e-12));
  CHECK(angular_to_khz(w) == doctest::Approx(11.79).epsilon(1e-3));
  CHECK(analytic_dip_width(1.0, 0.0, 1.0, 0.0) == 0.0);
  const double s = 1000.0, om = 10.0;
  CHECK(analytic_dip_width(s, 0.0, 0.0, om) == doctest::Approx(om * om / (2 * s)).epsilon(0.01));
  CHECK_THROWS_AS(analytic_dip_width(1.0, 0.0, 1.0, 3.0), RegimeError);
}

TEST_CASE("ATS peak metrics") {
  const AtsPeaks a = ats_peak_metrics(khz_to_angular(400), 0, khz_to_angular(30),
                                      khz_to_angular(1000));
  CHECK(angular_to_khz(a.separation) == doctest::Approx(1000.0));
  CHECK(angular_to_khz(a.width) == doctest::Approx(215.0));
  const AtsPeaks b = ats_peak_metrics(khz_to_angular(300), khz_to_angular(50),
                                      khz_to_angular(30), khz_to_angular(1000));
  CHECK(b.width == doctest::Approx(a.width).epsilon(1e-14));
}

TEST_CASE("regime classification") {
  auto k = [](double v) { return khz_to_angular(v); };
  CHECK(classify_regime(k(400), 0, k(30), k(100)) == Regime::EIT);
  CHECK(classify_regime(k(400), 0, k(30), k(1000)) == Regime::ATS);
  CHECK(classify_regime(k(400), 0, k(30), k(370)) == Regime::INTERMEDIATE);
  CHECK(classify_regime(k(300), k(50), k(30), k(370)) == Regime::INTERMEDIATE);
  // Resonator-dominated side of |g - kappa| > Omega_sb.
  CHECK(classify_regime(k(30), 0, k(400), k(100)) == Regime::INTERMEDIATE);
  CHECK(to_string(Regime::ATS) == "ATS");
}

TEST_CASE("regime consistency on simulated traces") {
  const ModelParams eit = oracle::khz(100, 100, 400, 0, 30, 10);
  REQUIRE(classify_regime(eit.gamma, eit.gamma_phi, eit.kappa, eit.omega_sb) == Regime::EIT);
  CHECK_NOTHROW(measure_dip(compute_spectrum(eit, default_sweep(eit), HilbertConfig{})));
  const ModelParams ats = oracle::khz(1000, 100, 400, 0, 30, 10);
  REQUIRE(classify_regime(ats.gamma, ats.gamma_phi, ats.kappa, ats.omega_sb) == Regime::ATS);
  const SpectrumTrace t = compute_spectrum(ats, default_sweep(ats), HilbertConfig{});
  CHECK(local_maxima(t.rho_ee).size() >= 2);
}

TEST_CASE("default sweep and helpers") {
  const ModelParams p = oracle::khz(100, 100, 400, 0, 30, 10);
  const auto d = default_sweep(p);
  CHECK(std::is_sorted(d.begin(), d.end()));
  CHECK(std::adjacent_find(d.begin(), d.end()) == d.end());
  CHECK(angular_to_khz(d.front()) == doctest::Approx(-1500.0));
  CHECK(angular_to_khz(d.back()) == doctest::Approx(1500.0));
  CHECK(d.size() > 401);
  const auto l = linspace(0.0, 1.0, 5);
  CHECK(l == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(local_maxima({0, 1, 0, 2, 0}) == std::vector<std::size_t>{1, 3});
  CHECK(local_minima({1, 0, 1, 0, 1}) == std::vector<std::size_t>{1, 3});
  SpectrumTrace t;
  t.delta = {0, 1, 2};
  t.rho_ee = {0, 0, 0};
  CHECK_THROWS_AS(t.validate(), InvalidInput);
}
