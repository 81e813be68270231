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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eitspec/cli.hpp"
#include "eitspec/fitting.hpp"
#include "eitspec/spectrum.hpp"
#include "eitspec/trace_io.hpp"
#include "eitspec/units.hpp"

using namespace eitspec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "eitspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eitspec_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

double field(const std::string& text, const std::string& key,
             const std::string& sep = ": ") {
  const auto pos = text.find(key + sep);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + sep.size()));
}

}  // namespace

TEST_CASE("calibrate probe prints the conversion factor") {
  const Outcome o = cli({"calibrate", "probe", "--sigma-ns", "15", "--vpeak", "0.54"});
  CHECK(o.code == 0);
  CHECK(o.out.find("\n25.80 MHz/arb-unit\n") != std::string::npos);
  CHECK(o.out.find("# mode = calibrate") != std::string::npos);
  const Outcome k = cli({"calibrate", "kappa-q", "--no-timestamp"});
  CHECK(k.code == 0);
  CHECK(k.out.find("kappa_q = 102.7 Hz") != std::string::npos);
  CHECK(k.out.find("generated") == std::string::npos);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"simulate", "--kappa", "-3"}).code == 2);
  CHECK(cli({"simulate", "--kappa", "abc"}).code == 2);
  CHECK(cli({"fit", "--model", "voigt", "--in", "x.csv"}).code == 2);
  CHECK(cli({"fluctuation-study", "--etas", "0,1.5"}).code == 2);
  const fs::path bad = scratch("bad.toml");
  std::ofstream(bad) << "this is = = not valid [\n";
  CHECK(cli({"--config", bad.string(), "simulate"}).code == 2);
  CHECK(cli({"--config", scratch("absent.toml").string(), "simulate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("numerical failures exit with status 1") {
  const Outcome o = cli({"fit", "--in", scratch("does_not_exist.csv").string()});
  CHECK(o.code == 1);
  CHECK(!o.err.empty());
  const Outcome t = cli({"simulate", "--fock-dim", "2", "--max-fock-dim", "2",
                         "--omega-p", "2000", "--omega-sb", "1000", "--kappa", "5"});
  CHECK(t.code == 1);
  CHECK(t.err.find("kHz") != std::string::npos);
}

TEST_CASE("simulate then fit the EIT example trace") {
  const fs::path trace = scratch("eit.csv");
  const Outcome s = cli({"simulate", "--omega-sb", "100", "--omega-p", "100", "--gamma", "400",
                         "--gamma-phi", "0", "--kappa", "30", "--chi", "10", "--out",
                         trace.string()});
  REQUIRE(s.code == 0);
  const SpectrumTrace t = read_spectrum_trace(trace);
  const auto minima = local_minima(t.rho_ee);
  REQUIRE(minima.size() == 1);
  // Interior minimum at the two-photon resonance, close to zero on the
  // scale of the overall line.
  const DipMetrics dip = measure_dip(t);
  CHECK(std::abs(t.delta[minima[0]]) < 0.05 * dip.total_linewidth);

  const Outcome eit = cli({"fit", "--in", trace.string(), "--model", "eit"});
  const Outcome ats = cli({"fit", "--in", trace.string(), "--model", "ats"});
  CHECK(eit.code == 0);
  CHECK(eit.out.find("converged: yes") != std::string::npos);
  CHECK(field(eit.out, "rss") < field(ats.out, "rss"));
  CHECK(eit.out.find("model,converged,iterations") != std::string::npos);

  const Outcome cls = cli({"classify", "--in", trace.string()});
  CHECK(cls.code == 0);
  CHECK(cls.out.find("regime: EIT") != std::string::npos);
  CHECK(cls.out.find("parameter_regime: EIT") != std::string::npos);
  CHECK(cls.out.find("ats_rss: ") != std::string::npos);

  const fs::path row = scratch("row.csv");
  CHECK(cli({"fit", "--in", trace.string(), "--model", "auto", "--out", row.string()}).code == 0);
  CHECK(slurp(row).find("\neit,1,") != std::string::npos);
}

TEST_CASE("outputs are deterministic without timestamps") {
  const fs::path a = scratch("det_a.csv"), b = scratch("det_b.csv");
  const std::vector<std::string> common = {"simulate", "--points", "101", "--delta-min", "-500",
                                           "--delta-max", "500", "--noise", "0.001",
                                           "--seed", "7", "--no-timestamp", "--out"};
  auto args_a = common, args_b = common;
  args_a.push_back(a.string());
  args_b.push_back(b.string());
  REQUIRE(cli(args_a).code == 0);
  REQUIRE(cli(args_b).code == 0);
  std::string ta = slurp(a), tb = slurp(b);
  // The output path is echoed; drop that line before comparing.
  auto strip = [](std::string s) {
    const auto p = s.find("# output = ");
    return s.erase(p, s.find('\n', p) - p + 1);
  };
  CHECK(strip(ta) == strip(tb));
  CHECK(ta.find(",sigma\n") != std::string::npos);
  CHECK(ta.find("generated") == std::string::npos);
}

TEST_CASE("config file values and flag overrides") {
  const fs::path cfg = scratch("run.toml");
  std::ofstream(cfg) << "kappa = 25\ngamma = 350\npoints = 21\n";
  const Outcome o = cli({"--config", cfg.string(), "simulate", "--gamma", "300",
                         "--no-timestamp"});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("# kappa_khz = 25\n") != std::string::npos);
  CHECK(o.out.find("# gamma_khz = 300\n") != std::string::npos);
  CHECK(o.out.find("# points = 21\n") != std::string::npos);
  CHECK(o.out.find("# omega_sb_khz = 100\n") != std::string::npos);
}

TEST_CASE("map writes one trace per sideband detuning and an index") {
  const fs::path dir = scratch("map");
  fs::remove_all(dir);
  const Outcome o = cli({"map", "--points", "41", "--delta-min", "-400", "--delta-max", "400",
                         "--delta-sb-min", "-100", "--delta-sb-max", "100",
                         "--delta-sb-points", "3", "--out", dir.string()});
  REQUIRE(o.code == 0);
  CHECK(fs::exists(dir / "trace_000.csv"));
  CHECK(fs::exists(dir / "trace_002.csv"));
  const std::string index = slurp(dir / "index.csv");
  CHECK(index.find("index,delta_sb_khz,file\n") != std::string::npos);
  CHECK(index.find("2,100,trace_002.csv") != std::string::npos);
  const SpectrumTrace last = read_spectrum_trace(dir / "trace_002.csv");
  CHECK(units::angular_to_khz(last.params.delta_sb) == doctest::Approx(100.0));
}

TEST_CASE("fluctuation study emits a bias table") {
  const fs::path out = scratch("bias.csv");
  const Outcome o = cli({"fluctuation-study", "--trend", "telegraphic", "--etas", "0,0.1",
                         "--omega-sb", "100", "--omega-p", "264", "--gamma", "450",
                         "--kappa", "19", "--chi", "7.8", "--points", "61",
                         "--delta-min", "-600", "--delta-max", "600", "--out", out.string()});
  CHECK(o.code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("eta,kappa_fit_hz,stderr_hz,trend\n") != std::string::npos);
  CHECK(text.find("\n0,") != std::string::npos);
  CHECK(text.find(",telegraphic\n") != std::string::npos);
  CHECK(text.find("# kappa_true_hz = ") != std::string::npos);
}

TEST_CASE("fit a reflection trace") {
  const double k = units::khz_to_angular(1.0);
  const double w0 = units::khz_to_angular(8e6);
  ReflectionTrace t;
  t.frequency = linspace(w0 - 150 * k, w0 + 150 * k, 301);
  for (double w : t.frequency) {
    t.magnitude.push_back(fano_reflection_model(w, {w0, 17.2 * k, 5 * k, 0.4, 0.9, 0.0}));
  }
  const fs::path p = scratch("reflection.csv");
  write_reflection_trace(p, t);
  const Outcome o = cli({"fit", "--in", p.string(), "--model", "fano"});
  CHECK(o.code == 0);
  CHECK(field(o.out, "kappa_i", " = ") == doctest::Approx(17.2).epsilon(1e-6));
  CHECK(o.out.find("Q_i = ") != std::string::npos);
}
