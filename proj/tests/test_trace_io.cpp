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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "eitspec/errors.hpp"
#include "eitspec/trace_io.hpp"
#include "eitspec/units.hpp"
#include "oracle.hpp"

using namespace eitspec;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eitspec_trace_io_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const fs::path p = temp_file(name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("spectrum trace write/read roundtrip") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectrumTrace t;
  t.delta = linspace(units::khz_to_angular(-1500), units::khz_to_angular(1500), 401);
  for (std::size_t i = 0; i < t.size(); ++i) t.rho_ee.push_back(u(rng));
  t.params = oracle::khz(112, 264, 446, 3, 20.3, 7.8, -1.25);
  t.hilbert.fock_dim = 10;
  const fs::path p = temp_file("roundtrip.csv");
  write_spectrum_trace(p, t, params_metadata(t.params, t.hilbert));
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));

  Metadata meta;
  const SpectrumTrace r = read_spectrum_trace(p, {nullptr, &meta});
  REQUIRE(r.size() == 401);
  CHECK(r.rho_ee == t.rho_ee);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r.delta[i] == doctest::Approx(t.delta[i]).epsilon(1e-12));
  }
  CHECK(r.sigma.empty());
  CHECK(r.hilbert.fock_dim == 10);
  CHECK(r.params.kappa == doctest::Approx(t.params.kappa).epsilon(1e-13));
  CHECK(r.params.delta_sb == doctest::Approx(t.params.delta_sb).epsilon(1e-13));
  CHECK(r.params.gamma_phi == doctest::Approx(t.params.gamma_phi).epsilon(1e-13));
  CHECK(meta.size() == 8);

  t.sigma.assign(t.size(), 0.01);
  write_spectrum_trace(p, t);
  CHECK(read_spectrum_trace(p).sigma == t.sigma);
}

TEST_CASE("unit conversion roundtrip") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double khz = std::pow(10.0, u(rng));
    const double back = units::angular_to_khz(units::khz_to_angular(khz));
    CHECK(std::abs(back - khz) <= 1e-12 * khz);
    CHECK(std::stod(format_converted(back)) == doctest::Approx(khz).epsilon(1e-12));
  }
}

TEST_CASE("shuffled rows are sorted with a warning") {
  const fs::path p = write_text("shuffled.csv",
                                "# note = shuffled\n"
                                "delta_khz,rho_ee\n3,0.3\n1,0.1\n2,0.2\n5,0.5\n4,0.4\n");
  std::vector<std::string> warnings;
  const SpectrumTrace t = read_spectrum_trace(p, {&warnings, nullptr});
  CHECK(warnings.size() == 1);
  CHECK(t.rho_ee == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});
  CHECK(units::angular_to_khz(t.delta[0]) == doctest::Approx(1.0));
}

TEST_CASE("malformed files") {
  try {
    read_spectrum_trace(write_text("header.csv", "freq,pop\n1,2\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("delta_khz,rho_ee") != std::string::npos);
    CHECK(e.line() == 1);
  }
  try {
    read_spectrum_trace(write_text("nan.csv", "# c\ndelta_khz,rho_ee\n1,0.1\n2,nan\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    read_spectrum_trace(write_text("bad.csv", "delta_khz,rho_ee\n1,0.1\n2,abc\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(read_spectrum_trace(write_text("cols.csv", "delta_khz,rho_ee\n1,0.1,3\n")),
                  ParseError);
  CHECK_THROWS_AS(read_spectrum_trace(write_text("dup.csv", "delta_khz,rho_ee\n1,0.1\n1,0.2\n")),
                  ParseError);
  CHECK_THROWS_AS(read_spectrum_trace(write_text("empty.csv", "")), EmptyInput);
  CHECK_THROWS_AS(read_spectrum_trace(write_text("only.csv", "# x\ndelta_khz,rho_ee\n")),
                  EmptyInput);
  CHECK_THROWS_AS(read_spectrum_trace(temp_file("missing.csv")), InvalidInput);
  CHECK_THROWS_AS(read_reflection_trace(write_text("wrong.csv", "delta_khz,rho_ee\n1,2\n")),
                  ParseError);
}

TEST_CASE("reflection trace roundtrip") {
  ReflectionTrace t;
  t.frequency = linspace(units::khz_to_angular(7.9e6), units::khz_to_angular(8.1e6), 51);
  for (std::size_t i = 0; i < t.size(); ++i) t.magnitude.push_back(0.5 + 0.001 * i);
  const fs::path p = temp_file("reflection.csv");
  write_reflection_trace(p, t, {{"source", "synthetic"}});
  const ReflectionTrace r = read_reflection_trace(p);
  CHECK(r.magnitude == t.magnitude);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r.frequency[i] == doctest::Approx(t.frequency[i]).epsilon(1e-13));
  }
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_converted(units::angular_to_khz(units::khz_to_angular(30.0))) == "30");
}
