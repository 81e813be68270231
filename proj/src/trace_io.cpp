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

#include "eitspec/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "eitspec/errors.hpp"
#include "eitspec/units.hpp"

namespace eitspec {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, int line_no) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) +
                         ": cannot parse number '" + cell + "'",
                     line_no);
  }
  if (!std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) +
                         ": non-finite value '" + cell + "'",
                     line_no);
  }
  return v;
}

struct Columns {
  std::vector<double> x, y, sigma;
};

Columns read_columns(const std::filesystem::path& path,
                     const std::string& x_name, const std::string& y_name,
                     const ReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open trace file: " + path.string());

  Columns cols;
  bool have_header = false;
  bool have_sigma = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (options.metadata) {
        const std::string body = trim(std::string_view(t).substr(1));
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
          options.metadata->emplace_back(trim(body.substr(0, eq)),
                                         trim(body.substr(eq + 1)));
        }
      }
      continue;
    }
    const std::vector<std::string> cells = split_csv(t);
    if (!have_header) {
      const bool ok = (cells.size() == 2 || cells.size() == 3) &&
                      cells[0] == x_name && cells[1] == y_name &&
                      (cells.size() == 2 || cells[2] == "sigma");
      if (!ok) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected header '" + x_name + "," + y_name +
                             "[,sigma]', got '" + t + "'",
                         line_no);
      }
      have_sigma = cells.size() == 3;
      have_header = true;
      continue;
    }
    const std::size_t want = have_sigma ? 3 : 2;
    if (cells.size() != want) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(want) + " columns, got " +
                           std::to_string(cells.size()),
                       line_no);
    }
    cols.x.push_back(parse_double(cells[0], line_no));
    cols.y.push_back(parse_double(cells[1], line_no));
    if (have_sigma) cols.sigma.push_back(parse_double(cells[2], line_no));
  }
  if (!have_header) {
    throw EmptyInput("trace file has no header: " + path.string());
  }
  if (cols.x.empty()) {
    throw EmptyInput("trace file has no data rows: " + path.string());
  }

  std::vector<std::size_t> order(cols.x.size());
  std::iota(order.begin(), order.end(), 0);
  if (!std::is_sorted(cols.x.begin(), cols.x.end())) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cols.x[a] < cols.x[b];
    });
    if (options.warnings) {
      options.warnings->push_back("rows in " + path.string() +
                                  " were not sorted; sorted on load");
    }
    Columns sorted;
    for (std::size_t i : order) {
      sorted.x.push_back(cols.x[i]);
      sorted.y.push_back(cols.y[i]);
      if (have_sigma) sorted.sigma.push_back(cols.sigma[i]);
    }
    cols = std::move(sorted);
  }
  for (std::size_t i = 1; i < cols.x.size(); ++i) {
    if (cols.x[i] == cols.x[i - 1]) {
      throw ParseError("duplicate " + x_name + " value " +
                           format_number(cols.x[i]),
                       0);
    }
  }
  return cols;
}

// x values are unit conversions of the stored abscissa and are written with
// 15 significant digits; y and sigma are written in shortest round-trip form.
std::string render(const Metadata& metadata, const std::string& header,
                   const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& sigma) {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) {
    out << "# " << key << " = " << value << '\n';
  }
  out << header << (sigma.empty() ? "" : ",sigma") << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_converted(x[i]) << ',' << format_number(y[i]);
    if (!sigma.empty()) out << ',' << format_number(sigma[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string format_converted(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open for writing: " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw InvalidInput("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SpectrumTrace read_spectrum_trace(const std::filesystem::path& path,
                                  const ReadOptions& options) {
  Metadata local;
  ReadOptions opts = options;
  if (!opts.metadata) opts.metadata = &local;
  Columns cols = read_columns(path, "delta_khz", "rho_ee", opts);
  SpectrumTrace trace;
  trace.delta.reserve(cols.x.size());
  for (double khz : cols.x) trace.delta.push_back(units::khz_to_angular(khz));
  trace.rho_ee = std::move(cols.y);
  trace.sigma = std::move(cols.sigma);
  trace.params = params_from_metadata(*opts.metadata, ModelParams{});
  for (const auto& [key, value] : *opts.metadata) {
    if (key == "fock_dim") trace.hilbert.fock_dim = std::stoi(value);
  }
  return trace;
}

ReflectionTrace read_reflection_trace(const std::filesystem::path& path,
                                      const ReadOptions& options) {
  Columns cols = read_columns(path, "freq_khz", "reflection_mag", options);
  ReflectionTrace trace;
  for (double khz : cols.x) trace.frequency.push_back(units::khz_to_angular(khz));
  trace.magnitude = std::move(cols.y);
  trace.sigma = std::move(cols.sigma);
  return trace;
}

void write_spectrum_trace(const std::filesystem::path& path,
                          const SpectrumTrace& trace,
                          const Metadata& metadata) {
  std::vector<double> khz;
  khz.reserve(trace.delta.size());
  for (double d : trace.delta) khz.push_back(units::angular_to_khz(d));
  write_file_atomic(path, render(metadata, "delta_khz,rho_ee", khz,
                                 trace.rho_ee, trace.sigma));
}

void write_reflection_trace(const std::filesystem::path& path,
                            const ReflectionTrace& trace,
                            const Metadata& metadata) {
  std::vector<double> khz;
  for (double w : trace.frequency) khz.push_back(units::angular_to_khz(w));
  write_file_atomic(path, render(metadata, "freq_khz,reflection_mag", khz,
                                 trace.magnitude, trace.sigma));
}

Metadata params_metadata(const ModelParams& p, const HilbertConfig& h) {
  return {
      {"delta_sb_khz", format_converted(units::angular_to_khz(p.delta_sb))},
      {"chi_qt_khz", format_converted(units::angular_to_khz(p.chi_qt))},
      {"omega_sb_khz", format_converted(units::angular_to_khz(p.omega_sb))},
      {"omega_p_khz", format_converted(units::angular_to_khz(p.omega_p))},
      {"gamma_khz", format_converted(units::angular_to_khz(p.gamma))},
      {"gamma_phi_khz", format_converted(units::angular_to_khz(p.gamma_phi))},
      {"kappa_khz", format_converted(units::angular_to_khz(p.kappa))},
      {"fock_dim", std::to_string(h.fock_dim)},
  };
}

ModelParams params_from_metadata(const Metadata& metadata, ModelParams base) {
  for (const auto& [key, value] : metadata) {
    double* field = nullptr;
    if (key == "delta_sb_khz") field = &base.delta_sb;
    if (key == "chi_qt_khz") field = &base.chi_qt;
    if (key == "omega_sb_khz") field = &base.omega_sb;
    if (key == "omega_p_khz") field = &base.omega_p;
    if (key == "gamma_khz") field = &base.gamma;
    if (key == "gamma_phi_khz") field = &base.gamma_phi;
    if (key == "kappa_khz") field = &base.kappa;
    if (!field) continue;
    try {
      *field = units::khz_to_angular(std::stod(value));
    } catch (const std::exception&) {
      throw ParseError("metadata value for " + key + " is not a number", 0);
    }
  }
  return base;
}

}  // namespace eitspec
