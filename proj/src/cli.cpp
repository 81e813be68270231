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

#include "eitspec/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "eitspec/errors.hpp"
#include "eitspec/fitting.hpp"
#include "eitspec/fluctuation.hpp"
#include "eitspec/spectrum.hpp"
#include "eitspec/trace_io.hpp"
#include "eitspec/units.hpp"

namespace eitspec {
namespace {

using units::angular_to_khz;
using units::khz_to_angular;

struct ParamFlag {
  const char* name;
  double ModelParams::*field;
  const char* help;
};

constexpr ParamFlag kParamFlags[] = {
    {"delta-sb", &ModelParams::delta_sb, "sideband detuning (kHz)"},
    {"chi", &ModelParams::chi_qt, "dispersive shift chi_qt (kHz)"},
    {"omega-sb", &ModelParams::omega_sb, "sideband coupling (kHz)"},
    {"omega-p", &ModelParams::omega_p, "probe amplitude (kHz)"},
    {"gamma", &ModelParams::gamma, "qubit decay rate (kHz)"},
    {"gamma-phi", &ModelParams::gamma_phi, "qubit dephasing rate (kHz)"},
    {"kappa", &ModelParams::kappa, "resonator decay rate (kHz)"},
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double d : v) out += (out.empty() ? "" : ",") + format_number(d);
  return out;
}

std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// The resolved configuration as metadata entries, external units.
Metadata config_metadata(const RunConfig& c) {
  Metadata m = {{"mode", c.mode}};
  if (c.mode == "calibrate") {
    m.emplace_back("target", c.calibrate_target);
  } else {
    for (auto& entry : params_metadata(c.params, c.hilbert)) {
      if (entry.first == "fock_dim") continue;
      m.push_back(entry);
    }
    m.emplace_back("fock_dim_start", std::to_string(c.hilbert.fock_dim));
    m.emplace_back("max_fock_dim", std::to_string(c.hilbert.max_fock_dim));
    m.emplace_back("top_level_tolerance",
                   format_number(c.hilbert.top_level_tolerance));
    if (c.points == 0) {
      m.emplace_back("sweep", "default");
    } else {
      m.emplace_back("delta_min_khz", format_converted(angular_to_khz(c.delta_min)));
      m.emplace_back("delta_max_khz", format_converted(angular_to_khz(c.delta_max)));
      m.emplace_back("points", std::to_string(c.points));
    }
    m.emplace_back("seed", std::to_string(c.seed));
    m.emplace_back("noise", format_number(c.noise));
  }
  if (c.mode == "map") {
    m.emplace_back("delta_sb_min_khz", format_converted(angular_to_khz(c.delta_sb_min)));
    m.emplace_back("delta_sb_max_khz", format_converted(angular_to_khz(c.delta_sb_max)));
    m.emplace_back("delta_sb_points", std::to_string(c.delta_sb_points));
  }
  if (c.mode == "fit" || c.mode == "classify") {
    m.emplace_back("model", c.model);
    m.emplace_back("free", join(c.free));
    m.emplace_back("guess", c.guess);
    m.emplace_back("input", c.input);
  }
  if (c.mode == "fluctuation-study") {
    m.emplace_back("trend", c.trend);
    m.emplace_back("etas", join(c.etas));
    m.emplace_back("n_sweeps", std::to_string(c.n_sweeps));
  }
  if (c.mode == "calibrate") {
    m.emplace_back("sigma_ns", format_converted(c.pulse.sigma * 1e9));
    m.emplace_back("vpeak", format_number(c.pulse.v_peak));
    m.emplace_back("theta", format_number(c.theta));
    m.emplace_back("g_mhz", format_number(c.g_mhz));
    m.emplace_back("detuning_mhz", format_number(c.detuning_mhz));
    m.emplace_back("drive_mhz", format_number(c.drive_mhz));
    m.emplace_back("gamma_khz", format_converted(angular_to_khz(c.params.gamma)));
    m.emplace_back("kappa_q_hz", format_number(c.kappa_q_hz));
    m.emplace_back("resonance_ghz", format_number(c.resonance_ghz));
    m.emplace_back("margin", format_number(c.margin));
  }
  if (!c.output.empty()) m.emplace_back("output", c.output);
  if (c.timestamp) m.emplace_back("generated", utc_now());
  return m;
}

void print_metadata(std::ostream& out, const Metadata& m) {
  for (const auto& [key, value] : m) out << "# " << key << " = " << value << '\n';
}

std::vector<double> sweep(const RunConfig& c) {
  if (c.points == 0) return default_sweep(c.params);
  return linspace(c.delta_min, c.delta_max, c.points);
}

// Defaults, then values recorded in the trace, then explicit flags.
ModelParams resolve_params(const RunConfig& c, const Metadata& trace_meta) {
  ModelParams p = params_from_metadata(trace_meta, c.params);
  for (const ParamFlag& f : kParamFlags) {
    for (const auto& name : c.explicit_params) {
      if (name == f.name) p.*(f.field) = c.params.*(f.field);
    }
  }
  return p;
}

void emit_trace(const RunConfig& c, const SpectrumTrace& trace,
                Metadata meta, std::ostream& out) {
  meta.emplace_back("fock_dim", std::to_string(trace.hilbert.fock_dim));
  if (c.output.empty()) {
    print_metadata(out, meta);
    out << "delta_khz,rho_ee" << (trace.sigma.empty() ? "" : ",sigma") << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out << format_converted(angular_to_khz(trace.delta[i])) << ','
          << format_number(trace.rho_ee[i]);
      if (!trace.sigma.empty()) out << ',' << format_number(trace.sigma[i]);
      out << '\n';
    }
  } else {
    write_spectrum_trace(c.output, trace, meta);
  }
}

// Values in rad/s-based units are reported in kHz-based units.
std::pair<double, std::string> external(double v, const std::string& unit) {
  if (unit == "rad/s") return {angular_to_khz(v), "kHz"};
  if (unit == "(rad/s)^2") {
    return {v / (units::kAngularPerKhz * units::kAngularPerKhz), "kHz^2"};
  }
  if (unit == "1/(rad/s)") return {v * units::kAngularPerKhz, "1/kHz"};
  return {v, unit};
}

void report_fit(const FitResult& f, std::ostream& out) {
  out << "model: " << f.model << '\n'
      << "converged: " << (f.converged ? "yes" : "no") << " ("
      << f.iterations << " iterations; " << f.message << ")\n"
      << "samples: " << f.n_samples << '\n'
      << "rss: " << format_number(f.rss) << '\n'
      << "information_score: " << format_number(f.information_score()) << '\n';
  for (std::size_t i = 0; i < f.names.size(); ++i) {
    const auto [v, unit] = external(f.values[i], f.units[i]);
    const auto [e, unused] = external(f.std_errors[i], f.units[i]);
    out << "  " << f.names[i] << " = " << format_number(v) << " +- "
        << format_number(e) << ' ' << unit << '\n';
  }
}

std::string result_rows(const std::vector<FitResult>& fits) {
  std::ostringstream s;
  s << "model,converged,iterations,n_samples,rss,information_score,parameter,"
       "value,std_error,unit\n";
  for (const FitResult& f : fits) {
    for (std::size_t i = 0; i < f.names.size(); ++i) {
      const auto [v, unit] = external(f.values[i], f.units[i]);
      const auto [e, unused] = external(f.std_errors[i], f.units[i]);
      s << f.model << ',' << (f.converged ? 1 : 0) << ',' << f.iterations
        << ',' << f.n_samples << ',' << format_number(f.rss) << ','
        << format_number(f.information_score()) << ',' << f.names[i] << ','
        << format_number(v) << ',' << format_number(e) << ',' << unit << '\n';
    }
  }
  return s.str();
}

void emit_table(const RunConfig& c, const Metadata& meta,
                const std::string& table, std::ostream& out) {
  std::ostringstream s;
  print_metadata(s, meta);
  s << table;
  if (c.output.empty()) {
    out << s.str();
  } else {
    write_file_atomic(c.output, s.str());
  }
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  SpectrumTrace trace = compute_spectrum(c.params, sweep(c), c.hilbert);
  if (c.noise > 0.0) {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> gauss(0.0, c.noise);
    for (double& y : trace.rho_ee) y += gauss(rng);
    trace.sigma.assign(trace.size(), c.noise);
  }
  emit_trace(c, trace, config_metadata(c), out);
  return kExitOk;
}

int run_map(const RunConfig& c, std::ostream& out) {
  if (c.output.empty()) throw InvalidInput("map needs --out <directory>");
  const std::filesystem::path dir(c.output);
  std::filesystem::create_directories(dir);
  const std::vector<double> sbs =
      linspace(c.delta_sb_min, c.delta_sb_max, c.delta_sb_points);
  const std::vector<SpectrumTrace> traces =
      compute_detuning_map(c.params, sweep(c), sbs, c.hilbert);
  const Metadata base = config_metadata(c);
  std::ostringstream index;
  print_metadata(index, base);
  index << "index,delta_sb_khz,file\n";
  for (std::size_t k = 0; k < traces.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "trace_%03zu.csv", k);
    Metadata meta = params_metadata(traces[k].params, traces[k].hilbert);
    meta.insert(meta.begin(), {"mode", "map"});
    meta.emplace_back("index", std::to_string(k));
    write_spectrum_trace(dir / name, traces[k], meta);
    index << k << ',' << format_converted(angular_to_khz(sbs[k])) << ',' << name
          << '\n';
  }
  write_file_atomic(dir / "index.csv", index.str());
  out << "wrote " << traces.size() << " traces to " << dir.string() << '\n';
  return kExitOk;
}

int run_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.input.empty()) throw InvalidInput("fit needs --in <trace.csv>");
  std::vector<std::string> warnings;
  Metadata trace_meta;
  std::vector<FitResult> fits;
  std::ostringstream report;

  if (c.model == "fano") {
    const ReflectionTrace trace =
        read_reflection_trace(c.input, {&warnings, &trace_meta});
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    const FitResult f = fit_fano(trace, estimate_fano_guess(trace));
    report_fit(f, report);
    const double ki = f.value("kappa_i");
    if (ki > 0.0) {
      report << "  Q_i = " << format_number(f.value("omega_0") / ki) << '\n';
    }
    fits.push_back(f);
  } else {
    const SpectrumTrace trace =
        read_spectrum_trace(c.input, {&warnings, &trace_meta});
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    if (c.model == "auto") {
      const ModelSelection sel = select_model(trace);
      report << "selected: " << to_string(sel.selected) << '\n'
             << "score_gap: " << format_number(sel.score_gap) << "\n\n";
      report_fit(sel.eit, report);
      report << '\n';
      report_fit(sel.ats, report);
      fits = {sel.eit, sel.ats};
    } else if (c.model == "master") {
      MasterFitConfig cfg;
      cfg.start = resolve_params(c, trace_meta);
      if (c.guess == "auto") cfg.start = estimate_master_guess(trace, cfg.start);
      cfg.free = c.free;
      cfg.hilbert = c.hilbert;
      const FitResult f = fit_master_equation(trace, cfg);
      report_fit(f, report);
      fits.push_back(f);
    } else {
      const FitResult f = fit_lineshape(trace, lineshape_from_string(c.model));
      report_fit(f, report);
      fits.push_back(f);
    }
  }

  out << report.str();
  Metadata meta = config_metadata(c);
  if (c.output.empty()) {
    out << '\n';
    print_metadata(out, meta);
    out << result_rows(fits);
  } else {
    emit_table(c, meta, result_rows(fits), out);
  }
  for (const FitResult& f : fits) {
    if (!f.converged) return kExitNumerical;
  }
  return kExitOk;
}

int run_classify(const RunConfig& c, std::ostream& out) {
  SpectrumTrace trace;
  ModelParams p = c.params;
  bool have_params = true;
  if (c.input.empty()) {
    trace = compute_spectrum(c.params, sweep(c), c.hilbert);
  } else {
    Metadata meta;
    trace = read_spectrum_trace(c.input, {nullptr, &meta});
    p = resolve_params(c, meta);
    have_params = !meta.empty() || !c.explicit_params.empty();
  }
  const ModelSelection sel = select_model(trace);
  std::ostringstream s;
  s << "regime: " << to_string(sel.selected) << '\n'
    << "eit_rss: " << format_number(sel.eit.rss) << '\n'
    << "ats_rss: " << format_number(sel.ats.rss) << '\n'
    << "eit_score: " << format_number(sel.eit_score) << '\n'
    << "ats_score: " << format_number(sel.ats_score) << '\n'
    << "score_gap: " << format_number(sel.score_gap) << '\n';
  if (have_params) {
    s << "parameter_regime: "
      << to_string(classify_regime(p.gamma, p.gamma_phi, p.kappa, p.omega_sb))
      << '\n';
  }
  emit_table(c, config_metadata(c), s.str(), out);
  return kExitOk;
}

int run_fluctuation(const RunConfig& c, std::ostream& out) {
  std::vector<FluctuationTrend> trends;
  if (c.trend == "both") {
    trends = {FluctuationTrend::Telegraphic, FluctuationTrend::Diffusive};
  } else {
    trends = {trend_from_string(c.trend)};
  }
  BiasOptions options;
  options.n_sweeps = c.n_sweeps;
  const std::vector<double> deltas = sweep(c);
  std::ostringstream table;
  table << "eta,kappa_fit_hz,stderr_hz,trend\n";
  bool all_ok = true;
  for (FluctuationTrend t : trends) {
    const BiasCurve curve =
        bias_curve(c.params, deltas, c.etas, t, c.hilbert, options);
    for (const BiasPoint& pt : curve.points) {
      all_ok = all_ok && pt.ok;
      table << format_number(pt.eta) << ','
            << format_number(units::angular_to_hz(pt.kappa_fit)) << ','
            << format_number(units::angular_to_hz(pt.kappa_stderr)) << ','
            << to_string(t) << '\n';
    }
  }
  Metadata meta = config_metadata(c);
  meta.emplace_back("kappa_true_hz",
                    format_number(units::angular_to_hz(c.params.kappa)));
  emit_table(c, meta, table.str(), out);
  return all_ok ? kExitOk : kExitNumerical;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int run_calibrate(const RunConfig& c, std::ostream& out) {
  std::ostringstream s;
  const double mhz = 2.0 * std::numbers::pi * 1e6;
  if (c.calibrate_target == "probe") {
    const double f = probe_conversion_factor(c.pulse, c.theta);
    s << fixed(f / 1e6, 2) << " MHz/arb-unit\n";
  } else if (c.calibrate_target == "kappa-q") {
    const ScalingEstimate e = estimate_kappa_q(c.g_mhz * mhz, c.detuning_mhz * mhz,
                                               c.params.gamma);
    s << "kappa_q = " << fixed(units::angular_to_hz(e.value), 1) << " Hz\n"
      << "detuning_over_g = " << fixed(e.ratio, 2) << '\n'
      << "within_validity = " << (e.within_validity ? "yes" : "no") << '\n';
  } else if (c.calibrate_target == "sideband") {
    const ScalingEstimate e = estimate_sideband_rate(
        c.g_mhz * mhz, c.drive_mhz * mhz, c.detuning_mhz * mhz);
    s << "omega_sb ~ " << fixed(angular_to_khz(e.value), 1) << " kHz\n"
      << "detuning_over_drive = " << fixed(e.ratio, 2) << '\n'
      << "within_validity = " << (e.within_validity ? "yes" : "no") << '\n';
  } else {
    const double q = max_probeable_q(c.kappa_q_hz * 2.0 * std::numbers::pi,
                                     c.resonance_ghz * 2.0 * std::numbers::pi * 1e9,
                                     c.margin);
    std::ostringstream v;
    v << std::setprecision(3) << q;
    s << "Q_max = " << v.str() << '\n';
  }
  emit_table(c, config_metadata(c), s.str(), out);
  return kExitOk;
}

}  // namespace

int parse_command_line(int argc, const char* const* argv, RunConfig& config,
                       std::ostream& out, std::ostream& err) {
  CLI::App app{"Sideband EIT / ATS spectroscopy of a qubit-resonator system"};
  app.name("eitspec");
  app.set_config("--config", "", "TOML or INI file with option values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  app.fallthrough();

  RunConfig c;
  // Parameter flags, linear kHz.
  double khz[std::size(kParamFlags)] = {0.0, 10.0, 100.0, 100.0,
                                         400.0, 0.0, 30.0};
  std::vector<CLI::Option*> param_opts;
  for (std::size_t i = 0; i < std::size(kParamFlags); ++i) {
    param_opts.push_back(app.add_option(std::string("--") + kParamFlags[i].name,
                                        khz[i], kParamFlags[i].help)
                             ->capture_default_str());
  }
  double delta_min_khz = -1500.0, delta_max_khz = 1500.0;
  app.add_option("--fock-dim", c.hilbert.fock_dim, "starting Fock dimension")
      ->capture_default_str()
      ->check(CLI::Range(2, 200));
  app.add_option("--max-fock-dim", c.hilbert.max_fock_dim,
                 "largest Fock dimension tried")
      ->capture_default_str();
  auto* dmin = app.add_option("--delta-min", delta_min_khz, "sweep start (kHz)");
  auto* dmax = app.add_option("--delta-max", delta_max_khz, "sweep end (kHz)");
  app.add_option("--points", c.points, "sweep points (0 = default grid)")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "seed for synthetic noise")
      ->capture_default_str();
  app.add_option("--out", c.output, "output path");
  app.add_flag("--no-timestamp", "omit the generation time from metadata");

  auto* simulate = app.add_subcommand("simulate", "compute a population spectrum");
  simulate->add_option("--noise", c.noise, "Gaussian noise sigma added to rho_ee")
      ->check(CLI::NonNegativeNumber);

  auto* map = app.add_subcommand("map", "spectra over a sideband detuning range");
  double sb_min_khz = -100.0, sb_max_khz = 100.0;
  map->add_option("--delta-sb-min", sb_min_khz, "kHz")->capture_default_str();
  map->add_option("--delta-sb-max", sb_max_khz, "kHz")->capture_default_str();
  map->add_option("--delta-sb-points", c.delta_sb_points)->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "fit a measured or simulated trace");
  fit->add_option("--in", c.input, "trace CSV")->required();
  fit->add_option("--model", c.model)
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "eit", "ats", "lorentzian",
                             "double-lorentzian", "master", "fano"}));
  fit->add_option("--free", c.free, "free master-equation parameters")
      ->delimiter(',')
      ->check(CLI::IsMember(
          {"kappa", "gamma", "gamma_phi", "omega_sb", "delta_sb"}));
  fit->add_option("--guess", c.guess, "master-equation seed")
      ->capture_default_str()
      ->check(CLI::IsMember({"start", "auto"}));

  auto* classify = app.add_subcommand("classify", "EIT or ATS model selection");
  classify->add_option("--in", c.input, "trace CSV (default: simulate)");

  auto* fluct = app.add_subcommand("fluctuation-study",
                                   "kappa bias under decay-rate fluctuations");
  fluct->add_option("--trend", c.trend)
      ->capture_default_str()
      ->check(CLI::IsMember({"both", "telegraphic", "diffusive"}));
  fluct->add_option("--etas", c.etas)->delimiter(',')->capture_default_str();
  fluct->add_option("--n-sweeps", c.n_sweeps)->capture_default_str()
      ->check(CLI::Range(2, 100000));

  auto* cal = app.add_subcommand("calibrate", "calibration helpers");
  cal->require_subcommand(1, 1);
  double sigma_ns = 15.0;
  c.pulse.v_peak = 0.54;
  auto* probe = cal->add_subcommand("probe", "probe amplitude conversion");
  probe->add_option("--sigma-ns", sigma_ns)->capture_default_str();
  probe->add_option("--vpeak", c.pulse.v_peak)->capture_default_str();
  probe->add_option("--theta", c.theta, "rotation angle (rad)")
      ->capture_default_str();
  auto* kq = cal->add_subcommand("kappa-q", "qubit-induced resonator loss");
  kq->add_option("--g-mhz", c.g_mhz)->capture_default_str();
  kq->add_option("--detuning-mhz", c.detuning_mhz)->capture_default_str();
  double gamma_khz = 446.0;
  kq->add_option("--gamma-khz", gamma_khz)->capture_default_str();
  auto* sb = cal->add_subcommand("sideband", "sideband rate scaling");
  sb->add_option("--g-mhz", c.g_mhz)->capture_default_str();
  sb->add_option("--drive-mhz", c.drive_mhz)->capture_default_str();
  sb->add_option("--detuning-mhz", c.detuning_mhz)->capture_default_str();
  auto* mq = cal->add_subcommand("max-q", "largest probeable internal Q");
  mq->add_option("--kappa-q-hz", c.kappa_q_hz)->capture_default_str();
  mq->add_option("--resonance-ghz", c.resonance_ghz)->capture_default_str();
  mq->add_option("--margin", c.margin)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    config.mode.clear();
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (CLI::App* sub : app.get_subcommands()) c.mode = sub->get_name();
  if (c.mode == "calibrate") {
    for (CLI::App* sub : cal->get_subcommands()) c.calibrate_target = sub->get_name();
  }
  for (std::size_t i = 0; i < std::size(kParamFlags); ++i) {
    c.params.*(kParamFlags[i].field) = khz_to_angular(khz[i]);
    if (param_opts[i]->count() > 0) c.explicit_params.push_back(kParamFlags[i].name);
  }
  if (c.mode == "calibrate" && c.calibrate_target == "kappa-q") {
    c.params.gamma = khz_to_angular(gamma_khz);
  }
  if (dmin->count() > 0 || dmax->count() > 0 || c.points > 0) {
    if (c.points == 0) c.points = 401;
    c.delta_min = khz_to_angular(delta_min_khz);
    c.delta_max = khz_to_angular(delta_max_khz);
  }
  c.delta_sb_min = khz_to_angular(sb_min_khz);
  c.delta_sb_max = khz_to_angular(sb_max_khz);
  c.pulse.sigma = sigma_ns * 1e-9;
  c.timestamp = app.count("--no-timestamp") == 0;
  c.hilbert.max_fock_dim = std::max(c.hilbert.max_fock_dim, c.hilbert.fock_dim);

  try {
    c.params.validate();
    c.hilbert.validate();
    c.pulse.validate();
    if (c.points != 0 && (c.points < 2 || !(c.delta_max > c.delta_min))) {
      throw InvalidInput("sweep needs --points >= 2 and --delta-max > --delta-min");
    }
    for (double eta : c.etas) {
      if (!(eta >= 0.0 && eta < 1.0)) throw InvalidInput("eta must be in [0, 1)");
    }
  } catch (const Error& e) {
    err << "eitspec: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }
  config = std::move(c);
  return kExitOk;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.mode == "simulate") return run_simulate(c, out);
    if (c.mode == "map") return run_map(c, out);
    if (c.mode == "fit") return run_fit(c, out, err);
    if (c.mode == "classify") return run_classify(c, out);
    if (c.mode == "fluctuation-study") return run_fluctuation(c, out);
    if (c.mode == "calibrate") return run_calibrate(c, out);
    err << "eitspec: unknown mode '" << c.mode << "'\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "eitspec " << c.mode << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "eitspec " << c.mode << ": " << e.what() << '\n';
    return kExitNumerical;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  RunConfig config;
  const int parsed = parse_command_line(argc, argv, config, out, err);
  if (parsed != kExitOk || config.mode.empty()) return parsed;
  return run(config, out, err);
}

}  // namespace eitspec
