#pragma once

/// @file run.hpp
/// @brief Run configuration, figure presets and artifact writers behind the
/// `mazer` command-line tool.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mazer/cavity.hpp"
#include "mazer/phase.hpp"
#include "mazer/scattering.hpp"
#include "mazer/wavepacket.hpp"

namespace mazer {

/// Invalid or contradictory run parameters.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string> &subcommands() {
  static const std::vector<std::string> names{"amplitudes", "phase-sweep", "phase-function",
                                              "packet", "split-report"};
  return names;
}

/// Every field is optional until validate() fills it in.
struct RunConfig {
  std::string subcommand;
  std::optional<std::string> preset;

  std::optional<double> length_k0L;
  std::optional<int> photons_n;
  std::optional<std::string> channel;

  std::optional<double> k; ///< single wavenumber for `amplitudes`
  std::optional<double> k_min;
  std::optional<double> k_max;
  std::optional<double> dk;

  std::optional<double> k_bar;
  std::optional<double> sigma;

  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> t_samples;

  std::optional<int> nodes;
  std::optional<double> h;

  std::string output; ///< empty or "-" writes to stdout without a sidecar
  std::string format = "csv";
};

struct Preset {
  std::string name;
  std::vector<std::string> subcommands;
  double length_k0L;
  std::optional<std::string> channel;
  std::optional<double> k_bar;
  std::optional<double> sigma;
  // Grid defaults; these may be overridden explicitly.
  double k_min = 0.01, k_max = 3.0, dk = 1e-3;
  double t_min = -3.0, t_max = 3.0;
};

inline const std::vector<Preset> &presets() {
  constexpr double pi = std::numbers::pi;
  static const std::vector<Preset> table{
      {"fig3", {"phase-sweep"}, 10 * pi, "excited", {}, {}, 0.01, 3.0, 1e-3},
      {"fig4", {"phase-sweep"}, pi / 2, "excited", {}, {}, 0.01, 10.0, 1e-3},
      {"fig5", {"phase-function"}, pi / 2, "excited", {}, {}, 0.01, 3.0, 1e-3},
      {"fig6a", {"packet", "split-report"}, pi / 2, "excited", 0.1, 0.01},
      {"fig6b", {"packet", "split-report"}, pi / 2, "excited", 10.0, 0.01, 0.01, 3.0, 1e-3, 0.0, 2.0},
      {"fig7", {"phase-sweep"}, pi / 2, "ground", {}, {}, 0.01, 10.0, 1e-3},
      {"fig8", {"split-report"}, pi / 2, {}, 0.1, 0.01},
      {"fig9", {"packet", "split-report"}, 10 * pi, "excited", 10.0, 0.5, 0.01, 3.0, 1e-3, 0.0, 2.0},
  };
  return table;
}

inline const Preset &find_preset(const std::string &name) {
  for (const Preset &p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + name + "'");
}

inline std::string usage_text() {
  return "usage: mazer <amplitudes|phase-sweep|phase-function|packet|split-report> [options]\n"
         "  --preset fig3|fig4|fig5|fig6a|fig6b|fig7|fig8|fig9\n"
         "  --L <k0L> --n <photons> --channel excited|ground\n"
         "  --k <k> | --k-min <a> --k-max <b> --dk <step>\n"
         "  --k-bar <k> --sigma <s> --t-min <t> --t-max <t> --t-samples <N>\n"
         "  --nodes <N> --fd-step <h> --output <path> --format csv|json --config <sidecar.json>\n";
}

namespace detail {

template <class T>
void pin(std::optional<T> &field, const T &value, const char *name, const std::string &preset) {
  if (field && *field != value) {
    std::ostringstream os;
    os << "--" << name << " contradicts preset " << preset;
    throw ConfigError(os.str());
  }
  field = value;
}

template <class T>
void fill(std::optional<T> &field, const T &value) {
  if (!field) field = value;
}

inline bool contains(const std::vector<std::string> &v, const std::string &s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace detail

/// Expands presets, fills defaults and checks physical constraints.
inline RunConfig validate(RunConfig cfg) {
  if (cfg.subcommand.empty())
    throw ConfigError("no subcommand given\n" + usage_text());
  if (!detail::contains(subcommands(), cfg.subcommand))
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'\n" + usage_text());
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json");

  const bool sweep = cfg.subcommand == "phase-sweep" || cfg.subcommand == "phase-function";
  const bool packet = cfg.subcommand == "packet" || cfg.subcommand == "split-report";

  if (cfg.preset) {
    const Preset &p = find_preset(*cfg.preset);
    if (!detail::contains(p.subcommands, cfg.subcommand))
      throw ConfigError("preset " + p.name + " does not apply to " + cfg.subcommand);
    detail::pin(cfg.length_k0L, p.length_k0L, "L", p.name);
    detail::pin(cfg.photons_n, 0, "n", p.name);
    if (p.channel) detail::pin(cfg.channel, *p.channel, "channel", p.name);
    if (p.k_bar) detail::pin(cfg.k_bar, *p.k_bar, "k-bar", p.name);
    if (p.sigma) detail::pin(cfg.sigma, *p.sigma, "sigma", p.name);
    if (sweep) {
      detail::fill(cfg.k_min, p.k_min);
      detail::fill(cfg.k_max, p.k_max);
      detail::fill(cfg.dk, p.dk);
    }
    if (packet) {
      detail::fill(cfg.t_min, p.t_min);
      detail::fill(cfg.t_max, p.t_max);
    }
  }

  if (!cfg.length_k0L) throw ConfigError("--L is required without a preset");
  if (!(*cfg.length_k0L > 0.0) || !std::isfinite(*cfg.length_k0L))
    throw ConfigError("--L must be positive");
  detail::fill(cfg.photons_n, 0);
  if (*cfg.photons_n < 0) throw ConfigError("--n must be non-negative");
  detail::fill(cfg.channel, std::string("excited"));
  if (cfg.subcommand != "amplitudes" && cfg.subcommand != "split-report") {
    const Channel c = parse_channel(*cfg.channel);
    if (c == Channel::free)
      throw ConfigError("--channel must be excited or ground");
    cfg.channel = std::string(to_string(c));
  }

  if (cfg.subcommand == "amplitudes" || sweep) {
    if (cfg.subcommand == "amplitudes" && cfg.k) {
      if (!(*cfg.k > 0.0)) throw ConfigError("--k must be positive");
    } else {
      detail::fill(cfg.k_min, 0.01);
      detail::fill(cfg.k_max, 3.0);
      detail::fill(cfg.dk, 1e-3);
      if (!(*cfg.k_min > 0.0)) throw ConfigError("--k-min must be positive");
      if (!(*cfg.dk > 0.0)) throw ConfigError("--dk must be positive");
      if (!(*cfg.k_max >= *cfg.k_min)) throw ConfigError("--k-max must be >= --k-min");
    }
  }
  if (cfg.subcommand == "phase-sweep") {
    detail::fill(cfg.h, 1e-4);
    if (!(*cfg.h > 0.0)) throw ConfigError("--fd-step must be positive");
    if (!(*cfg.k_min > 2.0 * *cfg.h)) throw ConfigError("--k-min must exceed twice --fd-step");
  }
  if (packet) {
    if (!cfg.k_bar) throw ConfigError("--k-bar is required");
    if (!cfg.sigma) throw ConfigError("--sigma is required");
    if (!(*cfg.k_bar > 0.0)) throw ConfigError("--k-bar must be positive");
    if (!(*cfg.sigma > 0.0)) throw ConfigError("--sigma must be positive");
    detail::fill(cfg.t_min, -3.0);
    detail::fill(cfg.t_max, 3.0);
    detail::fill(cfg.t_samples, 801);
    detail::fill(cfg.nodes, 2000);
    if (*cfg.t_samples < 2) throw ConfigError("--t-samples must be at least 2");
    if (!(*cfg.t_max > *cfg.t_min)) throw ConfigError("--t-max must exceed --t-min");
    if (*cfg.nodes < 1) throw ConfigError("--nodes must be positive");
  }
  return cfg;
}

inline std::vector<double> k_grid(const RunConfig &cfg) {
  if (cfg.k) return {*cfg.k};
  const auto count = static_cast<std::size_t>(std::floor((*cfg.k_max - *cfg.k_min) / *cfg.dk + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = *cfg.k_min + static_cast<double>(i) * *cfg.dk;
  return g;
}

inline std::vector<double> time_grid(double t_min, double t_max, int samples) {
  std::vector<double> g(static_cast<std::size_t>(samples));
  const double step = (t_max - t_min) / (samples - 1);
  for (int i = 0; i < samples; ++i) g[static_cast<std::size_t>(i)] = t_min + i * step;
  g.back() = t_max;
  return g;
}

/// Shortest form with 17 significant digits; independent of locale.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

/// Column-oriented table that renders to CSV or a JSON array of rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto &row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        const auto &cell = row[i];
        if (cell.is_number_float()) out += format_double(cell.get<double>());
        else if (cell.is_number()) out += cell.dump();
        else if (cell.is_string()) out += cell.get<std::string>();
        else out += "nan";
      }
      out += '\n';
    }
    return out;
  }

  std::string to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

inline nlohmann::ordered_json sidecar(const RunConfig &cfg) {
  using json = nlohmann::ordered_json;
  auto opt = [](const auto &o) -> json { return o ? json(*o) : json(nullptr); };
  json j;
  j["subcommand"] = cfg.subcommand;
  j["preset"] = opt(cfg.preset);
  j["L"] = opt(cfg.length_k0L);
  j["n"] = opt(cfg.photons_n);
  j["channel"] = opt(cfg.channel);
  j["k"] = opt(cfg.k);
  j["k_min"] = opt(cfg.k_min);
  j["k_max"] = opt(cfg.k_max);
  j["dk"] = opt(cfg.dk);
  j["k_bar"] = opt(cfg.k_bar);
  j["sigma"] = opt(cfg.sigma);
  j["t_min"] = opt(cfg.t_min);
  j["t_max"] = opt(cfg.t_max);
  j["t_samples"] = opt(cfg.t_samples);
  j["nodes"] = opt(cfg.nodes);
  j["fd_step"] = opt(cfg.h);
  j["format"] = cfg.format;
  j["output"] = cfg.output;
  const PhaseTimeOptions pt;
  const QuadratureOptions q;
  j["tolerances"] = {{"phase_step_tolerance", pt.tolerance},
                     {"phase_min_step", pt.min_step},
                     {"quadrature_tolerance", q.tolerance},
                     {"quadrature_max_nodes", q.max_nodes},
                     {"spectral_window_sigmas", spectral_window_sigmas},
                     {"split_peak_fraction", split_peak_fraction}};
  return j;
}

/// Reads a sidecar written by a previous run; `tolerances` is informational.
inline RunConfig config_from_json(const nlohmann::json &j) {
  RunConfig cfg;
  auto get = [&](const char *key, auto &field) {
    if (j.contains(key) && !j.at(key).is_null())
      field = j.at(key).get<typename std::decay_t<decltype(field)>::value_type>();
  };
  if (j.contains("subcommand")) cfg.subcommand = j.at("subcommand").get<std::string>();
  get("preset", cfg.preset);
  get("L", cfg.length_k0L);
  get("n", cfg.photons_n);
  get("channel", cfg.channel);
  get("k", cfg.k);
  get("k_min", cfg.k_min);
  get("k_max", cfg.k_max);
  get("dk", cfg.dk);
  get("k_bar", cfg.k_bar);
  get("sigma", cfg.sigma);
  get("t_min", cfg.t_min);
  get("t_max", cfg.t_max);
  get("t_samples", cfg.t_samples);
  get("nodes", cfg.nodes);
  get("fd_step", cfg.h);
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
  return cfg;
}

/// Fields set in `over` replace those in `base`.
inline RunConfig merge(RunConfig base, const RunConfig &over) {
  auto take = [](auto &dst, const auto &src) {
    if (src) dst = src;
  };
  if (!over.subcommand.empty()) base.subcommand = over.subcommand;
  take(base.preset, over.preset);
  take(base.length_k0L, over.length_k0L);
  take(base.photons_n, over.photons_n);
  take(base.channel, over.channel);
  take(base.k, over.k);
  take(base.k_min, over.k_min);
  take(base.k_max, over.k_max);
  take(base.dk, over.dk);
  take(base.k_bar, over.k_bar);
  take(base.sigma, over.sigma);
  take(base.t_min, over.t_min);
  take(base.t_max, over.t_max);
  take(base.t_samples, over.t_samples);
  take(base.nodes, over.nodes);
  take(base.h, over.h);
  if (!over.output.empty()) base.output = over.output;
  return base;
}

namespace detail {

inline CavityConfig cavity_of(const RunConfig &cfg) { return {*cfg.length_k0L, *cfg.photons_n}; }

inline Table amplitudes_table(const RunConfig &cfg) {
  const CavityConfig cav = cavity_of(cfg);
  Table t;
  t.columns = {"k",      "k_plus_re", "k_plus_im", "k_minus", "T_e_re", "T_e_im", "R_e_re",
               "R_e_im", "T_g_re",    "T_g_im",    "R_g_re",  "R_g_im", "unitarity"};
  for (double k : k_grid(cfg)) {
    const DressedWavenumbers q = dressed_wavenumbers(k, cav);
    const ChannelAmplitudes a = channel_amplitudes(k, cav);
    t.rows.push_back({k, q.k_plus.real(), q.k_plus.imag(), q.k_minus.real(), a.T_e.real(),
                      a.T_e.imag(), a.R_e.real(), a.R_e.imag(), a.T_g.real(), a.T_g.imag(),
                      a.R_g.real(), a.R_g.imag(), a.total_probability()});
  }
  return t;
}

inline Table phase_sweep_table(const RunConfig &cfg) {
  PhaseTimeOptions opts;
  opts.h = *cfg.h;
  const auto grid = k_grid(cfg);
  const auto sweep = phase_time_sweep(cavity_of(cfg), parse_channel(*cfg.channel), grid, opts);
  Table t;
  t.columns = {"k_bar", "t_ph_over_tcl", "T_abs2", "flag"};
  for (const SweepPoint &p : sweep)
    t.rows.push_back({p.k_bar, p.result ? p.result->t_ph_over_tcl : std::nan(""), p.T_abs2, p.flag});
  return t;
}

inline Table phase_function_table(const RunConfig &cfg) {
  const auto grid = k_grid(cfg);
  const auto samples = phase_grid(cavity_of(cfg), parse_channel(*cfg.channel), grid);
  Table t;
  t.columns = {"k", "phi", "phase_function"};
  for (const PhaseSample &s : samples) t.rows.push_back({s.k, s.phi, s.phase_function});
  return t;
}

inline PacketSpec packet_spec(const RunConfig &cfg, Channel channel) {
  PacketSpec spec{*cfg.k_bar, *cfg.sigma, channel, cavity_of(cfg), {}};
  spec.quadrature.nodes = static_cast<std::size_t>(*cfg.nodes);
  spec.quadrature.max_nodes = std::max(spec.quadrature.max_nodes, 16 * spec.quadrature.nodes);
  return spec;
}

inline Table packet_table(const RunConfig &cfg) {
  const auto times = time_grid(*cfg.t_min, *cfg.t_max, *cfg.t_samples);
  const TimeSeries cavity = transmitted_density(packet_spec(cfg, parse_channel(*cfg.channel)), times);
  const TimeSeries free = transmitted_density(packet_spec(cfg, Channel::free), times);
  Table t;
  t.columns = {"t_over_tcl", "density_cavity", "density_free"};
  for (std::size_t i = 0; i < times.size(); ++i)
    t.rows.push_back({times[i], cavity.density[i], free.density[i]});
  return t;
}

inline nlohmann::ordered_json channel_json(const ChannelReport &c) {
  using json = nlohmann::ordered_json;
  json peaks = json::array();
  for (const Peak &p : c.significant_peaks)
    peaks.push_back({{"t_over_tcl", p.t_over_tcl}, {"height", p.height}});
  return {{"channel", std::string(to_string(c.channel))},
          {"peak_t_over_tcl", c.peak.t_over_tcl},
          {"significant_peaks", peaks},
          {"split", c.split},
          {"weight", c.weight},
          {"nodes_used", c.series.nodes_used}};
}

inline std::string split_report_json(const RunConfig &cfg) {
  using json = nlohmann::ordered_json;
  const auto times = time_grid(*cfg.t_min, *cfg.t_max, *cfg.t_samples);
  const PacketSpec spec = packet_spec(cfg, Channel::excited);
  const SplitReport r = split_and_delay_report(spec.cavity, spec.k_bar, spec.sigma, times, spec.quadrature);
  json j;
  j["parameters"] = sidecar(cfg);
  j["channels"] = json::array({channel_json(r.first), channel_json(r.second)});
  j["delay_over_tcl"] = r.delay_over_tcl;
  j["reflected_weight"] = r.reflected_weight;
  j["series"] = {{"t_over_tcl", r.first.series.times},
                 {"excited", r.first.series.density},
                 {"ground", r.second.series.density}};
  return j.dump(2) + "\n";
}

} // namespace detail

/// Main artifact of a validated run as text (CSV or JSON).
inline std::string render(const RunConfig &cfg) {
  if (cfg.subcommand == "split-report") return detail::split_report_json(cfg);
  Table t;
  if (cfg.subcommand == "amplitudes") t = detail::amplitudes_table(cfg);
  else if (cfg.subcommand == "phase-sweep") t = detail::phase_sweep_table(cfg);
  else if (cfg.subcommand == "phase-function") t = detail::phase_function_table(cfg);
  else if (cfg.subcommand == "packet") t = detail::packet_table(cfg);
  else throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
  return cfg.format == "json" ? t.to_json() : t.to_csv();
}

inline std::string sidecar_path(const std::string &output) { return output + ".run.json"; }

/// Validates, computes and writes the artifact plus its parameter sidecar.
inline void run(const RunConfig &raw, std::ostream &stdout_stream = std::cout) {
  const RunConfig cfg = validate(raw);
  const std::string text = render(cfg);
  if (cfg.output.empty() || cfg.output == "-") {
    stdout_stream << text;
    return;
  }
  auto write = [](const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << content;
  };
  write(cfg.output, text);
  write(sidecar_path(cfg.output), sidecar(cfg).dump(2) + "\n");
}

} // namespace mazer
