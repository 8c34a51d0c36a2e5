#pragma once

/// @file wavepacket.hpp
/// @brief Transmitted Gaussian wave packets at the cavity exit z = L.
///
/// The transmitted amplitude in channel c is
///
///   psi_c(L, t) = C * Integral dk A(k) exp(-i k^2 t / 2) T_c(k) exp(i k L),
///   A(k) = exp(-(k - k_bar)^2 / sigma^2),  C = (2 pi)^{-3/4} sqrt(2 / sigma),
///
/// and the reported density is |psi_c|^2 / sigma. Times are given as t/t_cl
/// with t_cl = L / k_bar. The spectrum is truncated to k_bar +- 6 sigma and to
/// k > 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mazer/cavity.hpp"
#include "mazer/phase.hpp"
#include "mazer/quadrature.hpp"
#include "mazer/scattering.hpp"

namespace mazer {

inline constexpr double spectral_window_sigmas = 6.0;
inline constexpr double spectral_k_floor = 1e-12;

struct QuadratureOptions {
  std::size_t nodes = 2000;
  std::size_t max_nodes = 32000;
  /// Doubling the node count may change no sample by more than this fraction
  /// of the peak density.
  double tolerance = 1e-6;
};

struct PacketSpec {
  double k_bar = 0.1;
  double sigma = 0.01;
  Channel channel = Channel::excited;
  CavityConfig cavity;
  QuadratureOptions quadrature;

  double k_lower() const { return std::max(spectral_k_floor, k_bar - spectral_window_sigmas * sigma); }
  double k_upper() const { return k_bar + spectral_window_sigmas * sigma; }
  double classical_time() const { return cavity.length_k0L / k_bar; }

  void validate() const {
    cavity.validate();
    if (!(k_bar > 0.0) || !std::isfinite(k_bar)) throw DomainError("k_bar must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    if (!(k_upper() > k_lower())) throw DomainError("spectral window is empty");
    if (quadrature.nodes == 0 || quadrature.max_nodes < quadrature.nodes)
      throw DomainError("quadrature node counts are inconsistent");
  }
};

struct Peak {
  double t_over_tcl = 0.0;
  double height = 0.0;
};

struct TimeSeries {
  std::vector<double> times;       ///< t / t_cl
  std::vector<double> density;     ///< peak-normalised when peak_normalized
  std::vector<double> raw_density; ///< |psi|^2 / sigma
  std::vector<Peak> peaks;         ///< interior local maxima of density
  bool peak_normalized = false;
  std::size_t nodes_used = 0;

  /// Location of the global maximum.
  Peak global_peak() const {
    const auto it = std::max_element(density.begin(), density.end());
    if (it == density.end()) return {};
    const auto i = static_cast<std::size_t>(it - density.begin());
    return {times[i], *it};
  }

  std::vector<Peak> peaks_above(double fraction) const {
    const double top = global_peak().height;
    std::vector<Peak> out;
    for (const Peak &p : peaks)
      if (p.height >= fraction * top) out.push_back(p);
    return out;
  }
};

inline double spectral_amplitude(double k, const PacketSpec &spec) {
  if (k < spec.k_lower() || k > spec.k_upper()) return 0.0;
  const double u = (k - spec.k_bar) / spec.sigma;
  return std::exp(-u * u);
}

inline std::vector<Peak> find_peaks(std::span<const double> times, std::span<const double> values) {
  std::vector<Peak> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] > values[i - 1] && values[i] >= values[i + 1])
      out.push_back({times[i], values[i]});
  return out;
}

namespace detail {

inline double packet_prefactor(double sigma) {
  // |C|^2 / sigma with C = (2 pi)^{-3/4} sqrt(2 / sigma).
  return std::pow(2.0 * std::numbers::pi, -1.5) * 2.0 / (sigma * sigma);
}

struct SpectralNodes {
  std::vector<double> k;
  std::vector<complex> weight; ///< quadrature weight * A(k) * T(k) * e^{ikL}
};

inline SpectralNodes spectral_nodes(const PacketSpec &spec, std::size_t n) {
  const GaussLegendreRule &rule = gauss_legendre(n);
  const double lo = spec.k_lower(), hi = spec.k_upper();
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  SpectralNodes out;
  out.k.resize(n);
  out.weight.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = mid + half * rule.nodes[j];
    out.k[j] = k;
    out.weight[j] = half * rule.weights[j] * spectral_amplitude(k, spec) *
                    transmission(k, spec.cavity, spec.channel) *
                    std::polar(1.0, k * spec.cavity.length_k0L);
  }
  return out;
}

inline std::vector<double> raw_density(const PacketSpec &spec, std::span<const double> t_grid,
                                       std::size_t n) {
  const SpectralNodes nodes = spectral_nodes(spec, n);
  const double t_cl = spec.classical_time();
  const double pref = packet_prefactor(spec.sigma);
  std::vector<double> out(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i] * t_cl;
    complex sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      sum += nodes.weight[j] * std::polar(1.0, -0.5 * nodes.k[j] * nodes.k[j] * t);
    out[i] = pref * std::norm(sum);
  }
  return out;
}

} // namespace detail

/// Transmitted density at z = L on a grid of t/t_cl. Gauss-Legendre nodes are
/// doubled until two successive rules agree to quadrature.tolerance of the
/// peak; throws ConvergenceError otherwise.
inline TimeSeries transmitted_density(const PacketSpec &spec, std::span<const double> t_grid) {
  spec.validate();
  if (!(spec.cavity.length_k0L > 0.0))
    throw DomainError("transmitted density needs a cavity of positive length");
  for (double t : t_grid)
    if (!std::isfinite(t)) throw DomainError("time grid must be finite");

  std::size_t n = spec.quadrature.nodes;
  std::vector<double> coarse = detail::raw_density(spec, t_grid, n);
  double worst_t = t_grid.empty() ? 0.0 : t_grid.front();
  while (2 * n <= spec.quadrature.max_nodes) {
    std::vector<double> fine = detail::raw_density(spec, t_grid, 2 * n);
    const double top = fine.empty() ? 0.0 : *std::max_element(fine.begin(), fine.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const double d = std::abs(fine[i] - coarse[i]);
      if (d > worst) worst = d, worst_t = t_grid[i];
    }
    n *= 2;
    if (worst <= spec.quadrature.tolerance * top) {
      TimeSeries ts;
      ts.times.assign(t_grid.begin(), t_grid.end());
      ts.raw_density = fine;
      ts.density = std::move(fine);
      if (top > 0.0) {
        for (double &d : ts.density) d /= top;
        ts.peak_normalized = true;
      }
      ts.peaks = find_peaks(ts.times, ts.density);
      ts.nodes_used = n;
      return ts;
    }
    coarse = std::move(fine);
  }
  throw ConvergenceError("wavepacket", worst_t,
                         "quadrature not converged at t/t_cl = " + std::to_string(worst_t) +
                             " within " + std::to_string(spec.quadrature.max_nodes) + " nodes");
}

/// Transmission probability in the packet's channel, averaged over |A(k)|^2.
inline double channel_weight(const PacketSpec &spec, Channel channel) {
  spec.validate();
  const GaussLegendreRule &rule = gauss_legendre(spec.quadrature.nodes);
  const double lo = spec.k_lower(), hi = spec.k_upper();
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double k = mid + half * rule.nodes[j];
    const double a2 = std::pow(spectral_amplitude(k, spec), 2) * rule.weights[j];
    den += a2;
    num += a2 * std::norm(transmission(k, spec.cavity, channel));
  }
  return num / den;
}

/// Reflection probability (both internal states) averaged over |A(k)|^2.
inline double reflected_weight(const PacketSpec &spec) {
  spec.validate();
  const GaussLegendreRule &rule = gauss_legendre(spec.quadrature.nodes);
  const double lo = spec.k_lower(), hi = spec.k_upper();
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double k = mid + half * rule.nodes[j];
    const double a2 = std::pow(spectral_amplitude(k, spec), 2) * rule.weights[j];
    const ChannelAmplitudes amp = channel_amplitudes(k, spec.cavity);
    den += a2;
    num += a2 * (std::norm(amp.R_e) + std::norm(amp.R_g));
  }
  return num / den;
}

/// Second-order stationary-phase approximation of the transmitted packet.
struct StationaryPhaseResult {
  double t_ph_over_tcl = 1.0;
  double d2phi_dk2 = 0.0;
  double t_cl = 0.0;
  double k_bar = 0.0;
  double sigma = 0.0;
  double T_abs = 1.0;
  std::vector<double> times;
  std::vector<double> envelope; ///< peak-normalised
  std::string warning;          ///< set when sigma/k_bar is not small

  /// Spreading parameter alpha = t - phi''(k_bar) in natural units.
  double alpha(double t_over_tcl) const { return t_over_tcl * t_cl - d2phi_dk2; }

  /// Unnormalised density |psi|^2 / sigma of the Gaussian approximation.
  double density(double t_over_tcl) const {
    const complex width(2.0 / (sigma * sigma), alpha(t_over_tcl));
    const double energy = 0.5 * k_bar * k_bar;
    const double dt = (t_over_tcl - t_ph_over_tcl) * t_cl;
    const complex amp = T_abs * std::sqrt(2.0 * std::numbers::pi / width) *
                        std::exp(-energy * dt * dt / width);
    return detail::packet_prefactor(sigma) * std::norm(amp);
  }

  Peak grid_peak() const {
    const auto it = std::max_element(envelope.begin(), envelope.end());
    if (it == envelope.end()) return {};
    return {times[static_cast<std::size_t>(it - envelope.begin())], *it};
  }
};

inline StationaryPhaseResult stationary_phase_envelope(const PacketSpec &spec,
                                                       std::span<const double> t_grid,
                                                       const PhaseTimeOptions &opts = {}) {
  spec.validate();
  if (!(spec.cavity.length_k0L > 0.0))
    throw DomainError("stationary-phase envelope needs a cavity of positive length");
  const PhaseTimeResult pt = phase_time(spec.k_bar, spec.cavity, spec.channel, opts);

  StationaryPhaseResult r;
  r.t_ph_over_tcl = pt.t_ph_over_tcl;
  r.d2phi_dk2 = pt.d2phi_dk2;
  r.t_cl = spec.classical_time();
  r.k_bar = spec.k_bar;
  r.sigma = spec.sigma;
  r.T_abs = std::abs(transmission(spec.k_bar, spec.cavity, spec.channel));
  if (spec.sigma / spec.k_bar >= 0.2)
    r.warning = "sigma/k_bar >= 0.2: second-order phase expansion is unreliable";

  r.times.assign(t_grid.begin(), t_grid.end());
  r.envelope.resize(t_grid.size());
  double top = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    r.envelope[i] = r.density(t_grid[i]);
    top = std::max(top, r.envelope[i]);
  }
  if (top > 0.0)
    for (double &v : r.envelope) v /= top;
  return r;
}

struct ChannelReport {
  Channel channel = Channel::excited;
  Peak peak;                           ///< global maximum
  std::vector<Peak> significant_peaks; ///< local maxima >= 10% of peak
  bool split = false;
  double weight = 0.0;
  TimeSeries series;
};

struct SplitReport {
  ChannelReport first;
  ChannelReport second;
  double delay_over_tcl = 0.0; ///< second.peak - first.peak
  double reflected_weight = 0.0;
};

inline constexpr double split_peak_fraction = 0.1;

inline ChannelReport channel_report(const PacketSpec &spec, std::span<const double> t_grid) {
  ChannelReport r;
  r.channel = spec.channel;
  r.series = transmitted_density(spec, t_grid);
  r.peak = r.series.global_peak();
  r.significant_peaks = r.series.peaks_above(split_peak_fraction);
  r.split = r.significant_peaks.size() >= 2;
  r.weight = channel_weight(spec, spec.channel);
  return r;
}

/// Packet analysis for two exit channels: per-channel peaks, the delay
/// between them, channel weights and split flags.
inline SplitReport split_and_delay_report(const CavityConfig &cfg, double k_bar, double sigma,
                                          std::span<const double> t_grid,
                                          const QuadratureOptions &quadrature = {},
                                          Channel first = Channel::excited,
                                          Channel second = Channel::ground) {
  PacketSpec spec{k_bar, sigma, first, cfg, quadrature};
  SplitReport r;
  r.first = channel_report(spec, t_grid);
  spec.channel = second;
  r.second = channel_report(spec, t_grid);
  r.delay_over_tcl = r.second.peak.t_over_tcl - r.first.peak.t_over_tcl;
  r.reflected_weight = (first == Channel::free && second == Channel::free) ? 0.0 : reflected_weight(spec);
  return r;
}

} // namespace mazer
