#pragma once

/// @file phase.hpp
/// @brief Transmission phase, the phase function phi(k) + kL, and the Wigner
/// phase time t_ph/t_cl = 1 + phi'(k)/L.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mazer/cavity.hpp"
#include "mazer/scattering.hpp"

namespace mazer {

/// Below this modulus a transmission amplitude is treated as a zero and its
/// phase as undefined.
inline constexpr double zero_amplitude = 1e-150;

class StencilError : public ConvergenceError {
public:
  using ConvergenceError::ConvergenceError;
};

struct PhaseSample {
  double k = 0.0;
  double phi = 0.0;            ///< unwrapped arg T(k)
  double phase_function = 0.0; ///< phi + k L
  bool flagged = false;        ///< |T| vanished; phi interpolated
};

struct PhaseTimeResult {
  double k_bar = 0.0;
  double t_ph_over_tcl = 1.0;
  double dphi_dk = 0.0;
  double d2phi_dk2 = 0.0;
  Channel channel = Channel::excited;
  double step = 0.0; ///< finite-difference step actually used
};

struct PhaseTimeOptions {
  double h = 1e-4;
  /// Halve h until successive estimates of t_ph/t_cl agree within tolerance.
  bool refine = true;
  double tolerance = 1e-5;
  double min_step = 1e-9;
};

/// Continues a wrapped phase sequence by nearest multiples of 2 pi.
inline std::vector<double> unwrap_phase(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  for (std::size_t i = 1; i < out.size(); ++i)
    out[i] = out[i - 1] + std::remainder(wrapped[i] - wrapped[i - 1], 2.0 * std::numbers::pi);
  return out;
}

inline std::vector<PhaseSample> phase_grid(const CavityConfig &cfg, Channel channel,
                                           std::span<const double> k_grid) {
  std::vector<PhaseSample> out(k_grid.size());
  std::vector<double> raw;
  std::vector<std::size_t> valid;
  raw.reserve(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const double k = k_grid[i];
    require_positive_k(k);
    if (i > 0 && !(k > k_grid[i - 1]))
      throw DomainError("phase grid must be strictly ascending");
    out[i].k = k;
    const complex t = transmission(k, cfg, channel);
    if (std::abs(t) < zero_amplitude) {
      out[i].flagged = true;
      continue;
    }
    raw.push_back(std::arg(t));
    valid.push_back(i);
  }

  const std::vector<double> cont = unwrap_phase(raw);
  for (std::size_t j = 0; j < valid.size(); ++j)
    out[valid[j]].phi = cont[j];

  // Interpolate across zeros of |T| from the nearest valid neighbours.
  if (!valid.empty()) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!out[i].flagged) continue;
      const auto right = std::lower_bound(valid.begin(), valid.end(), i);
      if (right == valid.begin()) {
        out[i].phi = out[*right].phi;
      } else if (right == valid.end()) {
        out[i].phi = out[valid.back()].phi;
      } else {
        const auto &a = out[*(right - 1)];
        const auto &b = out[*right];
        out[i].phi = a.phi + (b.phi - a.phi) * (out[i].k - a.k) / (b.k - a.k);
      }
    }
  }

  for (auto &s : out)
    s.phase_function = s.phi + s.k * cfg.length_k0L;
  return out;
}

namespace detail {

struct Stencil {
  double d1;
  double d2;
};

// Five-point central differences of arg T, each point measured relative to
// the centre so no global unwrapping is needed.
inline Stencil phase_stencil(double k_bar, double h, const CavityConfig &cfg, Channel channel) {
  const complex centre = transmission(k_bar, cfg, channel);
  if (std::abs(centre) < zero_amplitude)
    throw StencilError("phase-analysis", k_bar,
                       "transmission vanishes at k = " + std::to_string(k_bar) +
                           "; phase time undefined");
  double f[5];
  for (int j = -2; j <= 2; ++j) {
    if (j == 0) {
      f[2] = 0.0;
      continue;
    }
    const double k = k_bar + j * h;
    const complex t = transmission(k, cfg, channel);
    if (std::abs(t) < zero_amplitude)
      throw StencilError("phase-analysis", k,
                         "stencil crosses a zero of |T| at k = " + std::to_string(k) +
                             "; use a smaller step");
    f[j + 2] = std::arg(t / centre);
  }
  return {(f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h),
          (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)};
}

} // namespace detail

inline PhaseTimeResult phase_time(double k_bar, const CavityConfig &cfg, Channel channel,
                                  const PhaseTimeOptions &opts = {}) {
  require_positive_k(k_bar);
  cfg.validate();
  if (!(opts.h > 0.0) || !(k_bar - 2.0 * opts.h > 0.0))
    throw DomainError("finite-difference step must satisfy 0 < 2h < k_bar");

  PhaseTimeResult r;
  r.k_bar = k_bar;
  r.channel = channel;
  r.step = opts.h;
  if (channel == Channel::free)
    return r;

  const double L = cfg.length_k0L;
  if (!(L > 0.0))
    throw DomainError("phase time needs a cavity of positive length");

  double h = opts.h;
  detail::Stencil s = detail::phase_stencil(k_bar, h, cfg, channel);
  if (opts.refine) {
    for (;;) {
      const double half = 0.5 * h;
      if (half < opts.min_step)
        throw StencilError("phase-analysis", k_bar,
                           "phase derivative not converged at k_bar = " + std::to_string(k_bar) +
                               " down to step " + std::to_string(h));
      const detail::Stencil finer = detail::phase_stencil(k_bar, half, cfg, channel);
      const bool converged = std::abs(finer.d1 - s.d1) / L <= opts.tolerance;
      s = finer;
      h = half;
      if (converged) break;
    }
  }

  r.dphi_dk = s.d1;
  r.d2phi_dk2 = s.d2;
  r.t_ph_over_tcl = 1.0 + s.d1 / L;
  r.step = h;
  return r;
}

struct SweepPoint {
  double k_bar = 0.0;
  std::optional<PhaseTimeResult> result;
  double T_abs2 = 0.0;
  std::string flag = "ok"; ///< "ok", or the reason the point failed
};

/// Evaluates phase_time over k_bar_grid. Failures are recorded per point.
inline std::vector<SweepPoint> phase_time_sweep(const CavityConfig &cfg, Channel channel,
                                                std::span<const double> k_bar_grid,
                                                const PhaseTimeOptions &opts = {}) {
  std::vector<SweepPoint> out;
  out.reserve(k_bar_grid.size());
  for (double k : k_bar_grid) {
    SweepPoint p;
    p.k_bar = k;
    try {
      p.T_abs2 = std::norm(transmission(k, cfg, channel));
      p.result = phase_time(k, cfg, channel, opts);
    } catch (const StencilError &) {
      p.flag = "stencil";
    } catch (const DomainError &) {
      p.flag = "domain";
    }
    out.push_back(std::move(p));
  }
  return out;
}

} // namespace mazer
