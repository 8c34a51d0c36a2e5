#pragma once

/// @file scattering.hpp
/// @brief Closed-form transmission and reflection through the dressed-state
/// barrier (+) and well (-) of a mesa-mode cavity, and their coherent
/// combination into the |e,n> and |g,n+1> exit channels.

#include <cmath>
#include <complex>

#include "mazer/cavity.hpp"

namespace mazer {

struct DressedWavenumbers {
  complex k_plus;  ///< barrier branch; real >= 0 or on the positive imaginary axis
  complex k_minus; ///< well branch; always real and >= k
};

struct BranchAmplitudes {
  complex tau_plus;
  complex tau_minus;
  complex rho_plus;
  complex rho_minus;
};

struct ChannelAmplitudes {
  complex T_e;
  complex R_e;
  complex T_g;
  complex R_g;

  double total_probability() const {
    return std::norm(T_e) + std::norm(R_e) + std::norm(T_g) + std::norm(R_g);
  }
};

namespace detail {

/// Principal square root of a real number: non-negative real or i*sqrt(|x|).
inline complex principal_sqrt(double x) {
  return x >= 0.0 ? complex(std::sqrt(x), 0.0) : complex(0.0, std::sqrt(-x));
}

/// sin(z)/z, entire; the series branch keeps the barrier threshold finite.
inline complex sinc(complex z) {
  if (std::abs(z) < 1e-4) {
    const complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

struct SquareStepResult {
  complex tau;
  complex rho;
};

// q is the interior wavenumber with q^2 = k^2 - 2V. The (k/q) and (q/k)
// factors multiplying sin(qL) are folded into sinc so nothing divides by q.
inline SquareStepResult square_potential(double k, complex q, double length) {
  const complex x = q * length;
  const complex cos_x = std::cos(x);
  const complex sin_over = length * sinc(x); // sin(qL)/q
  const complex q_sin = q * q * sin_over;    // q sin(qL)
  const complex k_sin = k * sin_over;        // (k/q) sin(qL)

  // Sigma*sin(qL) and Delta*sin(qL).
  const complex sigma_sin = 0.5 * (q_sin / k + k_sin);
  const complex delta_sin = 0.5 * (q_sin / k - k_sin);

  const complex phase_kl = std::polar(1.0, k * length);
  const complex tau = 1.0 / (phase_kl * (cos_x - complex(0.0, 1.0) * sigma_sin));
  const complex rho = complex(0.0, 1.0) * delta_sin * phase_kl * tau;
  return {tau, rho};
}

} // namespace detail

/// k_n^{+-} = sqrt(k^2 -+ sqrt(n+1)) in k0 units.
inline DressedWavenumbers dressed_wavenumbers(double k, const CavityConfig &cfg) {
  require_positive_k(k);
  cfg.validate();
  const double s = cfg.coupling_scale();
  return {detail::principal_sqrt(k * k - s), detail::principal_sqrt(k * k + s)};
}

inline BranchAmplitudes branch_amplitudes(double k, const CavityConfig &cfg) {
  const DressedWavenumbers q = dressed_wavenumbers(k, cfg);
  const auto barrier = detail::square_potential(k, q.k_plus, cfg.length_k0L);
  const auto well = detail::square_potential(k, q.k_minus, cfg.length_k0L);
  return {barrier.tau, well.tau, barrier.rho, well.rho};
}

inline ChannelAmplitudes channel_amplitudes(double k, const CavityConfig &cfg) {
  const BranchAmplitudes b = branch_amplitudes(k, cfg);
  return {
      0.5 * (b.tau_plus + b.tau_minus),
      0.5 * (b.rho_plus + b.rho_minus),
      0.5 * (b.tau_plus - b.tau_minus),
      0.5 * (b.rho_plus - b.rho_minus),
  };
}

/// Transmission amplitude of one exit channel; the free channel is T = 1.
inline complex transmission(double k, const CavityConfig &cfg, Channel channel) {
  if (channel == Channel::free) {
    require_positive_k(k);
    return {1.0, 0.0};
  }
  const ChannelAmplitudes a = channel_amplitudes(k, cfg);
  return channel == Channel::excited ? a.T_e : a.T_g;
}

} // namespace mazer
