#pragma once

/// @file cavity.hpp
/// @brief Problem definition for an atom crossing a mesa-mode cavity.
///
/// Units: hbar = m = k0 = 1. Wavenumbers are in units of k0, lengths are the
/// product k0*L, and the vacuum coupling is g = 1/2 so that the dressed
/// potential height is sqrt(n+1)/2.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mazer {

using complex = std::complex<double>;

inline constexpr double vacuum_coupling = 0.5;

/// Raised for inputs outside the physical domain (k <= 0, sigma <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when an adaptive numerical procedure cannot meet its tolerance.
/// Carries the module that failed and the offending sample.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(std::string module, double sample, const std::string &what)
      : std::runtime_error(what), module_(std::move(module)), sample_(sample) {}

  const std::string &module() const noexcept { return module_; }
  double sample() const noexcept { return sample_; }

private:
  std::string module_;
  double sample_;
};

struct CavityConfig {
  double length_k0L = std::numbers::pi / 2.0;
  int photons_n = 0;

  /// sqrt(n+1): the barrier/well strength in units of k0^2.
  double coupling_scale() const { return std::sqrt(static_cast<double>(photons_n) + 1.0); }

  /// Zero length is accepted as the analytic no-cavity limit.
  void validate() const {
    if (!(length_k0L >= 0.0) || !std::isfinite(length_k0L))
      throw DomainError("cavity length k0L must be finite and non-negative");
    if (photons_n < 0)
      throw DomainError("photon number n must be non-negative");
  }
};

/// Exit channel of the transmitted atom. `free` is the no-cavity reference
/// (T = 1 with the cavity phase removed).
enum class Channel { excited, ground, free };

inline std::string_view to_string(Channel c) {
  switch (c) {
  case Channel::excited: return "excited";
  case Channel::ground: return "ground";
  case Channel::free: return "free";
  }
  return "unknown";
}

inline Channel parse_channel(std::string_view s) {
  if (s == "excited" || s == "e") return Channel::excited;
  if (s == "ground" || s == "g") return Channel::ground;
  if (s == "free" || s == "f") return Channel::free;
  throw DomainError("unknown channel '" + std::string(s) + "' (expected excited|ground|free)");
}

inline void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw DomainError("incident wavenumber must be positive and finite, got " + std::to_string(k));
}

} // namespace mazer
