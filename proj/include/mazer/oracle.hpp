#pragma once

/// @file oracle.hpp
/// @brief Reference scattering solver for a single square barrier or well.
///
/// Solves the 4x4 matching system (value and derivative continuity at z = 0
/// and z = L) for the unknowns (rho, interior coefficients, tau). It never
/// touches the closed-form expressions in scattering.hpp and exists to check
/// them.

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "mazer/cavity.hpp"

namespace mazer {

struct OracleResult {
  complex tau;
  complex rho;
};

/// potential_sign = +1 for the barrier, -1 for the well. The potential height
/// is sqrt(n+1)*g = sqrt(n+1)/2 in hbar = m = k0 = 1 units.
inline OracleResult oracle_scattering(double k, int potential_sign, const CavityConfig &cfg) {
  require_positive_k(k);
  cfg.validate();
  if (potential_sign != 1 && potential_sign != -1)
    throw DomainError("potential_sign must be +1 or -1");

  const complex I(0.0, 1.0);
  const double L = cfg.length_k0L;
  const double height = potential_sign * vacuum_coupling * cfg.coupling_scale();
  const double q2 = k * k - 2.0 * height;
  const complex q = q2 >= 0.0 ? complex(std::sqrt(q2), 0.0) : complex(0.0, std::sqrt(-q2));
  const complex exit_phase = std::exp(I * k * L);

  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  Eigen::Vector4cd rhs;
  // Unknown order: rho, a, b, tau.
  if (std::abs(q) * L <= 1.0) {
    // psi_in = a cos(qz) + b sin(qz)/q; regular through q = 0.
    const complex qL = q * L;
    const complex c = std::cos(qL);
    const complex s = std::abs(qL) < 1e-3
                          ? L * (1.0 - qL * qL / 6.0 + qL * qL * qL * qL / 120.0)
                          : std::sin(qL) / q;
    m(0, 0) = 1.0;  m(0, 1) = -1.0;
    m(1, 0) = -I * k; m(1, 2) = -1.0;
    m(2, 1) = c;    m(2, 2) = s;      m(2, 3) = -exit_phase;
    m(3, 1) = -q2 * s; m(3, 2) = c;   m(3, 3) = -I * k * exit_phase;
  } else {
    // psi_in = a e^{iqz} + b e^{-iq(z-L)}; both factors stay <= 1 in modulus
    // when q is imaginary.
    const complex e = std::exp(I * q * L);
    m(0, 0) = 1.0;    m(0, 1) = -1.0;   m(0, 2) = -e;
    m(1, 0) = -I * k; m(1, 1) = -I * q; m(1, 2) = I * q * e;
    m(2, 1) = e;      m(2, 2) = 1.0;    m(2, 3) = -exit_phase;
    m(3, 1) = I * q * e; m(3, 2) = -I * q; m(3, 3) = -I * k * exit_phase;
  }
  rhs << -1.0, -I * k, 0.0, 0.0;

  const auto lu = m.fullPivLu();
  if (!lu.isInvertible())
    throw std::logic_error("boundary-matching system is singular");
  const Eigen::Vector4cd x = lu.solve(rhs);
  return {x(3), x(0)};
}

} // namespace mazer
