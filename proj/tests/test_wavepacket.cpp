#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mazer/wavepacket.hpp"

using namespace mazer;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

// Free propagation over L has a closed form:
//   Integral exp(-(k-kb)^2/s^2 - i k^2 t/2 + i k L) dk = sqrt(pi/a) exp(b^2/(4a) + c)
// with a = 1/s^2 + i t/2, b = 2 kb/s^2 + i L, c = -kb^2/s^2.
double free_density(double k_bar, double sigma, double L, double t) {
  const std::complex<double> a(1.0 / (sigma * sigma), 0.5 * t);
  const std::complex<double> b(2.0 * k_bar / (sigma * sigma), L);
  const double c = -k_bar * k_bar / (sigma * sigma);
  const auto integral = std::sqrt(pi / a) * std::exp(b * b / (4.0 * a) + c);
  return std::pow(2 * pi, -1.5) * 2.0 / (sigma * sigma) * std::norm(integral);
}

} // namespace

TEST_CASE("spectral amplitude", "[wavepacket]") {
  const PacketSpec spec{1.0, 0.1, Channel::excited, {pi, 0}, {}};
  CHECK(spectral_amplitude(1.0, spec) == 1.0);
  CHECK(spectral_amplitude(1.1, spec) == Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(spectral_amplitude(1.6, spec) < 1e-15);
  CHECK(spectral_amplitude(1.61, spec) == 0.0);
  CHECK(spectral_amplitude(0.38, spec) == 0.0);
}

TEST_CASE("packet spec validation", "[wavepacket][errors]") {
  const auto ts = grid(0, 2, 5);
  CHECK_THROWS_AS(transmitted_density({0.0, 0.1, Channel::excited, {pi, 0}, {}}, ts), DomainError);
  CHECK_THROWS_AS(transmitted_density({1.0, -0.1, Channel::excited, {pi, 0}, {}}, ts), DomainError);
  CHECK_THROWS_AS(transmitted_density({1.0, 0.1, Channel::excited, {0.0, 0}, {}}, ts), DomainError);
  // Window truncated at k > 0 stays usable.
  const PacketSpec wide{0.05, 0.05, Channel::free, {pi, 0}, {}};
  CHECK(wide.k_lower() > 0.0);
  CHECK_NOTHROW(transmitted_density(wide, ts));
}

TEST_CASE("free channel matches the closed-form spreading Gaussian", "[wavepacket][oracle]") {
  struct Case { double k_bar, sigma, L; };
  for (const Case c : {Case{0.1, 0.01, pi / 2}, Case{10.0, 0.01, pi / 2}, Case{10.0, 0.5, 10 * pi},
                       Case{2.0, 0.2, 3.0}}) {
    const PacketSpec spec{c.k_bar, c.sigma, Channel::free, {c.L, 0}, {}};
    const auto ts = grid(-3, 3, 241);
    const auto series = transmitted_density(spec, ts);
    double top = 0.0;
    for (double v : series.raw_density) top = std::max(top, v);
    const double t_cl = c.L / c.k_bar;
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(std::abs(series.raw_density[i] - free_density(c.k_bar, c.sigma, c.L, ts[i] * t_cl)) <
            1e-8 * top);
  }
}

TEST_CASE("free channel peaks at the classical time", "[wavepacket]") {
  const auto ts = grid(0, 2, 801);
  for (double k_bar : {0.5, 2.0, 10.0}) {
    const PacketSpec spec{k_bar, 0.02 * k_bar, Channel::free, {pi, 0}, {}};
    const auto series = transmitted_density(spec, ts);
    CHECK(series.peak_normalized);
    CHECK(series.global_peak().height == Approx(1.0).margin(1e-12));
    CHECK(series.global_peak().t_over_tcl == Approx(1.0).margin(0.0025 + 1e-12));
    for (double d : series.density) CHECK(d >= 0.0);
  }
}

TEST_CASE("transmitted density: quoted peak positions", "[wavepacket][quoted]") {
  SECTION("ultra-cold atom leaves before the classical time") {
    const PacketSpec spec{0.1, 0.01, Channel::excited, {pi / 2, 0}, {}};
    const auto s = transmitted_density(spec, grid(-3, 3, 801));
    CHECK(s.global_peak().t_over_tcl == Approx(-0.98).margin(0.05));
  }
  SECTION("fast atom peaks at the classical time") {
    const PacketSpec spec{10.0, 0.01, Channel::excited, {pi / 2, 0}, {}};
    const auto s = transmitted_density(spec, grid(0, 2, 801));
    CHECK(s.global_peak().t_over_tcl == Approx(1.0).margin(0.05));
  }
  SECTION("Rabi splitting for a long cavity") {
    const PacketSpec spec{10.0, 0.5, Channel::excited, {10 * pi, 0}, {}};
    const auto ts = grid(0, 2, 801);
    const auto s = transmitted_density(spec, ts);
    CHECK(s.density[400] < 0.01);
    CHECK(s.peaks_above(0.1).size() >= 2);
  }
}

TEST_CASE("transmitted density: node doubling has converged", "[wavepacket][property]") {
  const auto ts = grid(-3, 3, 201);
  for (const PacketSpec &spec : {PacketSpec{0.1, 0.01, Channel::excited, {pi / 2, 0}, {}},
                                 PacketSpec{0.1, 0.01, Channel::ground, {pi / 2, 0}, {}},
                                 PacketSpec{10.0, 0.5, Channel::excited, {10 * pi, 0}, {}}}) {
    const auto s = transmitted_density(spec, ts);
    PacketSpec doubled = spec;
    doubled.quadrature.nodes = 2 * s.nodes_used;
    doubled.quadrature.max_nodes = 4 * s.nodes_used;
    const auto d = transmitted_density(doubled, ts);
    double top = 0.0;
    for (double v : d.raw_density) top = std::max(top, v);
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(std::abs(s.raw_density[i] - d.raw_density[i]) < 1e-6 * top);
  }
}

TEST_CASE("transmitted density: non-convergence is reported", "[wavepacket][errors]") {
  PacketSpec spec{10.0, 0.5, Channel::excited, {10 * pi, 0}, {}};
  spec.quadrature.nodes = 8;
  spec.quadrature.max_nodes = 32;
  try {
    transmitted_density(spec, grid(0, 2, 21));
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError &e) {
    CHECK(e.module() == "wavepacket");
    CHECK(e.sample() >= 0.0);
    CHECK(e.sample() <= 2.0);
  }
}

TEST_CASE("time-grid refinement keeps peaks in place", "[wavepacket][property]") {
  const PacketSpec spec{10.0, 0.5, Channel::excited, {10 * pi, 0}, {}};
  const auto coarse = transmitted_density(spec, grid(0, 2, 201));
  const auto fine = transmitted_density(spec, grid(0, 2, 801));
  const double step = 0.01;
  const auto a = coarse.peaks_above(0.1), b = fine.peaks_above(0.1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i].t_over_tcl - b[i].t_over_tcl) < step);
}

TEST_CASE("channel weights account for all flux", "[wavepacket][property]") {
  for (const auto &[k_bar, sigma, L] : {std::tuple{0.1, 0.01, pi / 2}, std::tuple{1.2, 0.1, pi},
                                        std::tuple{10.0, 0.5, 10 * pi}}) {
    const PacketSpec spec{k_bar, sigma, Channel::excited, {L, 0}, {}};
    const double e = channel_weight(spec, Channel::excited);
    const double g = channel_weight(spec, Channel::ground);
    const double r = reflected_weight(spec);
    CHECK(e + g <= 1.0 + 1e-12);
    CHECK(1.0 - (e + g) == Approx(r).margin(1e-10));
    CHECK(channel_weight(spec, Channel::free) == Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("stationary-phase envelope", "[wavepacket]") {
  SECTION("free channel") {
    const PacketSpec spec{2.0, 0.05, Channel::free, {pi, 0}, {}};
    const auto r = stationary_phase_envelope(spec, grid(0, 2, 401));
    CHECK(r.t_ph_over_tcl == 1.0);
    CHECK(r.grid_peak().t_over_tcl == Approx(1.0).margin(0.005));
    CHECK(r.warning.empty());
    // With phi = 0 the Gaussian form is exact for an untruncated spectrum.
    const auto q = transmitted_density(spec, grid(0, 2, 401));
    for (std::size_t i = 0; i < q.density.size(); ++i) CHECK(r.envelope[i] == Approx(q.density[i]).margin(1e-8));
  }
  SECTION("ultra-cold atom agrees with quadrature") {
    const PacketSpec spec{0.1, 0.01, Channel::excited, {pi / 2, 0}, {}};
    const auto ts = grid(-3, 3, 801);
    const auto r = stationary_phase_envelope(spec, ts);
    const auto q = transmitted_density(spec, ts);
    CHECK(r.t_ph_over_tcl == Approx(-0.98).margin(0.05));
    CHECK(std::abs(r.grid_peak().t_over_tcl - r.t_ph_over_tcl) < 0.0075);
    CHECK(std::abs(r.grid_peak().t_over_tcl - q.global_peak().t_over_tcl) < 0.02);
  }
  SECTION("split regime: single hump against a split packet") {
    const PacketSpec spec{10.0, 0.5, Channel::excited, {10 * pi, 0}, {}};
    const auto ts = grid(0, 2, 801);
    const auto r = stationary_phase_envelope(spec, ts);
    const auto q = transmitted_density(spec, ts);
    CHECK(find_peaks(r.times, r.envelope).size() <= 1);
    CHECK(q.peaks_above(0.1).size() >= 2);
  }
  SECTION("broad spectrum warning") {
    const PacketSpec spec{1.5, 0.4, Channel::excited, {pi / 2, 0}, {}};
    CHECK_FALSE(stationary_phase_envelope(spec, grid(0, 2, 11)).warning.empty());
  }
}

TEST_CASE("split and delay report", "[wavepacket][quoted]") {
  SECTION("ultra-cold atom: ground channel dominates and lags") {
    const auto r = split_and_delay_report({pi / 2, 0}, 0.1, 0.01, grid(-3, 3, 801));
    CHECK(r.first.channel == Channel::excited);
    CHECK(r.first.peak.t_over_tcl == Approx(-0.98).margin(0.05));
    CHECK(r.second.peak.t_over_tcl == Approx(0.45).margin(0.05));
    CHECK(r.delay_over_tcl == Approx(r.second.peak.t_over_tcl - r.first.peak.t_over_tcl));
    CHECK(r.second.weight > r.first.weight);
    CHECK_FALSE(r.first.split);
    CHECK_FALSE(r.second.split);
  }
  SECTION("free reference") {
    const auto r = split_and_delay_report({pi / 2, 0}, 1.0, 0.05, grid(0, 2, 201), {}, Channel::free,
                                          Channel::free);
    CHECK(r.delay_over_tcl == 0.0);
    CHECK_FALSE(r.first.split);
    CHECK_FALSE(r.second.split);
  }
  SECTION("Rabi splitting") {
    const auto r = split_and_delay_report({10 * pi, 0}, 10.0, 0.5, grid(0, 2, 801));
    CHECK(r.first.split);
  }
}
