// Prints the excited- and ground-state phase times for a short cavity next
// to the transmission probabilities, then the transmitted packet peak for a
// cold atom.

#include <cstdio>
#include <numbers>
#include <vector>

#include "mazer/mazer.hpp"

int main() {
  using namespace mazer;
  const CavityConfig cavity{std::numbers::pi / 2, 0};

  std::printf("%8s %14s %12s %14s %12s\n", "k_bar", "t_ph/t_cl(e)", "|T_e|^2", "t_ph/t_cl(g)", "|T_g|^2");
  for (double k : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto e = phase_time(k, cavity, Channel::excited);
    const auto g = phase_time(k, cavity, Channel::ground);
    const auto amp = channel_amplitudes(k, cavity);
    std::printf("%8.3f %14.6f %12.6f %14.6f %12.6f\n", k, e.t_ph_over_tcl, std::norm(amp.T_e),
                g.t_ph_over_tcl, std::norm(amp.T_g));
  }

  std::vector<double> times(801);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = -3.0 + 6.0 * i / 800.0;
  const PacketSpec spec{0.1, 0.01, Channel::excited, cavity, {}};
  const auto series = transmitted_density(spec, times);
  std::printf("\ncold packet (k_bar = 0.1, sigma = 0.01): peak at t/t_cl = %.4f (%zu nodes)\n",
              series.global_peak().t_over_tcl, series.nodes_used);
  return 0;
}
