#pragma once

// Random traces over the controller's signal alphabet, with sticky values so
// that multi-cycle patterns occur often enough to exercise every directive.

#include <random>

#include "marchsim/bist_sim.hpp"
#include "marchsim/trace.hpp"

namespace testutil {

inline marchsim::SignalTrace random_controller_trace(std::mt19937_64 &rng, std::size_t cycles) {
  using namespace marchsim;
  static const std::vector<SignalInfo> alphabet = [] {
    BistConfig cfg;
    cfg.c_size = 2;
    return run(cfg, {}, parse_scenario("cap 2\n@0 t_mode=0\n")).trace.signals();
  }();
  SignalTrace t(alphabet);
  std::vector<std::uint64_t> row(alphabet.size(), 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t c = 0; c < cycles; ++c) {
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      const auto &s = alphabet[i];
      if (c > 0 && u(rng) < 0.6) continue;  // hold the previous value
      const std::uint64_t mask = s.width >= 64 ? ~0ULL : (1ULL << s.width) - 1;
      if (s.is_enum()) {
        row[i] = rng() % s.enumerants.size();
      } else if (s.name == "c_min") {
        row[i] = 0;
      } else if (s.name == "c_max") {
        row[i] = mask;
      } else if (s.name == "rst") {
        row[i] = u(rng) < 0.15;
      } else if (s.name == "count" || s.name == "addr") {
        const double p = u(rng);
        row[i] = p < 0.3 ? 0 : p < 0.6 ? mask : rng() & mask;
      } else {
        row[i] = rng() & mask;
      }
    }
    t.append(row);
  }
  return t;
}

}  // namespace testutil
