#pragma once

// MBIST harness: controller + address/pattern/read-write generators +
// comparator wired to a fault-injectable memory, recorded edge by edge.
//
// Sample k holds the inputs applied at edge k and every register and
// combinational value as settled after that edge. The comparator output
// `match` in sample k is what the controller samples at edge k+1.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marchsim/controller.hpp"
#include "marchsim/fault_memory.hpp"
#include "marchsim/trace.hpp"

namespace marchsim {

struct BistConfig {
  unsigned c_size = 8;
  unsigned word_width = 32;
  // Edges recorded after s_done entry once the scenario has no pending events.
  unsigned post_done_edges = 8;
  // Memory content before the first write (power-up background).
  Word power_up = 0;
  // Jump the counter to c_max on pause entry, collapsing the pause to one edge.
  bool fast_forward_pause = false;

  std::uint64_t words() const { return std::uint64_t{1} << c_size; }
  MemoryConfig memory() const { return {words(), word_width}; }
  void validate() const;
};

enum class InputSignal : std::uint8_t { t_mode, rst };

struct ScenarioEvent {
  std::uint64_t cycle = 0;
  InputSignal signal = InputSignal::t_mode;
  bool value = false;

  friend bool operator==(const ScenarioEvent &, const ScenarioEvent &) = default;
};

struct Scenario {
  std::vector<ScenarioEvent> events;
  std::vector<FaultSpec> faults;
  std::optional<std::uint64_t> cap;

  void validate() const;
  std::uint64_t last_event_cycle() const;
};

// Line format:
//   # comment
//   fault <class> <params...>      (before the first '@' line)
//   cap <edges>
//   @<cycle> <signal>=<0|1> [<signal>=<0|1>]
Scenario parse_scenario(std::string_view text);
std::string format_scenario(const Scenario &scenario);

// t_mode raised at `raise_at` and held; the default directed run.
Scenario clean_scenario(std::uint64_t raise_at = 2);

struct TestVerdict {
  bool completed = false;
  bool any_fail = false;
  std::optional<std::uint64_t> first_fail_cycle;
  std::optional<ControllerState> first_fail_state;
  std::optional<std::uint64_t> first_fail_addr;

  friend bool operator==(const TestVerdict &, const TestVerdict &) = default;
};

struct RunResult {
  SignalTrace trace;
  TestVerdict verdict;
  // Memory reads + writes issued while in each state.
  std::array<std::uint64_t, kStateCount> accesses{};
};

// Signal names in trace order.
const std::vector<std::string> &trace_signal_names();

// `faults` are injected in addition to the scenario's own.
RunResult run(const BistConfig &config, const std::vector<FaultSpec> &faults, const Scenario &scenario);

// Mismatch seen in (rup0, rdn1, rdn0, rup1, rdna0).
std::array<bool, 5> read_pass_flags(const SignalTrace &trace);

std::string format_verdict(const TestVerdict &verdict);

}  // namespace marchsim
