#pragma once

// Registered-output model of the 13-state March C MBIST controller.
//
// `step` is one positive clock edge. Counter arithmetic wraps modulo
// 2^c_size, as the hardware register does.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace marchsim {

enum class ControllerState : std::uint8_t {
  s_idle,
  wdn0,
  rup0,
  wup1,
  rdn1,
  wdna0,
  pause,
  rdn0,
  wdn1,
  rup1,
  wup0,
  rdna0,
  s_done,
};

inline constexpr std::size_t kStateCount = 13;

std::string_view to_string(ControllerState s);
std::optional<ControllerState> parse_state(std::string_view name);
const std::array<ControllerState, kStateCount> &all_states();

// The five read passes, in test order (F1..F5).
inline constexpr std::array<ControllerState, 5> kReadStates{
    ControllerState::rup0, ControllerState::rdn1, ControllerState::rdn0, ControllerState::rup1,
    ControllerState::rdna0};

bool is_read_state(ControllerState s);
bool is_write_state(ControllerState s);

struct ControllerInputs {
  bool t_mode = false;
  bool rst = false;
  bool match = true;
};

struct ControllerParams {
  unsigned c_size = 8;

  std::uint32_t c_min() const { return 0; }
  std::uint32_t c_max() const { return (std::uint32_t{1} << c_size) - 1; }
  std::uint32_t span() const { return c_max() - c_min() + 1; }
  void validate() const;
};

struct ControllerRegs {
  ControllerState state = ControllerState::s_idle;
  bool en = false;
  bool rw = true;
  bool g_patt = true;
  bool done = false;
  bool pass = true;
  bool fail = false;
  std::uint32_t count = 0;

  friend bool operator==(const ControllerRegs &, const ControllerRegs &) = default;
};

class Controller {
 public:
  explicit Controller(ControllerParams params = {});

  const ControllerParams &params() const { return params_; }

  ControllerRegs reset() const;
  ControllerRegs step(const ControllerRegs &regs, const ControllerInputs &in) const;

 private:
  ControllerParams params_;
};

using StateArc = std::pair<ControllerState, ControllerState>;

// The 24 arcs: 12 forward plus one to-idle arc from each non-idle state.
const std::vector<StateArc> &transition_universe();

}  // namespace marchsim
