#include "marchsim/controller.hpp"

#include <algorithm>

#include "marchsim/error.hpp"

namespace marchsim {

namespace {

constexpr std::array<std::string_view, kStateCount> kStateNames{
    "s_idle", "wdn0", "rup0", "wup1", "rdn1", "wdna0", "pause", "rdn0", "wdn1", "rup1", "wup0", "rdna0", "s_done"};

}  // namespace

std::string_view to_string(ControllerState s) { return kStateNames[static_cast<std::size_t>(s)]; }

std::optional<ControllerState> parse_state(std::string_view name) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == name) return static_cast<ControllerState>(i);
  }
  return std::nullopt;
}

const std::array<ControllerState, kStateCount> &all_states() {
  static const auto states = [] {
    std::array<ControllerState, kStateCount> s{};
    for (std::size_t i = 0; i < kStateCount; ++i) s[i] = static_cast<ControllerState>(i);
    return s;
  }();
  return states;
}

bool is_read_state(ControllerState s) {
  return std::find(kReadStates.begin(), kReadStates.end(), s) != kReadStates.end();
}

bool is_write_state(ControllerState s) {
  using S = ControllerState;
  return s == S::wdn0 || s == S::wup1 || s == S::wdna0 || s == S::wdn1 || s == S::wup0;
}

void ControllerParams::validate() const {
  if (c_size < 1 || c_size > 20)
    throw Error(ErrorKind::InvalidArgument, "c_size must be in 1..20, got " + std::to_string(c_size));
}

Controller::Controller(ControllerParams params) : params_(params) { params_.validate(); }

ControllerRegs Controller::reset() const {
  return ControllerRegs{ControllerState::s_idle, false, true, true, false, true, false, 0};
}

ControllerRegs Controller::step(const ControllerRegs &regs, const ControllerInputs &in) const {
  using S = ControllerState;
  if (in.rst) return reset();

  const std::uint32_t c_min = params_.c_min();
  const std::uint32_t c_max = params_.c_max();
  const std::uint32_t mask = c_max;
  ControllerRegs next = regs;
  const std::uint32_t inc = (regs.count + 1) & mask;
  const std::uint32_t dec = (regs.count - 1) & mask;

  auto judge = [&] {
    next.pass = in.match;
    next.fail = !in.match;
  };

  switch (regs.state) {
    case S::s_idle:
      if (in.t_mode) {
        next.en = true;
        next.state = S::wdn0;
        next.count = c_max;
        next.rw = false;
        next.g_patt = false;
      }
      break;
    case S::wdn0:
      next.count = dec;
      if (regs.count == c_min) {
        next.state = S::rup0;
        next.rw = true;
        next.count = c_min;
      }
      break;
    case S::rup0:
      next.count = inc;
      judge();
      if (regs.count == c_max) {
        next.state = S::wup1;
        next.g_patt = true;
        next.rw = false;
        next.count = c_min;
      }
      break;
    case S::wup1:
      next.count = inc;
      if (regs.count == c_max) {
        next.state = S::rdn1;
        next.rw = true;
        next.count = c_max;
      }
      break;
    case S::rdn1:
      next.count = dec;
      judge();
      if (regs.count == c_min) {
        next.state = S::wdna0;
        next.g_patt = false;
        next.rw = false;
        next.count = c_max;
      }
      break;
    case S::wdna0:
      next.count = dec;
      if (regs.count == c_min) {
        next.state = S::pause;
        next.count = c_min;
      }
      break;
    case S::pause:
      next.count = inc;
      if (regs.count == c_max) {
        next.state = S::rdn0;
        next.rw = true;
        next.count = c_max;
      }
      break;
    case S::rdn0:
      next.count = dec;
      judge();
      if (regs.count == c_min) {
        next.state = S::wdn1;
        next.rw = false;
        next.g_patt = true;
        next.count = c_max;
      }
      break;
    case S::wdn1:
      next.count = dec;
      if (regs.count == c_min) {
        next.state = S::rup1;
        next.rw = true;
        next.count = c_min;
      }
      break;
    case S::rup1:
      next.count = inc;
      judge();
      if (regs.count == c_max) {
        next.state = S::wup0;
        next.g_patt = false;
        next.rw = false;
        next.count = c_min;
      }
      break;
    case S::wup0:
      next.count = inc;
      if (regs.count == c_max) {
        next.state = S::rdna0;
        next.rw = true;
        next.count = c_max;
      }
      break;
    case S::rdna0:
      next.count = dec;
      judge();
      if (regs.count == c_min) {
        next.state = S::s_done;
        next.done = true;
        next.en = false;
      }
      break;
    case S::s_done:
      if (!in.t_mode) {
        next.state = S::s_idle;
        next.done = false;
      }
      break;
  }
  return next;
}

const std::vector<StateArc> &transition_universe() {
  static const std::vector<StateArc> arcs = [] {
    std::vector<StateArc> v;
    const auto &states = all_states();
    for (std::size_t i = 0; i + 1 < states.size(); ++i) v.emplace_back(states[i], states[i + 1]);
    for (std::size_t i = 1; i < states.size(); ++i) v.emplace_back(states[i], ControllerState::s_idle);
    return v;
  }();
  return arcs;
}

}  // namespace marchsim
