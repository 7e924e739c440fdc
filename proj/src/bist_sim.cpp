#include "marchsim/bist_sim.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "marchsim/error.hpp"

namespace marchsim {

namespace {

enum Sig : std::size_t {
  kTMode,
  kRst,
  kMatch,
  kEn,
  kRw,
  kGPatt,
  kDone,
  kPass,
  kFail,
  kState,
  kCount,
  kAddr,
  kDataWritten,
  kMemOut,
  kSignature,
  kCMin,
  kCMax,
  kSignalCount,
};

std::vector<SignalInfo> trace_layout(const BistConfig &config) {
  std::vector<std::string> labels;
  for (auto s : all_states()) labels.emplace_back(to_string(s));
  const auto &names = trace_signal_names();
  std::vector<SignalInfo> layout;
  for (std::size_t i = 0; i < kSignalCount; ++i) {
    SignalInfo info{names[i], 1, {}};
    switch (i) {
      case kState:
        info.width = 4;
        info.enumerants = labels;
        break;
      case kCount:
      case kAddr:
      case kCMin:
      case kCMax: info.width = config.c_size; break;
      case kDataWritten:
      case kMemOut:
      case kSignature: info.width = config.word_width; break;
      default: break;
    }
    layout.push_back(std::move(info));
  }
  return layout;
}

std::string_view signal_name(InputSignal s) { return s == InputSignal::t_mode ? "t_mode" : "rst"; }

}  // namespace

const std::vector<std::string> &trace_signal_names() {
  static const std::vector<std::string> names{"t_mode", "rst",   "match", "en",           "rw",     "g_patt",
                                              "done",   "pass",  "fail",  "state",        "count",  "addr",
                                              "data_written",    "mem_out", "signature", "c_min", "c_max"};
  return names;
}

void BistConfig::validate() const {
  ControllerParams{c_size}.validate();
  memory().validate();
}

void Scenario::validate() const {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].cycle < events[i - 1].cycle)
      throw Error(ErrorKind::InvalidArgument, "scenario event cycles must be nondecreasing");
    for (std::size_t j = i; j-- > 0 && events[j].cycle == events[i].cycle;) {
      if (events[j].signal == events[i].signal)
        throw Error(ErrorKind::InvalidArgument, "scenario assigns " + std::string(signal_name(events[i].signal)) +
                                                    " twice at cycle " + std::to_string(events[i].cycle));
    }
  }
  if (cap && *cap == 0) throw Error(ErrorKind::InvalidArgument, "scenario has zero length");
  if (events.empty() && !cap) throw Error(ErrorKind::InvalidArgument, "scenario has zero length (no events, no cap)");
}

std::uint64_t Scenario::last_event_cycle() const { return events.empty() ? 0 : events.back().cycle; }

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &message) -> void {
    throw Error(ErrorKind::Parse, "scenario line " + std::to_string(line_no) + ": " + message);
  };
  auto number = [&](std::string_view t) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) fail("bad number '" + std::string(t) + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "fault") {
      if (!s.events.empty()) fail("fault lines must precede the first '@' line");
      std::string rest;
      std::getline(ls, rest);
      try {
        s.faults.push_back(parse_fault(rest));
      } catch (const Error &e) {
        fail(e.what());
      }
    } else if (head == "cap") {
      std::string n;
      ls >> n;
      s.cap = number(n);
    } else if (head[0] == '@') {
      const std::uint64_t cycle = number(std::string_view(head).substr(1));
      bool any = false;
      for (std::string assign; ls >> assign;) {
        const auto eq = assign.find('=');
        if (eq == std::string::npos) fail("expected <signal>=<0|1>, got '" + assign + "'");
        const std::string name = assign.substr(0, eq);
        const std::string value = assign.substr(eq + 1);
        ScenarioEvent e{cycle, InputSignal::t_mode, false};
        if (name == "t_mode") {
          e.signal = InputSignal::t_mode;
        } else if (name == "rst") {
          e.signal = InputSignal::rst;
        } else {
          fail("unknown input signal '" + name + "'");
        }
        if (value != "0" && value != "1") fail("signal value must be 0 or 1");
        e.value = value == "1";
        s.events.push_back(e);
        any = true;
      }
      if (!any) fail("'@' line without assignments");
    } else {
      fail("unrecognized directive '" + head + "'");
    }
  }
  s.validate();
  return s;
}

std::string format_scenario(const Scenario &scenario) {
  std::ostringstream out;
  for (const auto &f : scenario.faults) out << "fault " << format_fault(f) << "\n";
  if (scenario.cap) out << "cap " << *scenario.cap << "\n";
  for (std::size_t i = 0; i < scenario.events.size();) {
    const std::uint64_t cycle = scenario.events[i].cycle;
    out << "@" << cycle;
    for (; i < scenario.events.size() && scenario.events[i].cycle == cycle; ++i)
      out << " " << signal_name(scenario.events[i].signal) << "=" << (scenario.events[i].value ? 1 : 0);
    out << "\n";
  }
  return out.str();
}

Scenario clean_scenario(std::uint64_t raise_at) {
  Scenario s;
  s.events.push_back({raise_at, InputSignal::t_mode, true});
  return s;
}

RunResult run(const BistConfig &config, const std::vector<FaultSpec> &faults, const Scenario &scenario) {
  config.validate();
  scenario.validate();

  const Controller controller(ControllerParams{config.c_size});
  const auto &params = controller.params();
  FaultMemory memory(config.memory());
  memory.fill(config.power_up, 0);
  for (const auto &f : scenario.faults) memory.inject(f);
  for (const auto &f : faults) memory.inject(f);

  const std::uint64_t span = params.span();
  const std::uint64_t cap =
      scenario.cap.value_or(scenario.last_event_cycle() + 12 * span + config.post_done_edges + 16);
  const Word ones = config.memory().mask();

  RunResult result;
  result.trace = SignalTrace(trace_layout(config));
  result.trace.meta()["c_size"] = std::to_string(config.c_size);
  result.trace.meta()["word_width"] = std::to_string(config.word_width);

  ControllerRegs regs = controller.reset();
  bool t_mode = false;
  bool rst = false;
  bool match = true;
  Word mem_out = 0;
  std::size_t next_event = 0;
  std::optional<std::uint64_t> done_entry;
  // Mismatch observed in the previous sample, judged at this edge.
  std::optional<std::pair<ControllerState, std::uint64_t>> pending_mismatch;
  std::array<std::uint64_t, kSignalCount> row{};

  for (std::uint64_t k = 0; k < cap; ++k) {
    while (next_event < scenario.events.size() && scenario.events[next_event].cycle == k) {
      const auto &e = scenario.events[next_event++];
      (e.signal == InputSignal::t_mode ? t_mode : rst) = e.value;
    }

    const ControllerState before = regs.state;
    regs = controller.step(regs, ControllerInputs{t_mode, rst, match});
    if (config.fast_forward_pause && regs.state == ControllerState::pause && before != ControllerState::pause)
      regs.count = params.c_max();

    const std::uint64_t addr = regs.count;
    const Word pattern = regs.g_patt ? ones : 0;
    match = true;
    if (regs.en && !regs.rw && is_write_state(regs.state)) {
      memory.write(addr, pattern, k);
      ++result.accesses[static_cast<std::size_t>(regs.state)];
    } else if (regs.en && regs.rw && is_read_state(regs.state)) {
      mem_out = memory.read(addr, k);
      match = mem_out == pattern;
      ++result.accesses[static_cast<std::size_t>(regs.state)];
    }

    auto &v = result.verdict;
    if (regs.state == ControllerState::s_done && before != ControllerState::s_done) {
      v.completed = true;
      done_entry = k;
    }
    if (regs.fail && !v.any_fail) {
      v.any_fail = true;
      v.first_fail_cycle = k;
      if (pending_mismatch) {
        v.first_fail_state = pending_mismatch->first;
        v.first_fail_addr = pending_mismatch->second;
      }
    }
    pending_mismatch.reset();
    if (!match) pending_mismatch.emplace(regs.state, addr);

    row[kTMode] = t_mode;
    row[kRst] = rst;
    row[kMatch] = match;
    row[kEn] = regs.en;
    row[kRw] = regs.rw;
    row[kGPatt] = regs.g_patt;
    row[kDone] = regs.done;
    row[kPass] = regs.pass;
    row[kFail] = regs.fail;
    row[kState] = static_cast<std::uint64_t>(regs.state);
    row[kCount] = regs.count;
    row[kAddr] = addr;
    row[kDataWritten] = pattern;
    row[kMemOut] = mem_out;
    row[kSignature] = pattern;
    row[kCMin] = params.c_min();
    row[kCMax] = params.c_max();
    result.trace.append(row);

    if (done_entry && k >= *done_entry + config.post_done_edges && next_event >= scenario.events.size()) break;
  }
  return result;
}

std::array<bool, 5> read_pass_flags(const SignalTrace &trace) {
  const auto state_idx = trace.find("state");
  if (!state_idx) throw Error(ErrorKind::UnknownName, "trace lacks the 'state' signal");
  const std::size_t match_idx = trace.index_of("match");
  const auto &info = trace.signals()[*state_idx];

  // Map trace values onto controller states by label when available.
  auto state_of = [&](std::uint64_t v) -> std::optional<ControllerState> {
    if (info.is_enum()) {
      if (v >= info.enumerants.size()) return std::nullopt;
      return parse_state(info.enumerants[v]);
    }
    if (v >= kStateCount) return std::nullopt;
    return static_cast<ControllerState>(v);
  };

  std::array<bool, 5> flags{};
  for (std::size_t t = 0; t < trace.length(); ++t) {
    if (trace.value(match_idx, t) != 0) continue;
    const auto s = state_of(trace.value(*state_idx, t));
    if (!s) continue;
    for (std::size_t i = 0; i < kReadStates.size(); ++i) {
      if (kReadStates[i] == *s) flags[i] = true;
    }
  }
  return flags;
}

std::string format_verdict(const TestVerdict &v) {
  std::ostringstream out;
  out << "completed=" << (v.completed ? 1 : 0) << " any_fail=" << (v.any_fail ? 1 : 0);
  if (v.first_fail_cycle) out << " first_fail_cycle=" << *v.first_fail_cycle;
  if (v.first_fail_state) out << " first_fail_state=" << to_string(*v.first_fail_state);
  if (v.first_fail_addr) out << " first_fail_addr=" << *v.first_fail_addr;
  return out.str();
}

}  // namespace marchsim
