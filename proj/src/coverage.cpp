#include "marchsim/coverage.hpp"

#include <algorithm>
#include <iomanip>
#include "json.hpp"
#include <sstream>

#include "marchsim/error.hpp"
#include "marchsim/parallel.hpp"

namespace marchsim {

namespace {

double ratio(std::size_t covered, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total);
}

std::string fixed2(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

std::optional<std::size_t> arc_index(ControllerState from, ControllerState to) {
  const auto &u = transition_universe();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i].first == from && u[i].second == to) return i;
  return std::nullopt;
}

}  // namespace

std::size_t FsmCoverage::states_covered() const {
  return static_cast<std::size_t>(std::count(states.begin(), states.end(), true));
}

std::size_t FsmCoverage::transitions_covered() const {
  return static_cast<std::size_t>(std::count(transitions.begin(), transitions.end(), true));
}

double FsmCoverage::percent() const {
  return (ratio(states_covered(), states.size()) + ratio(transitions_covered(), transitions.size())) / 2.0;
}

void FsmCoverage::merge(const FsmCoverage &o) {
  for (std::size_t i = 0; i < states.size(); ++i) states[i] = states[i] || o.states[i];
  for (std::size_t i = 0; i < transitions.size(); ++i) transitions[i] = transitions[i] || o.transitions[i];
}

FsmCoverage fsm_coverage(std::span<const SignalTrace> traces) {
  FsmCoverage cov;
  for (const auto &trace : traces) {
    const std::size_t idx = trace.index_of("state");
    const auto &info = trace.signals()[idx];
    auto state_at = [&](std::size_t t) {
      const std::uint64_t v = trace.value(idx, t);
      std::optional<ControllerState> s;
      if (info.is_enum()) {
        if (v < info.enumerants.size()) s = parse_state(info.enumerants[v]);
      } else if (v < kStateCount) {
        s = static_cast<ControllerState>(v);
      }
      if (!s)
        throw Error(ErrorKind::Conformance, "unknown state value " + std::to_string(v) + " at cycle " + std::to_string(t));
      return *s;
    };
    std::optional<ControllerState> prev;
    for (std::size_t t = 0; t < trace.length(); ++t) {
      const ControllerState s = state_at(t);
      cov.states[static_cast<std::size_t>(s)] = true;
      if (prev && *prev != s) {
        const auto arc = arc_index(*prev, s);
        if (!arc)
          throw Error(ErrorKind::Conformance, "transition " + std::string(to_string(*prev)) + " -> " +
                                                  std::string(to_string(s)) + " at cycle " + std::to_string(t) +
                                                  " is not a controller arc");
        cov.transitions[*arc] = true;
      }
      prev = s;
    }
  }
  return cov;
}

std::size_t SignalToggle::bits_covered() const {
  std::size_t n = 0;
  for (std::size_t b = 0; b < width; ++b) n += rose[b] && fell[b];
  return n;
}

std::size_t ToggleCoverage::bits_total() const {
  std::size_t n = 0;
  for (const auto &s : signals) n += s.width;
  return n;
}

std::size_t ToggleCoverage::bits_covered() const {
  std::size_t n = 0;
  for (const auto &s : signals) n += s.bits_covered();
  return n;
}

double ToggleCoverage::percent() const { return ratio(bits_covered(), bits_total()); }

void ToggleCoverage::merge(const ToggleCoverage &o) {
  for (const auto &sig : o.signals) {
    auto it = std::find_if(signals.begin(), signals.end(), [&](const SignalToggle &s) { return s.name == sig.name; });
    if (it == signals.end()) {
      signals.push_back(sig);
      continue;
    }
    if (it->width != sig.width)
      throw Error(ErrorKind::InvalidArgument, "signal '" + sig.name + "' has different widths across traces");
    for (std::size_t b = 0; b < sig.width; ++b) {
      it->rose[b] = it->rose[b] || sig.rose[b];
      it->fell[b] = it->fell[b] || sig.fell[b];
    }
    it->constant = it->constant && sig.constant;
  }
}

namespace {

ToggleCoverage toggle_one(const SignalTrace &trace) {
  ToggleCoverage cov;
  for (std::size_t i = 0; i < trace.signal_count(); ++i) {
    const auto &info = trace.signals()[i];
    SignalToggle sig{info.name, info.width, std::vector<bool>(info.width), std::vector<bool>(info.width), true};
    const auto col = trace.column(i);
    for (std::size_t t = 1; t < col.size(); ++t) {
      const std::uint64_t changed = col[t] ^ col[t - 1];
      if (!changed) continue;
      sig.constant = false;
      for (unsigned b = 0; b < info.width; ++b) {
        if (!((changed >> b) & 1)) continue;
        if ((col[t] >> b) & 1) {
          sig.rose[b] = true;
        } else {
          sig.fell[b] = true;
        }
      }
    }
    cov.signals.push_back(std::move(sig));
  }
  return cov;
}

}  // namespace

ToggleCoverage toggle_coverage(std::span<const SignalTrace> traces) {
  if (traces.empty()) throw Error(ErrorKind::InvalidArgument, "toggle coverage needs at least one trace");
  ToggleCoverage cov;
  for (const auto &t : traces) cov.merge(toggle_one(t));
  return cov;
}

double AssertionCoverage::percent() const {
  // Asserts carry the score; a cover-only suite falls back to covers.
  return assert_total ? ratio(assert_covered, assert_total) : ratio(cover_covered, cover_total);
}

AssertionCoverage assertion_coverage(const std::vector<DirectiveStats> &stats) {
  AssertionCoverage cov;
  for (const auto &s : stats) {
    const bool hit = s.real_successes >= 1;
    if (s.kind == DirectiveKind::Assert) {
      ++cov.assert_total;
      cov.assert_covered += hit;
    } else {
      ++cov.cover_total;
      cov.cover_covered += hit;
    }
    if (!hit) cov.unsuccessful.push_back(s.name);
  }
  std::sort(cov.unsuccessful.begin(), cov.unsuccessful.end());
  return cov;
}

double CoverageReport::score() const {
  double sum = toggle.percent() + fsm.percent();
  int n = 2;
  if (assertion.applicable()) {
    sum += assertion.percent();
    ++n;
  }
  return sum / n;
}

CoverageReport collect_coverage(std::span<const SignalTrace> traces, const std::vector<DirectiveStats> &stats,
                                unsigned workers) {
  if (traces.empty()) throw Error(ErrorKind::InvalidArgument, "no traces to collect coverage from");
  struct Part {
    FsmCoverage fsm;
    ToggleCoverage toggle;
  };
  auto parts = parallel_map(traces.size(), workers, [&](std::size_t i) {
    return Part{fsm_coverage(traces.subspan(i, 1)), toggle_one(traces[i])};
  });
  CoverageReport report;
  report.trace_count = traces.size();
  for (const auto &p : parts) {
    report.fsm.merge(p.fsm);
    report.toggle.merge(p.toggle);
  }
  report.assertion = assertion_coverage(stats);
  return report;
}

std::string render_coverage(const CoverageReport &r) {
  std::ostringstream out;
  const std::string assert_col = r.assertion.applicable() ? fixed2(r.assertion.percent()) : "n/a";
  out << "Coverage Summary (" << r.trace_count << (r.trace_count == 1 ? " trace" : " traces") << ")\n\n";
  out << std::right << std::setw(8) << "SCORE" << std::setw(9) << "TOGGLE" << std::setw(9) << "FSM" << std::setw(9)
      << "ASSERT" << '\n';
  out << std::setw(8) << fixed2(r.score()) << std::setw(9) << fixed2(r.toggle.percent()) << std::setw(9)
      << fixed2(r.fsm.percent()) << std::setw(9) << assert_col << '\n';
  out << "\nLine, condition, branch and path metrics measure HDL source text and are not collected.\n";

  const auto &universe = transition_universe();
  out << "\nFSM coverage\n";
  out << "  states       " << std::setw(7) << (std::to_string(r.fsm.states_covered()) + "/" + std::to_string(kStateCount))
      << std::setw(9) << fixed2(ratio(r.fsm.states_covered(), kStateCount)) << '\n';
  out << "  transitions  " << std::setw(7)
      << (std::to_string(r.fsm.transitions_covered()) + "/" + std::to_string(universe.size())) << std::setw(9)
      << fixed2(ratio(r.fsm.transitions_covered(), universe.size())) << '\n';
  for (std::size_t i = 0; i < kStateCount; ++i)
    if (!r.fsm.states[i]) out << "  unvisited state " << to_string(static_cast<ControllerState>(i)) << '\n';
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (!r.fsm.transitions[i])
      out << "  uncovered transition " << to_string(universe[i].first) << " -> " << to_string(universe[i].second)
          << '\n';

  out << "\nToggle coverage  " << r.toggle.bits_covered() << "/" << r.toggle.bits_total() << " bits\n";
  std::size_t width = 8;
  for (const auto &s : r.toggle.signals) width = std::max(width, s.name.size() + 2);
  out << "  " << std::left << std::setw(static_cast<int>(width)) << "signal" << std::right << std::setw(6) << "width"
      << std::setw(9) << "covered" << "  note\n";
  for (const auto &s : r.toggle.signals) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << s.name << std::right << std::setw(6) << s.width
        << std::setw(9) << (std::to_string(s.bits_covered()) + "/" + std::to_string(s.width)) << "  ";
    if (s.constant) {
      out << "constant";
    } else if (!s.covered()) {
      std::string missing;
      for (std::size_t b = 0; b < s.width; ++b) {
        if (s.rose[b] && s.fell[b]) continue;
        if (!missing.empty()) missing += ", ";
        const char *what = !s.rose[b] && !s.fell[b] ? "no toggle" : !s.rose[b] ? "no 0->1" : "no 1->0";
        missing += "[" + std::to_string(b) + "] " + what;
      }
      out << missing;
    }
    out << '\n';
  }

  out << "\nAssertion coverage\n";
  if (!r.assertion.applicable()) {
    out << "  not applicable (no directives)\n";
  } else {
    out << "  asserts with a real success  " << r.assertion.assert_covered << "/" << r.assertion.assert_total << '\n';
    out << "  covers with a match          " << r.assertion.cover_covered << "/" << r.assertion.cover_total << '\n';
    for (const auto &n : r.assertion.unsuccessful) out << "  never succeeded: " << n << '\n';
  }
  return out.str();
}

std::string render_coverage_json(const CoverageReport &r) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["traces"] = r.trace_count;
  doc["score"] = r.score();
  json states = json::array();
  for (std::size_t i = 0; i < kStateCount; ++i)
    states.push_back({{"state", to_string(static_cast<ControllerState>(i))}, {"covered", bool(r.fsm.states[i])}});
  json arcs = json::array();
  const auto &universe = transition_universe();
  for (std::size_t i = 0; i < universe.size(); ++i)
    arcs.push_back({{"from", to_string(universe[i].first)},
                    {"to", to_string(universe[i].second)},
                    {"covered", bool(r.fsm.transitions[i])}});
  doc["fsm"] = {{"percent", r.fsm.percent()},
                {"states_covered", r.fsm.states_covered()},
                {"states_total", kStateCount},
                {"transitions_covered", r.fsm.transitions_covered()},
                {"transitions_total", universe.size()},
                {"states", states},
                {"transitions", arcs}};
  json sigs = json::array();
  for (const auto &s : r.toggle.signals) {
    sigs.push_back({{"name", s.name},
                    {"width", s.width},
                    {"rose", std::vector<int>(s.rose.begin(), s.rose.end())},
                    {"fell", std::vector<int>(s.fell.begin(), s.fell.end())},
                    {"constant", s.constant}});
  }
  doc["toggle"] = {{"percent", r.toggle.percent()},
                   {"bits_covered", r.toggle.bits_covered()},
                   {"bits_total", r.toggle.bits_total()},
                   {"signals", sigs}};
  if (r.assertion.applicable()) {
    doc["assertion"] = {{"percent", r.assertion.percent()},
                        {"assert_covered", r.assertion.assert_covered},
                        {"assert_total", r.assertion.assert_total},
                        {"cover_covered", r.assertion.cover_covered},
                        {"cover_total", r.assertion.cover_total},
                        {"unsuccessful", r.assertion.unsuccessful}};
  } else {
    doc["assertion"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

CoverageReport parse_coverage_json(std::string_view text) {
  CoverageReport r;
  try {
    const auto doc = nlohmann::json::parse(text);
    r.trace_count = doc.at("traces").get<std::size_t>();
    for (const auto &s : doc.at("fsm").at("states")) {
      const auto state = parse_state(s.at("state").get<std::string>());
      if (!state) throw Error(ErrorKind::Parse, "coverage JSON: unknown state");
      r.fsm.states[static_cast<std::size_t>(*state)] = s.at("covered").get<bool>();
    }
    for (const auto &a : doc.at("fsm").at("transitions")) {
      const auto from = parse_state(a.at("from").get<std::string>());
      const auto to = parse_state(a.at("to").get<std::string>());
      const auto idx = from && to ? arc_index(*from, *to) : std::nullopt;
      if (!idx) throw Error(ErrorKind::Parse, "coverage JSON: transition outside the controller universe");
      r.fsm.transitions[*idx] = a.at("covered").get<bool>();
    }
    for (const auto &s : doc.at("toggle").at("signals")) {
      SignalToggle sig;
      sig.name = s.at("name").get<std::string>();
      sig.width = s.at("width").get<unsigned>();
      for (int v : s.at("rose").get<std::vector<int>>()) sig.rose.push_back(v != 0);
      for (int v : s.at("fell").get<std::vector<int>>()) sig.fell.push_back(v != 0);
      sig.constant = s.at("constant").get<bool>();
      if (sig.rose.size() != sig.width || sig.fell.size() != sig.width)
        throw Error(ErrorKind::Parse, "coverage JSON: toggle bit count differs from width for '" + sig.name + "'");
      r.toggle.signals.push_back(std::move(sig));
    }
    const auto &a = doc.at("assertion");
    if (!a.is_null()) {
      r.assertion.assert_covered = a.at("assert_covered").get<std::size_t>();
      r.assertion.assert_total = a.at("assert_total").get<std::size_t>();
      r.assertion.cover_covered = a.at("cover_covered").get<std::size_t>();
      r.assertion.cover_total = a.at("cover_total").get<std::size_t>();
      r.assertion.unsuccessful = a.at("unsuccessful").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Parse, std::string("coverage JSON: ") + e.what());
  }
  return r;
}

}  // namespace marchsim
