#pragma once

// FSM state/transition, toggle and assertion coverage over controller traces.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marchsim/controller.hpp"
#include "marchsim/property.hpp"
#include "marchsim/trace.hpp"

namespace marchsim {

struct FsmCoverage {
  std::array<bool, kStateCount> states{};
  std::vector<bool> transitions = std::vector<bool>(transition_universe().size());  // universe order

  std::size_t states_covered() const;
  std::size_t transitions_covered() const;
  double percent() const;  // mean of the state and transition percentages

  void merge(const FsmCoverage &other);
  friend bool operator==(const FsmCoverage &, const FsmCoverage &) = default;
};

// Throws Error(Conformance) on an unknown state value or an arc outside
// transition_universe().
FsmCoverage fsm_coverage(std::span<const SignalTrace> traces);

struct SignalToggle {
  std::string name;
  unsigned width = 1;
  std::vector<bool> rose;  // per bit, LSB first
  std::vector<bool> fell;
  bool constant = true;  // no bit changed in any trace

  std::size_t bits_covered() const;
  bool covered() const { return bits_covered() == width; }
  friend bool operator==(const SignalToggle &, const SignalToggle &) = default;
};

struct ToggleCoverage {
  std::vector<SignalToggle> signals;

  std::size_t bits_total() const;
  std::size_t bits_covered() const;
  double percent() const;

  void merge(const ToggleCoverage &other);
  friend bool operator==(const ToggleCoverage &, const ToggleCoverage &) = default;
};

// Requires at least one trace; signals are matched by name across traces.
ToggleCoverage toggle_coverage(std::span<const SignalTrace> traces);

struct AssertionCoverage {
  std::size_t assert_covered = 0;
  std::size_t assert_total = 0;
  std::size_t cover_covered = 0;
  std::size_t cover_total = 0;
  std::vector<std::string> unsuccessful;  // asserts without a real success, covers without a match

  bool applicable() const { return assert_total + cover_total > 0; }
  double percent() const;
  friend bool operator==(const AssertionCoverage &, const AssertionCoverage &) = default;
};

AssertionCoverage assertion_coverage(const std::vector<DirectiveStats> &stats);

struct CoverageReport {
  std::size_t trace_count = 0;
  FsmCoverage fsm;
  ToggleCoverage toggle;
  AssertionCoverage assertion;

  // Unweighted mean of FSM, TOGGLE and (when applicable) ASSERT.
  double score() const;
  friend bool operator==(const CoverageReport &, const CoverageReport &) = default;
};

// Collects per trace on `workers` threads and merges in input order.
// Throws Error(InvalidArgument) when `traces` is empty.
CoverageReport collect_coverage(std::span<const SignalTrace> traces, const std::vector<DirectiveStats> &stats = {},
                                unsigned workers = 1);

std::string render_coverage(const CoverageReport &report);
std::string render_coverage_json(const CoverageReport &report);
CoverageReport parse_coverage_json(std::string_view text);

}  // namespace marchsim
