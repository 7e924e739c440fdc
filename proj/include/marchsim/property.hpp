#pragma once

// Clocked temporal properties over a SignalTrace: a small SVA subset with
// fixed-delay sequences, overlapped/non-overlapped implication and
// disable iff, evaluated with an attempt started at every cycle.
//
//   property := [disable iff (expr)] seq [(|-> | |=>) [##N] seq]
//   seq      := [##N] expr (##N expr)*
//   expr     := expr || expr | expr && expr | !expr | a == b | a != b
//             | stable(sig) | $stable(sig) | first_match(expr) | (expr)
//             | signal | enumerant | integer | N'bX | N'dX | N'hX

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marchsim/trace.hpp"

namespace marchsim {

struct ExprNode;
using BoolExpr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind : std::uint8_t { Const, Ident, Stable, Not, And, Or, Eq, Ne };
  Kind kind = Kind::Const;
  std::int64_t value = 0;  // Const
  std::string name;        // Ident, Stable
  BoolExpr lhs;            // Not uses lhs only
  BoolExpr rhs;
};

// Canonical text of an expression, used in reports and offending-expression logs.
std::string to_text(const BoolExpr &expr);

struct SeqTerm {
  std::uint32_t delay = 0;  // cycles after the previous term (or the start)
  BoolExpr expr;
};

struct SequenceExpr {
  std::vector<SeqTerm> terms;

  // Cycles from the start of the sequence to its final term.
  std::uint64_t length() const;
};

std::string to_text(const SequenceExpr &seq);

struct Implication {
  bool overlapped = true;
  std::uint32_t delay = 0;
  SequenceExpr consequent;
};

struct PropertyDef {
  std::optional<BoolExpr> disable_iff;
  SequenceExpr antecedent;  // the whole body for plain properties
  std::optional<Implication> implication;
};

PropertyDef parse_property(std::string_view text);
std::string to_text(const PropertyDef &property);

enum class DirectiveKind : std::uint8_t { Assert, Cover };
enum class Severity : std::uint8_t { Info, Warning, Error, Fatal };

std::string_view to_string(Severity s);
Severity parse_severity(std::string_view text);

struct Directive {
  DirectiveKind kind = DirectiveKind::Assert;
  std::string name;
  PropertyDef property;
  std::string source;  // property text as written
  std::string pass_message;
  std::string fail_message;
  Severity severity = Severity::Error;
};

// Suite file: one directive per line,
//   assert <name> [severity] : <property> [: "pass message" [: "fail message"]]
//   cover <name> : <property>
// with '#' comment lines.
std::vector<Directive> parse_suite(std::string_view text);
std::string format_suite(const std::vector<Directive> &suite);

// The controller suite: 53 asserts (Ap*) and their 53 covers (Cp*).
// `pause_edges` is the pause-to-rdn0 distance checked by Ap7 (256 at c_size 8).
std::vector<Directive> builtin_suite(std::uint64_t pause_edges = 256);

enum class Outcome : std::uint8_t { Success, Failure, Vacuous, Disabled, Incomplete };

struct AttemptResult {
  Outcome outcome = Outcome::Incomplete;
  std::size_t start = 0;
  std::size_t decided = 0;  // cycle at which the outcome became known
  std::string offending;    // failing term text (Failure only)
};

struct DirectiveStats {
  DirectiveKind kind = DirectiveKind::Assert;
  std::string name;
  Severity severity = Severity::Error;
  std::uint64_t attempts = 0;
  std::uint64_t real_successes = 0;  // matches, for covers
  std::uint64_t failures = 0;        // no-match attempts, for covers
  std::uint64_t vacuous = 0;
  std::uint64_t disabled = 0;
  std::uint64_t incomplete = 0;

  std::uint64_t matches() const { return real_successes; }
  bool conserved() const {
    return attempts == real_successes + failures + vacuous + disabled + incomplete;
  }
  DirectiveStats &operator+=(const DirectiveStats &other);
  friend bool operator==(const DirectiveStats &, const DirectiveStats &) = default;
};

struct EventRecord {
  std::size_t cycle = 0;  // failure cycle
  std::string directive;
  std::size_t start = 0;
  std::string offending;
  Severity severity = Severity::Error;
  std::string message;
};

struct EvalOptions {
  unsigned workers = 1;
  std::string scope = "mbist";  // prefix for log lines
};

struct EvalResult {
  std::vector<DirectiveStats> stats;  // suite order
  std::vector<EventRecord> events;    // ordered by (cycle, directive name)
  bool aborted = false;               // a fatal assertion failed
  std::size_t evaluated_cycles = 0;
};

// Binds a property to a trace's signals; throws Error(UnknownName) for
// unknown signals or enumerants.
class CompiledProperty {
 public:
  CompiledProperty(const PropertyDef &property, const SignalTrace &trace);
  ~CompiledProperty();
  CompiledProperty(CompiledProperty &&) noexcept;
  CompiledProperty &operator=(CompiledProperty &&) noexcept;

  // Outcome of the attempt starting at `start`, seeing only the first
  // `horizon` cycles of the trace.
  AttemptResult attempt(std::size_t start, std::size_t horizon) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

EvalResult evaluate(const SignalTrace &trace, const std::vector<Directive> &suite, const EvalOptions &options = {});

// Accumulates per-directive stats across runs (suites must match by name).
void merge_stats(std::vector<DirectiveStats> &into, const std::vector<DirectiveStats> &from);

std::string format_events(const std::vector<EventRecord> &events, std::string_view scope = "mbist");

// Assertion report: category/severity summaries, then assert and cover tables
// sorted by name.
std::string render_report(const std::vector<DirectiveStats> &stats);
// JSON keeps suite order within the assertion and cover arrays.
std::string render_report_json(const std::vector<DirectiveStats> &stats);
std::vector<DirectiveStats> parse_report_json(std::string_view text);

}  // namespace marchsim
