#include "marchsim/property.hpp"

#include <algorithm>
#include <iomanip>
#include "json.hpp"
#include <sstream>

#include "marchsim/error.hpp"
#include "marchsim/parallel.hpp"

namespace marchsim {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
    case Severity::Fatal: return "fatal";
  }
  return "?";
}

Severity parse_severity(std::string_view text) {
  for (auto s : {Severity::Info, Severity::Warning, Severity::Error, Severity::Fatal})
    if (to_string(s) == text) return s;
  throw Error(ErrorKind::UnknownName, "unknown severity '" + std::string(text) + "' (info, warning, error, fatal)");
}

DirectiveStats &DirectiveStats::operator+=(const DirectiveStats &o) {
  attempts += o.attempts;
  real_successes += o.real_successes;
  failures += o.failures;
  vacuous += o.vacuous;
  disabled += o.disabled;
  incomplete += o.incomplete;
  return *this;
}

// ---------------------------------------------------------------------------
// Binding and evaluation

namespace {

struct Bound {
  ExprNode::Kind kind;
  std::int64_t value = 0;
  std::span<const std::uint64_t> column;
  int lhs = -1;
  int rhs = -1;
};

class Binder {
 public:
  explicit Binder(const SignalTrace &trace) : trace_(trace) {}

  int bind(const BoolExpr &e, const SignalInfo *alphabet = nullptr) {
    Bound b;
    b.kind = e->kind;
    switch (e->kind) {
      case ExprNode::Kind::Const: b.value = e->value; break;
      case ExprNode::Kind::Ident:
        if (auto idx = trace_.find(e->name)) {
          b.column = trace_.column(*idx);
        } else {
          b.kind = ExprNode::Kind::Const;
          b.value = enumerant(e->name, alphabet);
        }
        break;
      case ExprNode::Kind::Stable: b.column = trace_.column(trace_.index_of(e->name)); break;
      case ExprNode::Kind::Not: b.lhs = bind(e->lhs); break;
      case ExprNode::Kind::And:
      case ExprNode::Kind::Or:
        b.lhs = bind(e->lhs);
        b.rhs = bind(e->rhs);
        break;
      case ExprNode::Kind::Eq:
      case ExprNode::Kind::Ne:
        // An enumerant operand takes its value from the other side's alphabet.
        b.lhs = bind(e->lhs, signal_of(e->rhs));
        b.rhs = bind(e->rhs, signal_of(e->lhs));
        break;
    }
    nodes.push_back(b);
    return static_cast<int>(nodes.size() - 1);
  }

  std::vector<Bound> nodes;

 private:
  const SignalInfo *signal_of(const BoolExpr &e) const {
    if (e->kind != ExprNode::Kind::Ident) return nullptr;
    auto idx = trace_.find(e->name);
    return idx ? &trace_.signals()[*idx] : nullptr;
  }

  std::int64_t enumerant(const std::string &name, const SignalInfo *alphabet) const {
    auto lookup = [&](const SignalInfo &s) -> std::optional<std::int64_t> {
      auto it = std::find(s.enumerants.begin(), s.enumerants.end(), name);
      if (it == s.enumerants.end()) return std::nullopt;
      return it - s.enumerants.begin();
    };
    if (alphabet && alphabet->is_enum()) {
      if (auto v = lookup(*alphabet)) return *v;
      throw Error(ErrorKind::UnknownName, "'" + name + "' is not an enumerant of signal '" + alphabet->name + "'");
    }
    for (const auto &s : trace_.signals())
      if (auto v = lookup(s)) return *v;
    throw Error(ErrorKind::UnknownName, "unknown signal or enumerant '" + name + "'");
  }

  const SignalTrace &trace_;
};

std::int64_t eval(const std::vector<Bound> &nodes, int at, std::size_t t) {
  const Bound &b = nodes[static_cast<std::size_t>(at)];
  switch (b.kind) {
    case ExprNode::Kind::Const: return b.value;
    case ExprNode::Kind::Ident: return static_cast<std::int64_t>(b.column[t]);
    case ExprNode::Kind::Stable: return t == 0 || b.column[t] == b.column[t - 1];
    case ExprNode::Kind::Not: return eval(nodes, b.lhs, t) == 0;
    case ExprNode::Kind::And: return eval(nodes, b.lhs, t) != 0 && eval(nodes, b.rhs, t) != 0;
    case ExprNode::Kind::Or: return eval(nodes, b.lhs, t) != 0 || eval(nodes, b.rhs, t) != 0;
    case ExprNode::Kind::Eq: return eval(nodes, b.lhs, t) == eval(nodes, b.rhs, t);
    case ExprNode::Kind::Ne: return eval(nodes, b.lhs, t) != eval(nodes, b.rhs, t);
  }
  return 0;
}

// Truth of a bound expression at every cycle of the trace.
std::vector<std::uint8_t> truth_column(const BoolExpr &e, const SignalTrace &trace) {
  Binder binder(trace);
  const int root = binder.bind(e);
  std::vector<std::uint8_t> out(trace.length());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = eval(binder.nodes, root, t) != 0;
  return out;
}

struct Term {
  std::uint32_t delay;
  std::vector<std::uint8_t> truth;
  std::string text;
};

std::vector<Term> compile_sequence(const SequenceExpr &seq, const SignalTrace &trace) {
  std::vector<Term> out;
  for (const auto &term : seq.terms) out.push_back({term.delay, truth_column(term.expr, trace), to_text(term.expr)});
  return out;
}

}  // namespace

struct CompiledProperty::Impl {
  std::vector<Term> antecedent;
  std::vector<Term> consequent;
  bool implication = false;
  std::uint64_t consequent_offset = 0;
  std::size_t length = 0;
  // disable_prefix[t] = number of disabled cycles in [0, t).
  std::vector<std::uint32_t> disable_prefix;

  bool disabled_in(std::size_t from, std::size_t to) const {
    if (disable_prefix.empty()) return false;
    return disable_prefix[to + 1] - disable_prefix[from] != 0;
  }

  enum class Walk { Match, Mismatch, Pending };

  // Steps through the terms from `pos`; on return `pos` is the last cycle
  // examined (or the first cycle beyond the horizon).
  static Walk walk(const std::vector<Term> &terms, std::size_t &pos, std::size_t horizon, std::size_t &failed_term) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      pos += terms[i].delay;
      if (pos >= horizon) return Walk::Pending;
      if (!terms[i].truth[pos]) {
        failed_term = i;
        return Walk::Mismatch;
      }
    }
    return Walk::Match;
  }
};

CompiledProperty::CompiledProperty(const PropertyDef &property, const SignalTrace &trace)
    : impl_(std::make_unique<Impl>()) {
  impl_->length = trace.length();
  impl_->antecedent = compile_sequence(property.antecedent, trace);
  if (property.implication) {
    impl_->implication = true;
    impl_->consequent = compile_sequence(property.implication->consequent, trace);
    impl_->consequent_offset = (property.implication->overlapped ? 0 : 1) + property.implication->delay;
  }
  if (property.disable_iff) {
    const auto truth = truth_column(*property.disable_iff, trace);
    impl_->disable_prefix.resize(truth.size() + 1);
    for (std::size_t t = 0; t < truth.size(); ++t) impl_->disable_prefix[t + 1] = impl_->disable_prefix[t] + truth[t];
  }
}

CompiledProperty::~CompiledProperty() = default;
CompiledProperty::CompiledProperty(CompiledProperty &&) noexcept = default;
CompiledProperty &CompiledProperty::operator=(CompiledProperty &&) noexcept = default;

AttemptResult CompiledProperty::attempt(std::size_t start, std::size_t horizon) const {
  const Impl &p = *impl_;
  horizon = std::min(horizon, p.length);
  AttemptResult r;
  r.start = start;
  std::size_t pos = start;
  std::size_t failed = 0;

  auto finish = [&](Outcome outcome) {
    const bool pending = outcome == Outcome::Incomplete;
    const std::size_t last = pending ? horizon - 1 : pos;
    r.decided = pending ? horizon : pos;
    if (start < horizon && p.disabled_in(start, std::min(last, horizon - 1))) {
      r.outcome = Outcome::Disabled;
      r.offending.clear();
    } else {
      r.outcome = outcome;
    }
    return r;
  };

  auto walk = Impl::walk(p.antecedent, pos, horizon, failed);
  if (walk == Impl::Walk::Pending) return finish(Outcome::Incomplete);
  if (walk == Impl::Walk::Mismatch) {
    if (p.implication) return finish(Outcome::Vacuous);
    r.offending = p.antecedent[failed].text;
    return finish(Outcome::Failure);
  }
  if (!p.implication) return finish(Outcome::Success);

  pos += p.consequent_offset;
  if (pos >= horizon) return finish(Outcome::Incomplete);
  walk = Impl::walk(p.consequent, pos, horizon, failed);
  if (walk == Impl::Walk::Pending) return finish(Outcome::Incomplete);
  if (walk == Impl::Walk::Mismatch) {
    r.offending = p.consequent[failed].text;
    return finish(Outcome::Failure);
  }
  return finish(Outcome::Success);
}

namespace {

struct DirectiveRun {
  DirectiveStats stats;
  std::vector<EventRecord> events;
  std::optional<std::size_t> first_failure;
};

DirectiveRun run_directive(const Directive &d, const CompiledProperty &compiled, std::size_t horizon) {
  DirectiveRun out;
  out.stats.kind = d.kind;
  out.stats.name = d.name;
  out.stats.severity = d.severity;
  for (std::size_t t = 0; t < horizon; ++t) {
    const AttemptResult a = compiled.attempt(t, horizon);
    ++out.stats.attempts;
    switch (a.outcome) {
      case Outcome::Success: ++out.stats.real_successes; break;
      case Outcome::Vacuous: ++out.stats.vacuous; break;
      case Outcome::Disabled: ++out.stats.disabled; break;
      case Outcome::Incomplete: ++out.stats.incomplete; break;
      case Outcome::Failure:
        ++out.stats.failures;
        if (d.kind == DirectiveKind::Assert) {
          out.events.push_back({a.decided, d.name, a.start, a.offending, d.severity, d.fail_message});
          if (!out.first_failure || a.decided < *out.first_failure) out.first_failure = a.decided;
        }
        break;
    }
  }
  return out;
}

}  // namespace

EvalResult evaluate(const SignalTrace &trace, const std::vector<Directive> &suite, const EvalOptions &options) {
  std::vector<std::string> names;
  for (const auto &d : suite) {
    if (std::find(names.begin(), names.end(), d.name) != names.end())
      throw Error(ErrorKind::InvalidArgument, "duplicate directive name '" + d.name + "'");
    names.push_back(d.name);
  }

  // Binding errors surface here, in suite order.
  std::vector<CompiledProperty> compiled;
  compiled.reserve(suite.size());
  for (const auto &d : suite) compiled.emplace_back(d.property, trace);

  auto sweep = [&](std::size_t horizon) {
    return parallel_map(suite.size(), options.workers,
                        [&](std::size_t i) { return run_directive(suite[i], compiled[i], horizon); });
  };

  std::size_t horizon = trace.length();
  auto runs = sweep(horizon);

  // A fatal failure stops the simulation at its cycle: re-evaluate the prefix.
  std::optional<std::size_t> fatal_at;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (suite[i].kind == DirectiveKind::Assert && suite[i].severity == Severity::Fatal && runs[i].first_failure)
      fatal_at = std::min(fatal_at.value_or(*runs[i].first_failure), *runs[i].first_failure);
  }
  EvalResult result;
  if (fatal_at) {
    horizon = *fatal_at + 1;
    runs = sweep(horizon);
    result.aborted = true;
  }
  result.evaluated_cycles = horizon;
  for (auto &r : runs) {
    result.stats.push_back(r.stats);
    for (auto &e : r.events) result.events.push_back(std::move(e));
  }
  std::stable_sort(result.events.begin(), result.events.end(), [](const EventRecord &a, const EventRecord &b) {
    return std::tie(a.cycle, a.directive, a.start) < std::tie(b.cycle, b.directive, b.start);
  });
  return result;
}

void merge_stats(std::vector<DirectiveStats> &into, const std::vector<DirectiveStats> &from) {
  if (into.empty()) {
    into = from;
    return;
  }
  if (into.size() != from.size()) throw Error(ErrorKind::InvalidArgument, "cannot merge stats of different suites");
  for (std::size_t i = 0; i < into.size(); ++i) {
    if (into[i].name != from[i].name || into[i].kind != from[i].kind)
      throw Error(ErrorKind::InvalidArgument, "cannot merge stats: '" + into[i].name + "' vs '" + from[i].name + "'");
    into[i] += from[i];
  }
}

std::string format_events(const std::vector<EventRecord> &events, std::string_view scope) {
  std::ostringstream out;
  auto sev = [](Severity s) {
    std::string t(to_string(s));
    t[0] = static_cast<char>(t[0] - 'a' + 'A');
    return t;
  };
  for (const auto &e : events) {
    out << '"' << scope << '.' << e.directive << "\": started at " << e.start << "ns failed at " << e.cycle << "ns\n";
    out << "\tOffending '" << e.offending << "'\n";
    out << sev(e.severity) << ": [" << e.cycle << "ns] " << scope << '.' << e.directive;
    if (!e.message.empty()) out << ": " << e.message;
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Suites

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// Splits a suite line on ':' outside quoted strings.
std::vector<std::string> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\' && i + 1 < line.size()) {
      fields.back() += line[++i];
      continue;
    }
    if (c == '"') {
      quoted = !quoted;
      fields.back() += c;
    } else if (c == ':' && !quoted) {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, "suite line " + std::to_string(line_no) + ": unterminated string");
  return fields;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string &field, std::size_t line_no) {
  const std::string t = trim(field);
  if (t.size() < 2 || t.front() != '"' || t.back() != '"')
    throw Error(ErrorKind::Parse, "suite line " + std::to_string(line_no) + ": messages must be double-quoted");
  return t.substr(1, t.size() - 2);
}

}  // namespace

std::vector<Directive> parse_suite(std::string_view text) {
  std::vector<Directive> suite;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto where = "suite line " + std::to_string(line_no) + ": ";
    auto fields = split_fields(stripped, line_no);
    if (fields.size() < 2) throw Error(ErrorKind::Parse, where + "expected '<kind> <name> : <property>'");

    std::istringstream head(fields[0]);
    std::string kind, name, severity, extra;
    head >> kind >> name >> severity >> extra;
    Directive d;
    if (kind == "assert") {
      d.kind = DirectiveKind::Assert;
    } else if (kind == "cover") {
      d.kind = DirectiveKind::Cover;
    } else {
      throw Error(ErrorKind::Parse, where + "expected 'assert' or 'cover', got '" + kind + "'");
    }
    if (name.empty()) throw Error(ErrorKind::Parse, where + "missing directive name");
    if (!extra.empty()) throw Error(ErrorKind::Parse, where + "unexpected '" + extra + "'");
    d.name = name;
    if (!severity.empty()) {
      try {
        d.severity = parse_severity(severity);
      } catch (const Error &e) {
        throw Error(ErrorKind::Parse, where + e.what());
      }
    }
    d.source = trim(fields[1]);
    try {
      d.property = parse_property(d.source);
    } catch (const ParseError &e) {
      throw Error(ErrorKind::Parse, where + e.what());
    }
    if (fields.size() > 2) d.pass_message = unquote(fields[2], line_no);
    if (fields.size() > 3) d.fail_message = unquote(fields[3], line_no);
    if (fields.size() > 4) throw Error(ErrorKind::Parse, where + "too many ':' fields");
    for (const auto &other : suite)
      if (other.name == d.name) throw Error(ErrorKind::Parse, where + "duplicate directive name '" + d.name + "'");
    suite.push_back(std::move(d));
  }
  return suite;
}

std::string format_suite(const std::vector<Directive> &suite) {
  std::ostringstream out;
  for (const auto &d : suite) {
    out << (d.kind == DirectiveKind::Assert ? "assert " : "cover ") << d.name;
    if (d.kind == DirectiveKind::Assert) out << ' ' << to_string(d.severity);
    out << " : " << (d.source.empty() ? to_text(d.property) : d.source);
    if (!d.pass_message.empty() || !d.fail_message.empty()) out << " : " << quote(d.pass_message);
    if (!d.fail_message.empty()) out << " : " << quote(d.fail_message);
    out << '\n';
  }
  return out.str();
}

std::vector<Directive> builtin_suite(std::uint64_t pause_edges) {
  struct Row {
    std::string name;
    Severity severity;
    std::string text;
    const char *pass;
    const char *fail;
  };
  constexpr auto E = Severity::Error;
  constexpr auto W = Severity::Warning;
  std::vector<Row> rows{
      {"Ap_loop_wdn0", E, "disable iff (state != wdn0) (state == wdn0 && count != c_min) |-> state == wdn0", "", ""},
      {"Ap_loop_pause", E, "disable iff (state != pause) (state == pause && count != c_max) |-> state == pause", "", ""},
      {"Ap_loop_done", E, "disable iff (state != s_done) (state == s_done && t_mode) |-> state == s_done", "", ""},
      {"Ap_loop_rdna0", E, "disable iff (state != rdna0) (state == rdna0 && count != c_min) |-> state == rdna0", "", ""},
  };
  // Any march state (and s_done) returns to s_idle under reset.
  for (const char *s : {"rup0", "wdn0", "wup1", "rdn1", "wdna0", "rdn0", "wdn1", "rup1", "wup0", "rdna0", "s_done"})
    rows.push_back({std::string("Ap_") + s + "_idle", E, std::string("state == ") + s + " |=> rst == 1 && state == s_idle",
                    "", ""});

  std::vector<Row> tail{
      {"Ap13", W, "(state == wdn0 && count == c_min) |-> ##1 state == rup0", "rup0 state transition is legal",
       "rup0 state transition is illegal"},
      {"Ap6", W, "rst |-> stable(state)", "High rst no state transition", "state transition is not stable with rst"},
      {"Ap1", Severity::Info, "rst |-> state == s_idle", "property is succeeded", "property is failed"},
      {"Ap2", W, "first_match(state == wdn0) |-> t_mode && en", "enable rose at right time",
       "enable is not at right time"},
      {"Ap3", E, "first_match(state == rup0) |-> t_mode && en", "", ""},
      {"Ap4", E, "first_match(state == wup1) |-> t_mode && en", "", ""},
      {"Ap5", W, "disable iff (!t_mode) t_mode |-> en", "enable rise is ok", "enable gets delay"},
      {"Ap7", E, "state == pause |-> ##" + std::to_string(pause_edges) + " state == rdn0", "", ""},
      {"Ap8", E, "disable iff (rst) t_mode", "t_mode and rst are synchronized", "t_mode and rst are not synchronized"},
      {"Ap9", E, "disable iff (rst == 1) !t_mode |-> state == s_idle", "", ""},
      {"Ap10", W, "(state == pause && count == c_max) |=> state == rdn0", "rdn0 state transition is legal",
       "rdn0 state transition is illegal"},
      {"Ap12", W, "(state == s_idle && count == c_min) |-> ##1 state == wdn0", "wdn0 state transition is legal",
       "wdn0 state transition is illegal"},
      {"Ap14", W, "(state == rup0 && count == c_max) |-> ##1 state == wup1", "wup1 state transition is legal",
       "wup1 state transition is illegal"},
      {"Ap11", E, "!(rst && t_mode)", "input constraints is ok", "fatal is occured"},
      {"Ap15", E, "match |-> pass", "", ""},
      {"Ap16", E, "match |-> !(fail && pass)", "", ""},
      {"Ap17", E, "t_mode |-> !(pass && fail)", "", ""},
      {"Ap18", E, "state == wdna0 |=> state == pause && count == c_min", "", ""},
      {"Ap19", E, "state == s_idle |=> state == wdn0 && t_mode", "", ""},
      {"Ap20", E, "state == wdn0 |=> state == rup0 && count == c_min", "", ""},
      {"Ap21", E, "state == rup0 |=> state == wup1 && count == c_min", "", ""},
      {"Ap22", E, "state == wup1 |=> state == rdn1 && count == c_max", "", ""},
      {"Ap23", E, "state == rdn1 |=> state == wdna0 && count == c_max", "", ""},
      {"Ap24", E, "state == pause |=> state == pause && !(count == c_max)", "", ""},
      {"Ap25", E, "state == pause |=> state == rdn0 && count == c_max", "", ""},
      {"Ap26", E, "state == rdn0 |=> state == wdn1 && count == c_max", "", ""},
      {"Ap27", E, "state == wdn1 |=> state == rup1 && count == c_min", "", ""},
      {"Ap28", E, "state == rup1 |=> state == wup0 && count == c_min", "", ""},
      {"Ap29", E, "state == wup0 |=> state == rdna0 && count == c_max", "", ""},
      {"Ap30", E, "state == rdna0 |=> state == rdna0 && !(count == c_min)", "", ""},
      {"Ap31", E, "state == rdna0 |=> state == s_done && count == c_max", "", ""},
      {"Ap32", E, "state == s_done |=> state == s_done && !rst", "", ""},
      {"Ap33", E, "state == s_done |=> state == s_idle && rst", "", ""},
      {"Ap34", E, "(state == wdn0) |-> !(rw || g_patt)", "", ""},
      {"Ap_check_idle_en", E, "disable iff (state != s_idle) ##1 en == 0", "", ""},
      {"Ap_check_en_value", E, "disable iff (state == s_idle) en == 1", "", ""},
      {"Ap_check_pause", E, "disable iff (state != pause) en == 1 |-> stable(rw)", "", ""},
      {"Ap_check_done", E, "disable iff (state != s_done) ##1 done == 1 |-> en == 0", "", ""},
  };
  rows.insert(rows.end(), tail.begin(), tail.end());

  std::vector<Directive> asserts;
  std::vector<Directive> covers;
  for (const auto &r : rows) {
    Directive d;
    d.kind = DirectiveKind::Assert;
    d.name = r.name;
    d.severity = r.severity;
    d.source = r.text;
    d.property = parse_property(r.text);
    d.pass_message = r.pass;
    d.fail_message = r.fail;
    Directive c;
    c.kind = DirectiveKind::Cover;
    c.name = "Cp" + d.name.substr(2);
    c.source = d.source;
    c.property = d.property;
    asserts.push_back(std::move(d));
    covers.push_back(std::move(c));
  }
  asserts.insert(asserts.end(), std::make_move_iterator(covers.begin()), std::make_move_iterator(covers.end()));
  return asserts;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::vector<const DirectiveStats *> of_kind(const std::vector<DirectiveStats> &stats, DirectiveKind kind) {
  std::vector<const DirectiveStats *> out;
  for (const auto &s : stats)
    if (s.kind == kind) out.push_back(&s);
  return out;
}

std::vector<const DirectiveStats *> sorted_of(const std::vector<DirectiveStats> &stats, DirectiveKind kind) {
  auto out = of_kind(stats, kind);
  std::sort(out.begin(), out.end(), [](auto *a, auto *b) { return a->name < b->name; });
  return out;
}

}  // namespace

std::string render_report(const std::vector<DirectiveStats> &stats) {
  const auto asserts = sorted_of(stats, DirectiveKind::Assert);
  const auto covers = sorted_of(stats, DirectiveKind::Cover);
  std::ostringstream out;
  auto summary_row = [&](const std::string &label, std::size_t n) {
    out << std::left << std::setw(20) << label << std::right << std::setw(8) << n << std::setw(12) << n
        << std::setw(11) << 0 << '\n';
  };
  auto summary_head = [&](const char *title) {
    out << title << "\n\n"
        << std::left << std::setw(20) << "" << std::right << std::setw(8) << "ASSERT" << std::setw(12) << "PROPERTIES"
        << std::setw(11) << "SEQUENCES" << '\n';
    summary_row("Total", asserts.size());
  };

  out << "Detailed Assertions and Cover Properties Report\n\n";
  summary_head("Assertions by Category");
  summary_row("Category 0", asserts.size());
  out << '\n';
  summary_head("Assertions by Severity");
  for (auto sev : {Severity::Info, Severity::Warning, Severity::Error, Severity::Fatal}) {
    const auto n = static_cast<std::size_t>(
        std::count_if(asserts.begin(), asserts.end(), [&](auto *s) { return s->severity == sev; }));
    if (n) summary_row("Severity " + std::string(to_string(sev)), n);
  }

  std::size_t width = 24;
  for (const auto *s : asserts) width = std::max(width, s->name.size() + 2);
  for (const auto *s : covers) width = std::max(width, s->name.size() + 2);

  out << "\nDetail Report for Assertions\n\n"
      << std::left << std::setw(static_cast<int>(width)) << "ASSERTIONS" << std::right << std::setw(10) << "ATTEMPTS"
      << std::setw(16) << "REAL SUCCESSES" << std::setw(10) << "FAILURES" << std::setw(12) << "INCOMPLETE" << '\n';
  for (const auto *s : asserts) {
    out << std::left << std::setw(static_cast<int>(width)) << s->name << std::right << std::setw(10) << s->attempts
        << std::setw(16) << s->real_successes << std::setw(10) << s->failures << std::setw(12) << s->incomplete << '\n';
  }
  out << "\nDetail Report for Cover Properties\n\n"
      << std::left << std::setw(static_cast<int>(width)) << "COVER PROPERTIES" << std::right << std::setw(10)
      << "ATTEMPTS" << std::setw(10) << "MATCHES" << std::setw(12) << "INCOMPLETE" << '\n';
  for (const auto *s : covers) {
    out << std::left << std::setw(static_cast<int>(width)) << s->name << std::right << std::setw(10) << s->attempts
        << std::setw(10) << s->matches() << std::setw(12) << s->incomplete << '\n';
  }
  return out.str();
}

std::string render_report_json(const std::vector<DirectiveStats> &stats) {
  nlohmann::ordered_json doc;
  doc["assertions"] = nlohmann::ordered_json::array();
  doc["cover_properties"] = nlohmann::ordered_json::array();
  for (const auto *s : of_kind(stats, DirectiveKind::Assert)) {
    doc["assertions"].push_back({{"name", s->name},
                                 {"severity", to_string(s->severity)},
                                 {"attempts", s->attempts},
                                 {"real_successes", s->real_successes},
                                 {"failures", s->failures},
                                 {"incomplete", s->incomplete},
                                 {"vacuous", s->vacuous},
                                 {"disabled", s->disabled}});
  }
  for (const auto *s : of_kind(stats, DirectiveKind::Cover)) {
    doc["cover_properties"].push_back({{"name", s->name},
                                       {"attempts", s->attempts},
                                       {"matches", s->matches()},
                                       {"incomplete", s->incomplete},
                                       {"no_match", s->failures},
                                       {"vacuous", s->vacuous},
                                       {"disabled", s->disabled}});
  }
  return doc.dump(2) + "\n";
}

std::vector<DirectiveStats> parse_report_json(std::string_view text) {
  std::vector<DirectiveStats> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto &a : doc.at("assertions")) {
      DirectiveStats s;
      s.kind = DirectiveKind::Assert;
      s.name = a.at("name").get<std::string>();
      s.severity = parse_severity(a.at("severity").get<std::string>());
      s.attempts = a.at("attempts").get<std::uint64_t>();
      s.real_successes = a.at("real_successes").get<std::uint64_t>();
      s.failures = a.at("failures").get<std::uint64_t>();
      s.incomplete = a.at("incomplete").get<std::uint64_t>();
      s.vacuous = a.value("vacuous", std::uint64_t{0});
      s.disabled = a.value("disabled", std::uint64_t{0});
      out.push_back(std::move(s));
    }
    for (const auto &c : doc.at("cover_properties")) {
      DirectiveStats s;
      s.kind = DirectiveKind::Cover;
      s.name = c.at("name").get<std::string>();
      s.attempts = c.at("attempts").get<std::uint64_t>();
      s.real_successes = c.at("matches").get<std::uint64_t>();
      s.incomplete = c.at("incomplete").get<std::uint64_t>();
      s.failures = c.value("no_match", std::uint64_t{0});
      s.vacuous = c.value("vacuous", std::uint64_t{0});
      s.disabled = c.value("disabled", std::uint64_t{0});
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Parse, std::string("assertion report JSON: ") + e.what());
  }
  return out;
}

}  // namespace marchsim
