#pragma once

// Independent reference models used by the tests. Nothing here calls into the
// library's evaluation or simulation code; only plain data types are shared.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "marchsim/controller.hpp"
#include "marchsim/fault_memory.hpp"
#include "marchsim/march.hpp"
#include "marchsim/property.hpp"
#include "marchsim/trace.hpp"

namespace oracle {

using namespace marchsim;

// Counts r/w operations in a March notation string by scanning characters.
inline std::size_t count_ops(const std::string &notation) {
  std::size_t n = 0;
  int depth = 0;
  for (std::size_t i = 0; i < notation.size(); ++i) {
    const char c = notation[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth > 0 && (c == 'r' || c == 'w') && i + 1 < notation.size() &&
        (notation[i + 1] == '0' || notation[i + 1] == '1'))
      ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Bit-array memory with SAF/TF/CF semantics written from the fault definitions.

struct BitMemory {
  std::uint64_t words;
  unsigned width;
  std::vector<std::vector<int>> bits;
  FaultSpec fault;

  BitMemory(std::uint64_t w, unsigned wd, FaultSpec f, int background)
      : words(w), width(wd), bits(w, std::vector<int>(wd, background)), fault(f) {
    if (auto *s = std::get_if<StuckAt>(&fault)) bits[s->cell.word][s->cell.bit] = s->value;
  }

  static bool edge_fires(Edge e, int from, int to) {
    if (from == to) return false;
    if (e == Edge::Any) return true;
    return e == Edge::Rising ? to == 1 : to == 0;
  }

  void write_bit(std::uint64_t w, unsigned b, int v) {
    const int old = bits[w][b];
    if (auto *s = std::get_if<StuckAt>(&fault); s && s->cell.word == w && s->cell.bit == b) return;
    if (auto *t = std::get_if<Transition>(&fault); t && t->cell.word == w && t->cell.bit == b) {
      if (edge_fires(t->blocked, old, v)) return;
    }
    bits[w][b] = v;
    if (auto *c = std::get_if<Coupling>(&fault);
        c && c->kind != Coupling::Kind::State && c->aggressor.word == w && c->aggressor.bit == b &&
        edge_fires(c->trigger, old, v)) {
      int &victim = bits[c->victim.word][c->victim.bit];
      const int next = c->kind == Coupling::Kind::Inversion ? 1 - victim : c->forced;
      victim = next;
    }
  }

  int read_bit(std::uint64_t w, unsigned b) const {
    if (auto *c = std::get_if<Coupling>(&fault); c && c->kind == Coupling::Kind::State && c->victim.word == w &&
                                                 c->victim.bit == b &&
                                                 bits[c->aggressor.word][c->aggressor.bit] == c->aggressor_value)
      return c->forced;
    return bits[w][b];
  }

  void write_word(std::uint64_t w, int v) {
    for (unsigned b = 0; b < width; ++b) write_bit(w, b, v);
  }
  // True when every bit reads `v`.
  bool read_word_matches(std::uint64_t w, int v) const {
    for (unsigned b = 0; b < width; ++b)
      if (read_bit(w, b) != v) return false;
    return true;
  }
};

// Runs a March algorithm (b elements ascending) and reports any read mismatch.
inline bool march_detects(const MarchAlgorithm &alg, const FaultSpec &fault, std::uint64_t words, unsigned width) {
  BitMemory mem(words, width, fault, 0);
  for (const auto &el : alg.elements) {
    const auto *m = std::get_if<Marching>(&el);
    if (!m) continue;  // pauses are irrelevant without retention faults
    for (std::uint64_t i = 0; i < words; ++i) {
      const std::uint64_t a = m->direction == Direction::Down ? words - 1 - i : i;
      for (MarchOp op : m->ops) {
        const int v = (op == MarchOp::R1 || op == MarchOp::W1) ? 1 : 0;
        if (op == MarchOp::W0 || op == MarchOp::W1)
          mem.write_word(a, v);
        else if (!mem.read_word_matches(a, v))
          return true;
      }
    }
  }
  return false;
}

// The controller's pass order: {wdn0, rup0, wup1, rdn1, wdna0, pause, rdn0,
// wdn1, rup1, wup0, rdna0}. Returns mismatch flags for the five read passes,
// ORed over power-up backgrounds 0 and 1.
inline std::array<bool, 5> controller_read_flags(std::uint64_t words, unsigned width, const FaultSpec &fault) {
  struct Pass {
    bool down;
    bool read;
    int value;
  };
  const std::vector<Pass> passes{{true, false, 0}, {false, true, 0}, {false, false, 1}, {true, true, 1},
                                 {true, false, 0}, {true, true, 0},  {true, false, 1},  {false, true, 1},
                                 {false, false, 0}, {true, true, 0}};
  std::array<bool, 5> flags{};
  for (int background : {0, 1}) {
    BitMemory mem(words, width, fault, background);
    std::size_t read_index = 0;
    for (const auto &p : passes) {
      for (std::uint64_t i = 0; i < words; ++i) {
        const std::uint64_t a = p.down ? words - 1 - i : i;
        if (p.read) {
          if (!mem.read_word_matches(a, p.value)) flags[read_index] = true;
        } else {
          mem.write_word(a, p.value);
        }
      }
      if (p.read) ++read_index;
    }
  }
  return flags;
}

// ---------------------------------------------------------------------------
// Brute-force property evaluation by span enumeration.
//
// Every term of an attempt sits at a fixed absolute cycle, so the whole span
// is laid out first and each term evaluated independently by walking the
// expression tree against the trace.

struct Verdict {
  Outcome outcome = Outcome::Incomplete;
  std::size_t decided = 0;
};

class BruteForce {
 public:
  BruteForce(const PropertyDef &p, const SignalTrace &trace) : p_(p), trace_(trace) {}

  Verdict attempt(std::size_t start, std::size_t horizon) const {
    struct Slot {
      std::size_t cycle;
      const BoolExpr *expr;
      bool antecedent;
    };
    std::vector<Slot> span;
    std::size_t at = start;
    for (const auto &t : p_.antecedent.terms) {
      at += t.delay;
      span.push_back({at, &t.expr, true});
    }
    if (p_.implication) {
      at += (p_.implication->overlapped ? 0 : 1) + p_.implication->delay;
      for (const auto &t : p_.implication->consequent.terms) {
        at += t.delay;
        span.push_back({at, &t.expr, false});
      }
    }

    std::optional<std::size_t> first_false;
    std::optional<std::size_t> first_beyond;
    for (std::size_t i = 0; i < span.size(); ++i) {
      if (span[i].cycle >= horizon) {
        if (!first_beyond) first_beyond = i;
        continue;
      }
      if (!first_false && !truth(*span[i].expr, span[i].cycle)) first_false = i;
    }
    Verdict v;
    std::size_t last_seen;
    if (first_false && (!first_beyond || *first_false < *first_beyond)) {
      v.decided = span[*first_false].cycle;
      v.outcome = (span[*first_false].antecedent && p_.implication) ? Outcome::Vacuous : Outcome::Failure;
      last_seen = v.decided;
    } else if (first_beyond) {
      v.decided = horizon;
      v.outcome = Outcome::Incomplete;
      last_seen = horizon - 1;
    } else {
      v.decided = span.back().cycle;
      v.outcome = Outcome::Success;
      last_seen = v.decided;
    }
    if (p_.disable_iff && start < horizon) {
      for (std::size_t c = start; c <= last_seen && c < horizon; ++c)
        if (truth(*p_.disable_iff, c)) {
          v.outcome = Outcome::Disabled;
          break;
        }
    }
    return v;
  }

 private:
  bool truth(const BoolExpr &e, std::size_t t) const { return value(e, t, nullptr) != 0; }

  // `alphabet` names the enum signal an identifier is compared against.
  std::int64_t value(const BoolExpr &e, std::size_t t, const SignalInfo *alphabet) const {
    switch (e->kind) {
      case ExprNode::Kind::Const: return e->value;
      case ExprNode::Kind::Ident: {
        if (auto i = trace_.find(e->name)) return static_cast<std::int64_t>(trace_.value(*i, t));
        auto in = [&](const SignalInfo &s) -> std::optional<std::int64_t> {
          for (std::size_t k = 0; k < s.enumerants.size(); ++k)
            if (s.enumerants[k] == e->name) return static_cast<std::int64_t>(k);
          return std::nullopt;
        };
        if (alphabet) return in(*alphabet).value();
        for (const auto &s : trace_.signals())
          if (auto v = in(s)) return *v;
        throw std::runtime_error("oracle: unknown name " + e->name);
      }
      case ExprNode::Kind::Stable: {
        const auto i = trace_.index_of(e->name);
        return t == 0 || trace_.value(i, t) == trace_.value(i, t - 1);
      }
      case ExprNode::Kind::Not: return value(e->lhs, t, nullptr) == 0;
      case ExprNode::Kind::And: return value(e->lhs, t, nullptr) != 0 && value(e->rhs, t, nullptr) != 0;
      case ExprNode::Kind::Or: return value(e->lhs, t, nullptr) != 0 || value(e->rhs, t, nullptr) != 0;
      case ExprNode::Kind::Eq:
      case ExprNode::Kind::Ne: {
        const SignalInfo *la = enum_of(e->lhs);
        const SignalInfo *ra = enum_of(e->rhs);
        const std::int64_t l = value(e->lhs, t, ra);
        const std::int64_t r = value(e->rhs, t, la);
        return e->kind == ExprNode::Kind::Eq ? l == r : l != r;
      }
    }
    return 0;
  }

  const SignalInfo *enum_of(const BoolExpr &e) const {
    if (e->kind != ExprNode::Kind::Ident) return nullptr;
    auto i = trace_.find(e->name);
    if (!i || !trace_.signals()[*i].is_enum()) return nullptr;
    return &trace_.signals()[*i];
  }

  const PropertyDef &p_;
  const SignalTrace &trace_;
};

}  // namespace oracle
