#include "marchsim/fault_memory.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "marchsim/error.hpp"

namespace marchsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_cell(const BitAddress &cell, const MemoryConfig &config, const char *what) {
  if (cell.word >= config.words || cell.bit >= config.width)
    throw Error(ErrorKind::OutOfRange, std::string(what) + " cell (" + std::to_string(cell.word) + "," +
                                           std::to_string(cell.bit) + ") outside " +
                                           std::to_string(config.words) + "x" + std::to_string(config.width) +
                                           " memory");
}

bool crosses(Edge edge, int before, int after) {
  if (before == after) return false;
  switch (edge) {
    case Edge::Rising: return before == 0;
    case Edge::Falling: return before == 1;
    case Edge::Any: return true;
  }
  return false;
}

std::string_view edge_name(Edge e) {
  switch (e) {
    case Edge::Rising: return "rise";
    case Edge::Falling: return "fall";
    case Edge::Any: return "any";
  }
  return "any";
}

std::string_view decay_name(Decay d) {
  switch (d) {
    case Decay::ToZero: return "zero";
    case Decay::ToOne: return "one";
    case Decay::Complement: return "complement";
  }
  return "complement";
}

class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {
    std::istringstream in{std::string(text)};
    std::string t;
    while (in >> t) items_.push_back(t);
  }

  bool done() const { return next_ >= items_.size(); }

  std::string word(const char *what) {
    if (done()) fail(std::string("missing ") + what);
    return items_[next_++];
  }

  std::uint64_t number(const char *what) {
    std::string t = word(what);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size()) fail(std::string("bad ") + what + " '" + t + "'");
    return v;
  }

  int bit(const char *what) {
    std::uint64_t v = number(what);
    if (v > 1) fail(std::string(what) + " must be 0 or 1");
    return static_cast<int>(v);
  }

  BitAddress cell(const char *what) {
    BitAddress c;
    c.word = number(what);
    std::uint64_t b = number(what);
    if (b >= kMaxWidth) fail(std::string(what) + " bit index too large");
    c.bit = static_cast<unsigned>(b);
    return c;
  }

  Edge edge(bool allow_any) {
    std::string t = word("edge");
    if (t == "rise" || t == "rising" || t == "up") return Edge::Rising;
    if (t == "fall" || t == "falling" || t == "down") return Edge::Falling;
    if (allow_any && t == "any") return Edge::Any;
    fail("bad edge '" + t + "'");
  }

  void finish() {
    if (!done()) fail("unexpected token '" + items_[next_] + "'");
  }

  [[noreturn]] void fail(const std::string &message) const {
    throw Error(ErrorKind::Parse, "fault '" + std::string(text_) + "': " + message);
  }

 private:
  std::string_view text_;
  std::vector<std::string> items_;
  std::size_t next_ = 0;
};

}  // namespace

void MemoryConfig::validate() const {
  if (words == 0) throw Error(ErrorKind::InvalidArgument, "memory must have at least one word");
  if (width == 0 || width > kMaxWidth)
    throw Error(ErrorKind::InvalidArgument, "word width must be in 1..64, got " + std::to_string(width));
  if (words > kMaxCells / width)
    throw Error(ErrorKind::InvalidArgument, "memory exceeds " + std::to_string(kMaxCells) + " cells");
}

void validate_fault(const FaultSpec &fault, const MemoryConfig &config) {
  std::visit(Overloaded{
                 [&](const StuckAt &f) {
                   check_cell(f.cell, config, "stuck-at");
                   if (f.value != 0 && f.value != 1)
                     throw Error(ErrorKind::InvalidArgument, "stuck-at value must be 0 or 1");
                 },
                 [&](const Transition &f) {
                   check_cell(f.cell, config, "transition");
                   if (f.blocked == Edge::Any)
                     throw Error(ErrorKind::InvalidArgument, "transition fault must block rise or fall");
                 },
                 [&](const AddressFault &f) {
                   if (f.addr >= config.words)
                     throw Error(ErrorKind::OutOfRange, "address fault address out of range");
                   if (f.kind != AddressFault::Kind::NoAccess) {
                     if (f.other >= config.words)
                       throw Error(ErrorKind::OutOfRange, "address fault target out of range");
                     if (f.other == f.addr)
                       throw Error(ErrorKind::InvalidArgument, "address fault target equals its address");
                   }
                 },
                 [&](const Coupling &f) {
                   check_cell(f.aggressor, config, "aggressor");
                   check_cell(f.victim, config, "victim");
                   if (f.aggressor == f.victim)
                     throw Error(ErrorKind::InvalidArgument, "coupling aggressor equals victim");
                   if (f.forced < 0 || f.forced > 1 || f.aggressor_value < 0 || f.aggressor_value > 1)
                     throw Error(ErrorKind::InvalidArgument, "coupling values must be 0 or 1");
                 },
                 [&](const Retention &f) {
                   check_cell(f.cell, config, "retention");
                   if (f.limit_cycles == 0)
                     throw Error(ErrorKind::InvalidArgument, "retention limit must be positive");
                 },
             },
             fault);
}

FaultSpec parse_fault(std::string_view text) {
  Tokens t(text);
  std::string cls = t.word("fault class");
  FaultSpec out;
  if (cls == "saf") {
    StuckAt f;
    f.cell = t.cell("cell");
    f.value = t.bit("value");
    out = f;
  } else if (cls == "tf") {
    Transition f;
    f.cell = t.cell("cell");
    f.blocked = t.edge(false);
    out = f;
  } else if (cls == "af") {
    AddressFault f;
    std::string kind = t.word("address fault kind");
    if (kind == "noaccess") {
      f.kind = AddressFault::Kind::NoAccess;
      f.addr = t.number("address");
    } else if (kind == "mapsto" || kind == "also") {
      f.kind = kind == "mapsto" ? AddressFault::Kind::MapsTo : AddressFault::Kind::AlsoAccesses;
      f.addr = t.number("address");
      f.other = t.number("other address");
    } else {
      t.fail("unknown address fault kind '" + kind + "'");
    }
    out = f;
  } else if (cls == "cfin" || cls == "cfid" || cls == "cfst") {
    Coupling f;
    f.aggressor = t.cell("aggressor");
    f.victim = t.cell("victim");
    if (cls == "cfin") {
      f.kind = Coupling::Kind::Inversion;
      f.trigger = t.edge(true);
    } else if (cls == "cfid") {
      f.kind = Coupling::Kind::Idempotent;
      f.trigger = t.edge(true);
      f.forced = t.bit("forced value");
    } else {
      f.kind = Coupling::Kind::State;
      f.aggressor_value = t.bit("aggressor value");
      f.forced = t.bit("forced value");
    }
    out = f;
  } else if (cls == "drf") {
    Retention f;
    f.cell = t.cell("cell");
    f.limit_cycles = t.number("retention limit");
    if (f.limit_cycles == 0) t.fail("retention limit must be positive");
    std::string decay = t.word("decay mode");
    if (decay == "zero") {
      f.decay = Decay::ToZero;
    } else if (decay == "one") {
      f.decay = Decay::ToOne;
    } else if (decay == "complement") {
      f.decay = Decay::Complement;
    } else {
      t.fail("unknown decay mode '" + decay + "'");
    }
    out = f;
  } else {
    t.fail("unknown fault class '" + cls + "'");
  }
  t.finish();
  return out;
}

std::string format_fault(const FaultSpec &fault) {
  std::ostringstream out;
  auto cell = [&](const BitAddress &c) { out << ' ' << c.word << ' ' << c.bit; };
  std::visit(Overloaded{
                 [&](const StuckAt &f) {
                   out << "saf";
                   cell(f.cell);
                   out << ' ' << f.value;
                 },
                 [&](const Transition &f) {
                   out << "tf";
                   cell(f.cell);
                   out << ' ' << edge_name(f.blocked);
                 },
                 [&](const AddressFault &f) {
                   switch (f.kind) {
                     case AddressFault::Kind::NoAccess: out << "af noaccess " << f.addr; break;
                     case AddressFault::Kind::MapsTo: out << "af mapsto " << f.addr << ' ' << f.other; break;
                     case AddressFault::Kind::AlsoAccesses: out << "af also " << f.addr << ' ' << f.other; break;
                   }
                 },
                 [&](const Coupling &f) {
                   switch (f.kind) {
                     case Coupling::Kind::Inversion: out << "cfin"; break;
                     case Coupling::Kind::Idempotent: out << "cfid"; break;
                     case Coupling::Kind::State: out << "cfst"; break;
                   }
                   cell(f.aggressor);
                   cell(f.victim);
                   if (f.kind == Coupling::Kind::State) {
                     out << ' ' << f.aggressor_value << ' ' << f.forced;
                   } else {
                     out << ' ' << edge_name(f.trigger);
                     if (f.kind == Coupling::Kind::Idempotent) out << ' ' << f.forced;
                   }
                 },
                 [&](const Retention &f) {
                   out << "drf";
                   cell(f.cell);
                   out << ' ' << f.limit_cycles << ' ' << decay_name(f.decay);
                 },
             },
             fault);
  return out.str();
}

FaultMemory::FaultMemory(MemoryConfig config) : config_(config) {
  config_.validate();
  rows_.assign(config_.words, 0);
  intended_.assign(config_.words, 0);
  last_write_.assign(config_.words, 0);
}

void FaultMemory::check_addr(std::uint64_t addr) const {
  if (addr >= config_.words)
    throw Error(ErrorKind::OutOfRange,
                "address " + std::to_string(addr) + " outside memory of " + std::to_string(config_.words) + " words");
}

void FaultMemory::inject(const FaultSpec &fault) {
  validate_fault(fault, config_);
  faults_.push_back(fault);
  if (const auto *r = std::get_if<Retention>(&fault)) retention_.push_back({*r, false});
  pin_stuck_cells();
}

void FaultMemory::clear_faults() {
  faults_.clear();
  retention_.clear();
}

void FaultMemory::fill(Word value, std::uint64_t cycle) {
  std::fill(rows_.begin(), rows_.end(), value & config_.mask());
  std::fill(intended_.begin(), intended_.end(), value & config_.mask());
  std::fill(last_write_.begin(), last_write_.end(), cycle);
  for (auto &r : retention_) r.decayed = false;
  pin_stuck_cells();
}

Word FaultMemory::stored(std::uint64_t addr) const {
  check_addr(addr);
  return rows_[addr];
}

int FaultMemory::raw_bit(const BitAddress &cell) const {
  return static_cast<int>((rows_[cell.word] >> cell.bit) & 1U);
}

void FaultMemory::set_raw_bit(const BitAddress &cell, int value) {
  const Word m = Word{1} << cell.bit;
  rows_[cell.word] = value ? (rows_[cell.word] | m) : (rows_[cell.word] & ~m);
}

void FaultMemory::pin_stuck_cells() {
  for (const auto &f : faults_) {
    if (const auto *s = std::get_if<StuckAt>(&f)) set_raw_bit(s->cell, s->value);
  }
}

// Applies retention decay that has become due by `cycle`.
void FaultMemory::settle(std::uint64_t cycle) {
  for (auto &r : retention_) {
    if (r.decayed) continue;
    const auto &cell = r.fault.cell;
    if (cycle - last_write_[cell.word] <= r.fault.limit_cycles || cycle < last_write_[cell.word]) continue;
    switch (r.fault.decay) {
      case Decay::ToZero: set_raw_bit(cell, 0); break;
      case Decay::ToOne: set_raw_bit(cell, 1); break;
      case Decay::Complement: set_raw_bit(cell, raw_bit(cell) ^ 1); break;
    }
    r.decayed = true;
  }
  pin_stuck_cells();
}

int FaultMemory::cell_value(const BitAddress &cell) const {
  int v = raw_bit(cell);
  for (const auto &f : faults_) {
    if (const auto *c = std::get_if<Coupling>(&f)) {
      if (c->kind == Coupling::Kind::State && c->victim == cell && raw_bit(c->aggressor) == c->aggressor_value)
        v = c->forced;
    }
  }
  for (const auto &f : faults_) {
    if (const auto *s = std::get_if<StuckAt>(&f); s && s->cell == cell) v = s->value;
  }
  return v;
}

void FaultMemory::write(std::uint64_t addr, Word data, std::uint64_t cycle) {
  check_addr(addr);
  settle(cycle);
  data &= config_.mask();
  intended_[addr] = data;

  std::vector<std::uint64_t> targets{addr};
  for (const auto &f : faults_) {
    const auto *a = std::get_if<AddressFault>(&f);
    if (!a || a->addr != addr) continue;
    switch (a->kind) {
      case AddressFault::Kind::NoAccess: targets.clear(); break;
      case AddressFault::Kind::MapsTo: targets = {a->other}; break;
      case AddressFault::Kind::AlsoAccesses: targets = {addr, a->other}; break;
    }
  }

  for (std::uint64_t row : targets) {
    const Word before = rows_[row];
    Word after = data;
    for (const auto &f : faults_) {
      const auto *t = std::get_if<Transition>(&f);
      if (!t || t->cell.word != row) continue;
      const int old_bit = static_cast<int>((before >> t->cell.bit) & 1U);
      const int new_bit = static_cast<int>((after >> t->cell.bit) & 1U);
      if (crosses(t->blocked, old_bit, new_bit)) {
        const Word m = Word{1} << t->cell.bit;
        after = old_bit ? (after | m) : (after & ~m);
      }
    }
    rows_[row] = after;
    pin_stuck_cells();
    last_write_[row] = cycle;
    for (auto &r : retention_) {
      if (r.fault.cell.word == row) r.decayed = false;
    }

    // Write-triggered coupling: compare the aggressor before and after.
    for (const auto &f : faults_) {
      const auto *c = std::get_if<Coupling>(&f);
      if (!c || c->kind == Coupling::Kind::State || c->aggressor.word != row) continue;
      const int old_bit = static_cast<int>((before >> c->aggressor.bit) & 1U);
      const int new_bit = raw_bit(c->aggressor);
      if (!crosses(c->trigger, old_bit, new_bit)) continue;
      if (c->kind == Coupling::Kind::Inversion) {
        set_raw_bit(c->victim, raw_bit(c->victim) ^ 1);
      } else {
        set_raw_bit(c->victim, c->forced);
      }
    }
    pin_stuck_cells();
  }
}

Word FaultMemory::read(std::uint64_t addr, std::uint64_t cycle) {
  check_addr(addr);
  settle(cycle);

  auto row_value = [&](std::uint64_t row) {
    Word w = 0;
    for (unsigned b = 0; b < config_.width; ++b) {
      if (cell_value({row, b})) w |= Word{1} << b;
    }
    return w;
  };

  const AddressFault *decoder = nullptr;
  for (const auto &f : faults_) {
    if (const auto *a = std::get_if<AddressFault>(&f); a && a->addr == addr) decoder = a;
  }
  if (!decoder) return row_value(addr);
  switch (decoder->kind) {
    case AddressFault::Kind::NoAccess:
      // Floating bit-lines: pessimistically the complement of what a
      // defect-free decoder would have returned.
      return ~intended_[addr] & config_.mask();
    case AddressFault::Kind::MapsTo:
      return row_value(decoder->other);
    case AddressFault::Kind::AlsoAccesses: {
      const Word own = row_value(addr);
      const Word other = row_value(decoder->other);
      const Word disagree = own ^ other;
      return ((own & ~disagree) | (~own & disagree)) & config_.mask();
    }
  }
  return row_value(addr);
}

std::string_view to_string(FaultClass c) {
  switch (c) {
    case FaultClass::SAF: return "saf";
    case FaultClass::TF: return "tf";
    case FaultClass::AF: return "af";
    case FaultClass::AFNoAccess: return "af_noaccess";
    case FaultClass::AFMapsTo: return "af_mapsto";
    case FaultClass::AFAlsoAccesses: return "af_also";
    case FaultClass::CFin: return "cfin";
    case FaultClass::CFinAny: return "cfin_any";
    case FaultClass::CFid: return "cfid";
    case FaultClass::CFst: return "cfst";
    case FaultClass::DRF: return "drf";
  }
  return "?";
}

FaultClass parse_fault_class(std::string_view text) {
  for (auto c : {FaultClass::SAF, FaultClass::TF, FaultClass::AF, FaultClass::AFNoAccess, FaultClass::AFMapsTo,
                 FaultClass::AFAlsoAccesses, FaultClass::CFin, FaultClass::CFinAny, FaultClass::CFid,
                 FaultClass::CFst, FaultClass::DRF}) {
    if (to_string(c) == text) return c;
  }
  throw Error(ErrorKind::UnknownName,
              "unknown fault class '" + std::string(text) +
                  "'; valid: saf, tf, af, af_noaccess, af_mapsto, af_also, cfin, cfin_any, cfid, cfst, drf");
}

std::vector<FaultSpec> enumerate_faults(const MemoryConfig &config, const std::set<FaultClass> &classes,
                                        const EnumerateOptions &options) {
  config.validate();
  std::vector<FaultSpec> out;
  const std::uint64_t cells = config.cells();
  auto cell_at = [&](std::uint64_t i) { return BitAddress{i / config.width, static_cast<unsigned>(i % config.width)}; };
  const std::uint64_t reach = options.neighborhood ? options.neighborhood : (cells <= 64 ? cells : 1);

  auto each_pair = [&](auto &&emit) {
    for (std::uint64_t a = 0; a < cells; ++a) {
      const std::uint64_t lo = a >= reach ? a - reach : 0;
      const std::uint64_t hi = std::min(cells - 1, a + reach);
      for (std::uint64_t v = lo; v <= hi; ++v) {
        if (v != a) emit(cell_at(a), cell_at(v));
      }
    }
  };

  auto address_faults = [&](AddressFault::Kind kind) {
    for (std::uint64_t a = 0; a < config.words; ++a) {
      if (kind == AddressFault::Kind::NoAccess) {
        out.emplace_back(AddressFault{kind, a, 0});
        continue;
      }
      for (std::uint64_t o = 0; o < config.words; ++o) {
        if (o != a) out.emplace_back(AddressFault{kind, a, o});
      }
    }
  };

  for (FaultClass cls : classes) {
    switch (cls) {
      case FaultClass::SAF:
        for (std::uint64_t i = 0; i < cells; ++i)
          for (int v : {0, 1}) out.emplace_back(StuckAt{cell_at(i), v});
        break;
      case FaultClass::TF:
        for (std::uint64_t i = 0; i < cells; ++i)
          for (Edge e : {Edge::Rising, Edge::Falling}) out.emplace_back(Transition{cell_at(i), e});
        break;
      case FaultClass::AF:
        address_faults(AddressFault::Kind::NoAccess);
        address_faults(AddressFault::Kind::MapsTo);
        address_faults(AddressFault::Kind::AlsoAccesses);
        break;
      case FaultClass::AFNoAccess: address_faults(AddressFault::Kind::NoAccess); break;
      case FaultClass::AFMapsTo: address_faults(AddressFault::Kind::MapsTo); break;
      case FaultClass::AFAlsoAccesses: address_faults(AddressFault::Kind::AlsoAccesses); break;
      case FaultClass::CFin:
      case FaultClass::CFinAny:
        each_pair([&](BitAddress a, BitAddress v) {
          if (cls == FaultClass::CFinAny) {
            out.emplace_back(Coupling{Coupling::Kind::Inversion, Edge::Any, 0, 0, a, v});
            return;
          }
          for (Edge e : {Edge::Rising, Edge::Falling})
            out.emplace_back(Coupling{Coupling::Kind::Inversion, e, 0, 0, a, v});
        });
        break;
      case FaultClass::CFid:
        each_pair([&](BitAddress a, BitAddress v) {
          for (Edge e : {Edge::Rising, Edge::Falling})
            for (int forced : {0, 1}) out.emplace_back(Coupling{Coupling::Kind::Idempotent, e, 0, forced, a, v});
        });
        break;
      case FaultClass::CFst:
        each_pair([&](BitAddress a, BitAddress v) {
          for (int av : {0, 1})
            for (int forced : {0, 1}) out.emplace_back(Coupling{Coupling::Kind::State, Edge::Any, av, forced, a, v});
        });
        break;
      case FaultClass::DRF:
        for (std::uint64_t i = 0; i < cells; ++i)
          for (Decay d : {Decay::ToZero, Decay::ToOne, Decay::Complement})
            out.emplace_back(Retention{cell_at(i), options.drf_limit, d});
        break;
    }
  }
  return out;
}

}  // namespace marchsim
