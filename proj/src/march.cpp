#include "marchsim/march.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "marchsim/error.hpp"

namespace marchsim {

std::string_view to_string(MarchOp op) {
  switch (op) {
    case MarchOp::R0: return "r0";
    case MarchOp::R1: return "r1";
    case MarchOp::W0: return "w0";
    case MarchOp::W1: return "w1";
  }
  return "?";
}

namespace {

class NotationParser {
 public:
  explicit NotationParser(std::string_view text) : text_(text) {}

  std::vector<MarchElement> parse() {
    expect('{');
    std::vector<MarchElement> elements;
    skip_ws();
    if (peek() == '}') fail("empty element list");
    elements.push_back(element());
    while (true) {
      skip_ws();
      if (peek() == ';') {
        ++pos_;
        elements.push_back(element());
        continue;
      }
      break;
    }
    expect('}');
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after '}'");
    return elements;
  }

 private:
  [[noreturn]] void fail(const std::string &message) const {
    throw ParseError(pos_, message);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  MarchElement element() {
    skip_ws();
    std::size_t start = pos_;
    std::string_view head = word();
    if (head == "pause") {
      skip_ws();
      if (peek() != '(') return Pause{};
      ++pos_;
      skip_ws();
      std::size_t num_at = pos_;
      bool negative = false;
      if (peek() == '-') {
        negative = true;
        ++pos_;
      }
      std::string_view digits = word();
      std::uint64_t cycles = 0;
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cycles);
      if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
        pos_ = num_at;
        fail("expected pause cycle count");
      }
      if (negative || cycles == 0) {
        pos_ = num_at;
        fail("pause length must be positive");
      }
      expect(')');
      return Pause{cycles};
    }

    Marching m;
    if (head == "u") {
      m.direction = Direction::Up;
    } else if (head == "d") {
      m.direction = Direction::Down;
    } else if (head == "b") {
      m.direction = Direction::Either;
    } else {
      pos_ = start;
      fail(head.empty() ? "expected march element" : "unknown element '" + std::string(head) + "'");
    }
    expect('(');
    m.ops.push_back(op());
    while (true) {
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        m.ops.push_back(op());
        continue;
      }
      break;
    }
    expect(')');
    return m;
  }

  MarchOp op() {
    skip_ws();
    std::size_t start = pos_;
    std::string_view token = word();
    if (token == "r0") return MarchOp::R0;
    if (token == "r1") return MarchOp::R1;
    if (token == "w0") return MarchOp::W0;
    if (token == "w1") return MarchOp::W1;
    pos_ = start;
    fail(token.empty() ? "expected operation" : "unknown operation '" + std::string(token) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

char direction_letter(Direction d) {
  switch (d) {
    case Direction::Up: return 'u';
    case Direction::Down: return 'd';
    case Direction::Either: return 'b';
  }
  return 'b';
}

struct BuiltinEntry {
  std::string_view name;
  std::string_view notation;
};

// Table rows use `b` for the initializing element whose order is free.
constexpr std::array<BuiltinEntry, 11> kBuiltins{{
    {"mats+", "{ b(w0); u(r0,w1); d(r1,w0) }"},
    {"mats++", "{ b(w0); u(r0,w1); d(r1,w0,r0) }"},
    {"march_x", "{ b(w0); u(r0,w1); d(r1,w0); d(r0) }"},
    {"march_c-", "{ b(w0); u(r0,w1); u(r1,w0); d(r0,w1); d(r1,w0); d(r0) }"},
    {"march_a", "{ b(w0); u(r0,w1,w0,w1); u(r1,w0,w1); d(r1,w0,w1,w0); d(r0,w1,w0) }"},
    {"march_b", "{ b(w0); u(r0,w1,r1,w0,r0,w1); u(r1,w0,w1); d(r1,w0,w1,w0); d(r0,w1,w0) }"},
    {"march_sr", "{ b(w0); u(r0,w1,r1,w0); d(r0,r0); u(w1); d(r1,w0,r0,w1); u(r1,r1) }"},
    {"march_ss",
     "{ b(w0); u(r0,r0,w0,r0,w1); u(r1,r1,w1,r1,w0); d(r0,r0,w0,r0,w1); d(r1,r1,w1,r1,w0); d(r0) }"},
    {"march_diag", "{ b(w0); u(r0,w1); b(w1,r1); d(r1,w0,r0); b(w0,r0) }"},
    {"march_c_pause", "{ b(w0); u(r0,w1); u(r1,w0); pause; d(r0,w1); d(r1,w0); d(r0) }"},
    // One op per pass, in the order the FSM controller walks its states.
    {"march_c_fsm",
     "{ d(w0); u(r0); u(w1); d(r1); d(w0); pause; d(r0); d(w1); u(r1); u(w0); d(r0) }"},
}};

std::array<std::string_view, kBuiltins.size()> make_names() {
  std::array<std::string_view, kBuiltins.size()> names{};
  std::transform(kBuiltins.begin(), kBuiltins.end(), names.begin(),
                 [](const BuiltinEntry &e) { return e.name; });
  return names;
}

}  // namespace

MarchAlgorithm parse_march(std::string_view text, std::string name) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (static_cast<unsigned char>(text[i]) > 0x7f) throw ParseError(i, "non-ASCII character");
  }
  return MarchAlgorithm{std::move(name), NotationParser(text).parse()};
}

std::string format_march(const MarchAlgorithm &alg) {
  std::string out = "{ ";
  bool first = true;
  for (const auto &element : alg.elements) {
    if (!first) out += "; ";
    first = false;
    if (const auto *p = std::get_if<Pause>(&element)) {
      out += "pause";
      if (p->cycles) out += "(" + std::to_string(*p->cycles) + ")";
      continue;
    }
    const auto &m = std::get<Marching>(element);
    out += direction_letter(m.direction);
    out += '(';
    for (std::size_t i = 0; i < m.ops.size(); ++i) {
      if (i) out += ',';
      out += to_string(m.ops[i]);
    }
    out += ')';
  }
  out += " }";
  return out;
}

std::size_t op_count(const MarchAlgorithm &alg) {
  std::size_t total = 0;
  for (const auto &element : alg.elements) {
    if (const auto *m = std::get_if<Marching>(&element)) total += m->ops.size();
  }
  return total;
}

std::span<const std::string_view> builtin_names() {
  static const auto names = make_names();
  return names;
}

MarchAlgorithm builtin(std::string_view name) {
  for (const auto &entry : kBuiltins) {
    if (entry.name == name) return parse_march(entry.notation, std::string(entry.name));
  }
  std::string valid;
  for (const auto &entry : kBuiltins) {
    if (!valid.empty()) valid += ", ";
    valid += entry.name;
  }
  throw Error(ErrorKind::UnknownName,
              "unknown algorithm '" + std::string(name) + "'; valid names: " + valid);
}

std::vector<ExpandedStep> expand(const MarchAlgorithm &alg, std::uint64_t words,
                                 const ExpandOptions &options) {
  if (words == 0) throw Error(ErrorKind::InvalidArgument, "expand: memory must have at least one word");
  const std::uint64_t default_pause = options.pause_cycles ? options.pause_cycles : words;

  std::vector<ExpandedStep> steps;
  steps.reserve(op_count(alg) * words + alg.elements.size());
  for (const auto &element : alg.elements) {
    if (const auto *p = std::get_if<Pause>(&element)) {
      steps.emplace_back(PauseMarker{p->cycles.value_or(default_pause)});
      continue;
    }
    const auto &m = std::get<Marching>(element);
    Direction dir = m.direction == Direction::Either ? options.either_as : m.direction;
    for (std::uint64_t i = 0; i < words; ++i) {
      std::uint64_t addr = dir == Direction::Down ? words - 1 - i : i;
      for (MarchOp op : m.ops) steps.emplace_back(Access{addr, op});
    }
  }
  return steps;
}

}  // namespace marchsim
