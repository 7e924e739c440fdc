#pragma once

// March test algorithms: representation, notation parsing/printing, the
// built-in registry, and expansion into concrete memory accesses.
//
// Notation (ASCII): `{ u(r0,w1); d(r1,w0); b(w0); pause(256) }`
//   u = ascending addresses, d = descending, b = either order,
//   pause or pause(N) = N idle cycles (N defaults to the address span).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace marchsim {

enum class MarchOp : std::uint8_t { R0, R1, W0, W1 };

constexpr bool is_read(MarchOp op) { return op == MarchOp::R0 || op == MarchOp::R1; }
constexpr bool is_write(MarchOp op) { return !is_read(op); }
// Expected bit for reads, written bit for writes.
constexpr int op_value(MarchOp op) { return (op == MarchOp::R1 || op == MarchOp::W1) ? 1 : 0; }
std::string_view to_string(MarchOp op);

enum class Direction : std::uint8_t { Up, Down, Either };

struct Marching {
  Direction direction = Direction::Either;
  std::vector<MarchOp> ops;

  friend bool operator==(const Marching &, const Marching &) = default;
};

struct Pause {
  // Unset means "use the expansion default" (the address span).
  std::optional<std::uint64_t> cycles;

  friend bool operator==(const Pause &, const Pause &) = default;
};

using MarchElement = std::variant<Marching, Pause>;

struct MarchAlgorithm {
  std::string name;
  std::vector<MarchElement> elements;

  // Structural equality ignores the name.
  bool same_structure(const MarchAlgorithm &other) const {
    return elements == other.elements;
  }
};

MarchAlgorithm parse_march(std::string_view text, std::string name = {});
std::string format_march(const MarchAlgorithm &alg);

// Memory operations per cell: the coefficient of n in the test time.
std::size_t op_count(const MarchAlgorithm &alg);

MarchAlgorithm builtin(std::string_view name);
std::span<const std::string_view> builtin_names();

// One step of an expanded March run.
struct Access {
  std::uint64_t address = 0;
  MarchOp op = MarchOp::R0;

  friend bool operator==(const Access &, const Access &) = default;
};

struct PauseMarker {
  std::uint64_t cycles = 0;

  friend bool operator==(const PauseMarker &, const PauseMarker &) = default;
};

using ExpandedStep = std::variant<Access, PauseMarker>;

struct ExpandOptions {
  // Order used for `b` elements.
  Direction either_as = Direction::Up;
  // Pause length for elements without explicit cycles; 0 means n.
  std::uint64_t pause_cycles = 0;
};

std::vector<ExpandedStep> expand(const MarchAlgorithm &alg, std::uint64_t words,
                                 const ExpandOptions &options = {});

}  // namespace marchsim
