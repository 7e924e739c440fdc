#pragma once

// Bit-accurate SRAM model with injectable faults.
//
// A memory is `words` rows of `width` single-bit cells (width <= 64). Time is
// passed explicitly to every access so the model stays a passive component of
// whatever drives it.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace marchsim {

using Word = std::uint64_t;

// Largest supported cell count (words * width).
inline constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 26;
inline constexpr unsigned kMaxWidth = 64;

struct MemoryConfig {
  std::uint64_t words = 0;
  unsigned width = 32;

  std::uint64_t cells() const { return words * width; }
  Word mask() const { return width >= 64 ? ~Word{0} : (Word{1} << width) - 1; }
  void validate() const;

  friend bool operator==(const MemoryConfig &, const MemoryConfig &) = default;
};

struct BitAddress {
  std::uint64_t word = 0;
  unsigned bit = 0;

  friend auto operator<=>(const BitAddress &, const BitAddress &) = default;
};

enum class Edge : std::uint8_t { Rising, Falling, Any };
enum class Decay : std::uint8_t { ToZero, ToOne, Complement };

struct StuckAt {
  BitAddress cell;
  int value = 0;
  friend bool operator==(const StuckAt &, const StuckAt &) = default;
};

// `blocked` names the write transition the cell cannot make.
struct Transition {
  BitAddress cell;
  Edge blocked = Edge::Rising;
  friend bool operator==(const Transition &, const Transition &) = default;
};

struct AddressFault {
  enum class Kind : std::uint8_t { NoAccess, MapsTo, AlsoAccesses };
  Kind kind = Kind::NoAccess;
  std::uint64_t addr = 0;
  std::uint64_t other = 0;  // unused for NoAccess
  friend bool operator==(const AddressFault &, const AddressFault &) = default;
};

struct Coupling {
  enum class Kind : std::uint8_t { Inversion, Idempotent, State };
  Kind kind = Kind::Inversion;
  Edge trigger = Edge::Any;  // Inversion, Idempotent
  int aggressor_value = 0;   // State
  int forced = 0;            // Idempotent, State
  BitAddress aggressor;
  BitAddress victim;
  friend bool operator==(const Coupling &, const Coupling &) = default;
};

struct Retention {
  BitAddress cell;
  std::uint64_t limit_cycles = 1;
  Decay decay = Decay::Complement;
  friend bool operator==(const Retention &, const Retention &) = default;
};

using FaultSpec = std::variant<StuckAt, Transition, AddressFault, Coupling, Retention>;

// Checks the spec against a memory geometry; throws Error on violation.
void validate_fault(const FaultSpec &fault, const MemoryConfig &config);

// Text form used by scenario files and the CLI, e.g. "saf 3 0 0",
// "tf 2 0 rise", "af mapsto 2 5", "cfin 0 0 1 0 rise", "cfid 0 0 1 0 fall 1",
// "cfst 0 0 1 0 1 0", "drf 1 0 64 complement".
FaultSpec parse_fault(std::string_view text);
std::string format_fault(const FaultSpec &fault);

class FaultMemory {
 public:
  explicit FaultMemory(MemoryConfig config);

  const MemoryConfig &config() const { return config_; }

  void inject(const FaultSpec &fault);
  void clear_faults();
  const std::vector<FaultSpec> &faults() const { return faults_; }

  // Fills every word with `value` (masked) without fault resolution; used to
  // model power-up content. Resets write timestamps to `cycle`.
  void fill(Word value, std::uint64_t cycle = 0);

  void write(std::uint64_t addr, Word data, std::uint64_t cycle);
  Word read(std::uint64_t addr, std::uint64_t cycle);

  // Raw stored row, bypassing read-path fault effects.
  Word stored(std::uint64_t addr) const;

 private:
  struct RetentionState {
    Retention fault;
    bool decayed = false;
  };

  void check_addr(std::uint64_t addr) const;
  void settle(std::uint64_t cycle);
  int cell_value(const BitAddress &cell) const;
  int raw_bit(const BitAddress &cell) const;
  void set_raw_bit(const BitAddress &cell, int value);
  void pin_stuck_cells();

  MemoryConfig config_;
  std::vector<Word> rows_;
  std::vector<Word> intended_;  // value each address would hold fault-free
  std::vector<std::uint64_t> last_write_;
  std::vector<FaultSpec> faults_;
  std::vector<RetentionState> retention_;
};

enum class FaultClass : std::uint8_t {
  SAF,
  TF,
  AF,  // all three decoder kinds
  AFNoAccess,
  AFMapsTo,
  AFAlsoAccesses,
  CFin,  // rising and falling triggers
  CFinAny,
  CFid,
  CFst,
  DRF,
};

std::string_view to_string(FaultClass c);
FaultClass parse_fault_class(std::string_view text);

struct EnumerateOptions {
  // Maximum distance between aggressor and victim linear cell indices for
  // coupling faults; 0 selects all pairs when cells <= 64, else adjacent cells.
  std::uint64_t neighborhood = 0;
  std::uint64_t drf_limit = 64;
};

std::vector<FaultSpec> enumerate_faults(const MemoryConfig &config,
                                        const std::set<FaultClass> &classes,
                                        const EnumerateOptions &options = {});

}  // namespace marchsim
