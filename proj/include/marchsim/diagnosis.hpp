#pragma once

// Fault syndromes from controller runs and algorithm-vs-fault capability
// matrices from generic March execution.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "marchsim/bist_sim.hpp"
#include "marchsim/fault_memory.hpp"
#include "marchsim/march.hpp"

namespace marchsim {

// F1..F5: mismatch seen in rup0, rdn1, rdn0, rup1, rdna0. F6: the rdn0
// mismatch depends on the pause (present with it, absent when it is skipped).
struct Syndrome {
  std::array<bool, 6> f{};

  std::string bits() const;  // "010100"
  static Syndrome from_bits(std::string_view bits);
  friend bool operator==(const Syndrome &, const Syndrome &) = default;
};

// Read-pass flags are ORed over the all-zero and all-one power-up
// backgrounds, since the controller never initializes memory before its first
// write pass. `config.power_up` and `config.fast_forward_pause` are ignored.
Syndrome syndrome(const BistConfig &config, const FaultSpec &fault);

// Runs `alg` against a fault-injected memory (power-up content 0) and reports
// whether any read differs from the fault-free expectation. Each access takes
// one cycle; pauses advance time without access.
bool detects(const MarchAlgorithm &alg, const FaultSpec &fault, const MemoryConfig &config,
             const ExpandOptions &options = {});

// ---------------------------------------------------------------------------
// Syndrome table

struct SyndromeRow {
  std::string label;  // "SAF(0)", "TF rise", "AF mapsto", "DRF complement", ...
  FaultClass fault_class = FaultClass::SAF;
  Syndrome expected;
  std::size_t instances = 0;
  std::size_t matching = 0;                    // instances whose syndrome equals `expected`
  std::array<std::size_t, 6> ones{};           // per-bit count of instances with the bit set
  std::map<std::string, std::size_t> patterns;  // observed syndrome -> instance count

  bool matches() const { return instances > 0 && matching == instances; }
  friend bool operator==(const SyndromeRow &, const SyndromeRow &) = default;
};

struct SyndromeOptions {
  unsigned workers = 1;
  std::size_t max_instances = 0;  // per row, 0 = all; larger sets are sampled at an even stride
  EnumerateOptions enumerate;
};

std::vector<SyndromeRow> syndrome_table(const BistConfig &config, const std::set<FaultClass> &classes,
                                        const SyndromeOptions &options = {});

// Rows whose fault class is SAF or TF and that do not match.
std::vector<std::string> strict_syndrome_mismatches(const std::vector<SyndromeRow> &rows);

std::string render_syndromes(const std::vector<SyndromeRow> &rows, bool compare);
std::string render_syndromes_json(const std::vector<SyndromeRow> &rows);

// ---------------------------------------------------------------------------
// Capability matrix

struct Capability {
  std::size_t detected = 0;
  std::size_t total = 0;

  bool all() const { return total > 0 && detected == total; }
  bool none() const { return detected == 0; }
  std::string label() const;  // "All", "Partial(k/m)", "None"
  friend bool operator==(const Capability &, const Capability &) = default;
};

struct CapabilityOptions {
  unsigned workers = 1;
  std::uint64_t max_cells = 64;  // enumeration guard
  EnumerateOptions enumerate;
  ExpandOptions expand;
};

struct CapabilityMatrix {
  std::vector<std::string> algorithms;
  std::vector<FaultClass> classes;
  std::vector<std::vector<Capability>> cells;  // [algorithm][class]
  MemoryConfig memory;

  friend bool operator==(const CapabilityMatrix &, const CapabilityMatrix &) = default;
};

// Throws Error(GuardExceeded) when the memory has more than max_cells cells.
CapabilityMatrix capability_matrix(const std::vector<MarchAlgorithm> &algs, const std::vector<FaultClass> &classes,
                                   const MemoryConfig &config, const CapabilityOptions &options = {});

struct CapabilityDiscrepancy {
  std::string algorithm;
  FaultClass fault_class;
  bool expected_all = false;
  Capability measured;
};

// Compares cells against the published expectations for mats+, march_c- and
// march_b (AF, SAF, TF, CFin, CFid, CFst columns). Other cells are ignored.
std::vector<CapabilityDiscrepancy> compare_capability(const CapabilityMatrix &matrix);

std::string render_capability(const CapabilityMatrix &matrix, bool compare);
std::string render_capability_json(const CapabilityMatrix &matrix);

}  // namespace marchsim
