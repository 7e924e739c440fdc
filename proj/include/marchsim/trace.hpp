#pragma once

// Per-cycle record of named signals, plus VCD and CSV codecs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace marchsim {

struct SignalInfo {
  std::string name;
  unsigned width = 1;
  // Value labels for enumerated signals (value i is enumerants[i]).
  std::vector<std::string> enumerants;

  bool is_enum() const { return !enumerants.empty(); }
  friend bool operator==(const SignalInfo &, const SignalInfo &) = default;
};

class SignalTrace {
 public:
  SignalTrace() = default;
  explicit SignalTrace(std::vector<SignalInfo> signals);

  const std::vector<SignalInfo> &signals() const { return signals_; }
  std::size_t signal_count() const { return signals_.size(); }
  std::size_t length() const { return length_; }
  bool empty() const { return length_ == 0; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error(UnknownName) when absent.
  std::size_t index_of(std::string_view name) const;

  std::uint64_t value(std::size_t signal, std::size_t cycle) const { return columns_[signal][cycle]; }
  std::span<const std::uint64_t> column(std::size_t signal) const { return columns_[signal]; }

  // Appends one cycle; `row` holds one value per signal in declaration order.
  void append(std::span<const std::uint64_t> row);
  void truncate(std::size_t cycles);

  // Free-form key/value metadata (configuration echo).
  std::map<std::string, std::string> &meta() { return meta_; }
  const std::map<std::string, std::string> &meta() const { return meta_; }

  friend bool operator==(const SignalTrace &, const SignalTrace &) = default;

 private:
  std::vector<SignalInfo> signals_;
  std::vector<std::vector<std::uint64_t>> columns_;
  std::size_t length_ = 0;
  std::map<std::string, std::string> meta_;
};

// Value-change dump, one time unit (1ns) per cycle.
std::string write_vcd(const SignalTrace &trace, std::string_view scope = "mbist");
SignalTrace read_vcd(std::string_view text);

// CSV with a header of signal names; enumerated signals use their labels.
std::string write_csv(const SignalTrace &trace);
SignalTrace read_csv(std::string_view text);

// Loads .vcd or .csv by extension.
SignalTrace load_trace(const std::string &path);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

}  // namespace marchsim
