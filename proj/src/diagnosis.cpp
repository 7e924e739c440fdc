#include "marchsim/diagnosis.hpp"

#include <algorithm>
#include <iomanip>
#include "json.hpp"
#include <sstream>

#include "marchsim/error.hpp"
#include "marchsim/parallel.hpp"

namespace marchsim {

std::string Syndrome::bits() const {
  std::string out;
  for (bool b : f) out += b ? '1' : '0';
  return out;
}

Syndrome Syndrome::from_bits(std::string_view bits) {
  if (bits.size() != 6 || bits.find_first_not_of("01") != std::string_view::npos)
    throw Error(ErrorKind::InvalidArgument, "syndrome must be six 0/1 digits, got '" + std::string(bits) + "'");
  Syndrome s;
  for (std::size_t i = 0; i < 6; ++i) s.f[i] = bits[i] == '1';
  return s;
}

Syndrome syndrome(const BistConfig &config, const FaultSpec &fault) {
  validate_fault(fault, config.memory());
  const Scenario scenario = clean_scenario();
  const std::vector<FaultSpec> faults{fault};
  std::array<bool, 5> paused{};
  std::array<bool, 5> skipped{};
  for (Word background : {Word{0}, config.memory().mask()}) {
    BistConfig c = config;
    c.power_up = background;
    c.fast_forward_pause = false;
    const auto with_pause = read_pass_flags(run(c, faults, scenario).trace);
    c.fast_forward_pause = true;
    const auto without_pause = read_pass_flags(run(c, faults, scenario).trace);
    for (std::size_t i = 0; i < 5; ++i) {
      paused[i] = paused[i] || with_pause[i];
      skipped[i] = skipped[i] || without_pause[i];
    }
  }
  Syndrome s;
  for (std::size_t i = 0; i < 5; ++i) s.f[i] = paused[i];
  s.f[5] = paused[2] && !skipped[2];
  return s;
}

namespace {

bool detects_expanded(const std::vector<ExpandedStep> &steps, const FaultSpec &fault, const MemoryConfig &config) {
  FaultMemory memory(config);
  memory.fill(0, 0);
  memory.inject(fault);
  const Word ones = config.mask();
  std::uint64_t cycle = 0;
  for (const auto &step : steps) {
    if (const auto *pause = std::get_if<PauseMarker>(&step)) {
      cycle += pause->cycles;
      continue;
    }
    const auto &access = std::get<Access>(step);
    const Word data = op_value(access.op) ? ones : 0;
    if (is_write(access.op)) {
      memory.write(access.address, data, cycle);
    } else if (memory.read(access.address, cycle) != data) {
      return true;
    }
    ++cycle;
  }
  return false;
}

}  // namespace

bool detects(const MarchAlgorithm &alg, const FaultSpec &fault, const MemoryConfig &config,
             const ExpandOptions &options) {
  validate_fault(fault, config);
  return detects_expanded(expand(alg, config.words, options), fault, config);
}

// ---------------------------------------------------------------------------

namespace {

struct RowSpec {
  std::string label;
  FaultClass cls;
  const char *expected;
  bool (*select)(const FaultSpec &);
};

template <class T>
const T *as(const FaultSpec &f) {
  return std::get_if<T>(&f);
}

const std::vector<RowSpec> &row_specs() {
  static const std::vector<RowSpec> specs{
      {"SAF(0)", FaultClass::SAF, "010100", [](const FaultSpec &f) { return as<StuckAt>(f)->value == 0; }},
      {"SAF(1)", FaultClass::SAF, "101010", [](const FaultSpec &f) { return as<StuckAt>(f)->value == 1; }},
      {"TF rise", FaultClass::TF, "010100",
       [](const FaultSpec &f) { return as<Transition>(f)->blocked == Edge::Rising; }},
      {"TF fall", FaultClass::TF, "101010",
       [](const FaultSpec &f) { return as<Transition>(f)->blocked == Edge::Falling; }},
      {"AF noaccess", FaultClass::AFNoAccess, "111110", [](const FaultSpec &) { return true; }},
      {"AF mapsto", FaultClass::AFMapsTo, "111110", [](const FaultSpec &) { return true; }},
      {"AF also", FaultClass::AFAlsoAccesses, "111110", [](const FaultSpec &) { return true; }},
      {"CFin", FaultClass::CFin, "111110", [](const FaultSpec &) { return true; }},
      {"CFin any", FaultClass::CFinAny, "111110", [](const FaultSpec &) { return true; }},
      {"CFid", FaultClass::CFid, "111110", [](const FaultSpec &) { return true; }},
      {"CFst", FaultClass::CFst, "111110", [](const FaultSpec &) { return true; }},
      {"DRF zero", FaultClass::DRF, "111111",
       [](const FaultSpec &f) { return as<Retention>(f)->decay == Decay::ToZero; }},
      {"DRF one", FaultClass::DRF, "111111",
       [](const FaultSpec &f) { return as<Retention>(f)->decay == Decay::ToOne; }},
      {"DRF complement", FaultClass::DRF, "111111",
       [](const FaultSpec &f) { return as<Retention>(f)->decay == Decay::Complement; }},
  };
  return specs;
}

// Which rows a requested class selects; the umbrella AF class expands to its kinds.
bool wanted(const std::set<FaultClass> &classes, FaultClass row_class) {
  if (classes.count(row_class)) return true;
  const bool af_kind = row_class == FaultClass::AFNoAccess || row_class == FaultClass::AFMapsTo ||
                       row_class == FaultClass::AFAlsoAccesses;
  return af_kind && classes.count(FaultClass::AF);
}

std::vector<FaultSpec> sample(std::vector<FaultSpec> all, std::size_t max) {
  if (max == 0 || all.size() <= max) return all;
  std::vector<FaultSpec> out;
  out.reserve(max);
  // Even stride, always including the first and last instance.
  for (std::size_t i = 0; i < max; ++i) out.push_back(all[max == 1 ? 0 : i * (all.size() - 1) / (max - 1)]);
  return out;
}

}  // namespace

std::vector<SyndromeRow> syndrome_table(const BistConfig &config, const std::set<FaultClass> &classes,
                                        const SyndromeOptions &options) {
  config.validate();
  std::vector<SyndromeRow> rows;
  for (const auto &spec : row_specs()) {
    if (!wanted(classes, spec.cls)) continue;
    std::vector<FaultSpec> instances;
    for (auto &f : enumerate_faults(config.memory(), {spec.cls}, options.enumerate))
      if (spec.select(f)) instances.push_back(std::move(f));
    instances = sample(std::move(instances), options.max_instances);

    const auto results = parallel_map(instances.size(), options.workers,
                                      [&](std::size_t i) { return syndrome(config, instances[i]); });
    SyndromeRow row;
    row.label = spec.label;
    row.fault_class = spec.cls;
    row.expected = Syndrome::from_bits(spec.expected);
    row.instances = results.size();
    for (const auto &s : results) {
      row.matching += s == row.expected;
      for (std::size_t b = 0; b < 6; ++b) row.ones[b] += s.f[b];
      ++row.patterns[s.bits()];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> strict_syndrome_mismatches(const std::vector<SyndromeRow> &rows) {
  std::vector<std::string> out;
  for (const auto &r : rows) {
    if ((r.fault_class == FaultClass::SAF || r.fault_class == FaultClass::TF) && !r.matches()) out.push_back(r.label);
  }
  return out;
}

std::string render_syndromes(const std::vector<SyndromeRow> &rows, bool compare) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "FAULT" << "F1 F2 F3 F4 F5 F6" << std::right << std::setw(11) << "INSTANCES";
  if (compare) out << std::setw(10) << "EXPECTED" << std::setw(10) << "MATCH";
  out << '\n';
  for (const auto &r : rows) {
    out << std::left << std::setw(16) << r.label;
    for (std::size_t b = 0; b < 6; ++b) {
      // 1: every instance, 0: none, ~: some.
      const char c = r.ones[b] == 0 ? '0' : r.ones[b] == r.instances ? '1' : '~';
      out << ' ' << c << (b < 5 ? " " : "");
    }
    out << std::right << std::setw(11) << r.instances;
    if (compare)
      out << std::setw(10) << r.expected.bits() << std::setw(10)
          << (std::to_string(r.matching) + "/" + std::to_string(r.instances));
    out << '\n';
  }
  if (compare) {
    bool header = false;
    for (const auto &r : rows) {
      if (r.matches()) continue;
      if (!header) {
        out << "\nDiscrepancies (observed syndrome: instances)\n";
        header = true;
      }
      out << "  " << r.label << " expected " << r.expected.bits() << ":";
      for (const auto &[pattern, n] : r.patterns) out << ' ' << pattern << ':' << n;
      out << '\n';
    }
  }
  return out.str();
}

std::string render_syndromes_json(const std::vector<SyndromeRow> &rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto &r : rows) {
    nlohmann::ordered_json patterns = nlohmann::ordered_json::object();
    for (const auto &[pattern, n] : r.patterns) patterns[pattern] = n;
    doc.push_back({{"fault", r.label},
                   {"class", to_string(r.fault_class)},
                   {"expected", r.expected.bits()},
                   {"instances", r.instances},
                   {"matching", r.matching},
                   {"ones", r.ones},
                   {"patterns", patterns}});
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string Capability::label() const {
  if (all()) return "All";
  if (none()) return "None";
  return "Partial(" + std::to_string(detected) + "/" + std::to_string(total) + ")";
}

CapabilityMatrix capability_matrix(const std::vector<MarchAlgorithm> &algs, const std::vector<FaultClass> &classes,
                                   const MemoryConfig &config, const CapabilityOptions &options) {
  config.validate();
  if (config.cells() > options.max_cells)
    throw Error(ErrorKind::GuardExceeded, "capability sweep over " + std::to_string(config.cells()) +
                                              " cells exceeds the enumeration guard of " +
                                              std::to_string(options.max_cells));
  CapabilityMatrix m;
  m.memory = config;
  m.classes = classes;
  for (const auto &alg : algs) {
    m.algorithms.push_back(alg.name.empty() ? format_march(alg) : alg.name);
    const auto steps = expand(alg, config.words, options.expand);
    std::vector<Capability> row;
    for (FaultClass cls : classes) {
      const auto faults = enumerate_faults(config, {cls}, options.enumerate);
      // uint8_t rather than bool: results are written concurrently.
      const auto hits = parallel_map(faults.size(), options.workers, [&](std::size_t i) {
        return static_cast<std::uint8_t>(detects_expanded(steps, faults[i], config));
      });
      Capability c;
      c.total = faults.size();
      c.detected = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
      row.push_back(c);
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

namespace {

struct PublishedRow {
  const char *algorithm;
  std::array<bool, 6> all;  // AF, SAF, TF, CFin, CFid, CFst
};

constexpr std::array<FaultClass, 6> kPublishedColumns{FaultClass::AF,   FaultClass::SAF,  FaultClass::TF,
                                                      FaultClass::CFin, FaultClass::CFid, FaultClass::CFst};
constexpr std::array<PublishedRow, 3> kPublished{{
    {"mats+", {true, true, false, false, false, false}},
    {"march_c-", {true, true, true, true, true, true}},
    {"march_b", {true, true, true, true, true, true}},
}};

}  // namespace

std::vector<CapabilityDiscrepancy> compare_capability(const CapabilityMatrix &m) {
  std::vector<CapabilityDiscrepancy> out;
  for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
    for (const auto &row : kPublished) {
      if (m.algorithms[a] != row.algorithm) continue;
      for (std::size_t c = 0; c < m.classes.size(); ++c) {
        for (std::size_t k = 0; k < kPublishedColumns.size(); ++k) {
          if (kPublishedColumns[k] != m.classes[c]) continue;
          const auto &cell = m.cells[a][c];
          if (cell.all() != row.all[k]) out.push_back({m.algorithms[a], m.classes[c], row.all[k], cell});
        }
      }
    }
  }
  return out;
}

std::string render_capability(const CapabilityMatrix &m, bool compare) {
  std::ostringstream out;
  out << "Memory " << m.memory.words << "x" << m.memory.width << "\n\n";
  std::size_t name_w = 10;
  for (const auto &a : m.algorithms) name_w = std::max(name_w, a.size() + 2);
  std::vector<std::size_t> col_w;
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    std::size_t w = to_string(m.classes[c]).size();
    for (const auto &row : m.cells) w = std::max(w, row[c].label().size());
    col_w.push_back(w + 2);
  }
  out << std::left << std::setw(static_cast<int>(name_w)) << "ALGORITHM";
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    std::string head(to_string(m.classes[c]));
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char ch) { return std::toupper(ch); });
    out << std::setw(static_cast<int>(col_w[c])) << head;
  }
  out << '\n';
  for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
    out << std::setw(static_cast<int>(name_w)) << m.algorithms[a];
    for (std::size_t c = 0; c < m.classes.size(); ++c)
      out << std::setw(static_cast<int>(col_w[c])) << m.cells[a][c].label();
    out << '\n';
  }
  if (compare) {
    const auto diffs = compare_capability(m);
    out << "\nComparison with published coverage: " << (diffs.empty() ? "no discrepancies" : "discrepancies") << '\n';
    for (const auto &d : diffs)
      out << "  " << d.algorithm << ' ' << to_string(d.fault_class) << ": expected "
          << (d.expected_all ? "All" : "less than All") << ", measured " << d.measured.label() << '\n';
  }
  return out.str();
}

std::string render_capability_json(const CapabilityMatrix &m) {
  nlohmann::ordered_json doc;
  doc["memory"] = {{"words", m.memory.words}, {"width", m.memory.width}};
  doc["rows"] = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
    nlohmann::ordered_json cells = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
      const auto &cell = m.cells[a][c];
      cells[std::string(to_string(m.classes[c]))] = {
          {"detected", cell.detected}, {"total", cell.total}, {"label", cell.label()}};
    }
    doc["rows"].push_back({{"algorithm", m.algorithms[a]}, {"classes", cells}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace marchsim
