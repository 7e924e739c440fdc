// marchsim: command-line front end over the C API.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "marchsim/marchsim.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

#ifndef MARCHSIM_DEFAULT_SCENARIOS
#define MARCHSIM_DEFAULT_SCENARIOS "scenarios/directed"
#endif

// Thrown for anything that should end the process with exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ms_status status, const std::string &context) {
  if (status != MS_OK) throw UsageError(context + ": " + ms_status_name(status) + ": " + ms_last_error());
}

// Owns a char* returned by the library.
std::string take(char *s) {
  std::string out = s ? s : "";
  ms_string_free(s);
  return out;
}

template <class T, void (*Free)(T *)>
struct Deleter {
  void operator()(T *p) const { Free(p); }
};
using TracePtr = std::unique_ptr<ms_trace, Deleter<ms_trace, ms_trace_free>>;
using SuitePtr = std::unique_ptr<ms_suite, Deleter<ms_suite, ms_suite_free>>;
using StatsPtr = std::unique_ptr<ms_stats, Deleter<ms_stats, ms_stats_free>>;

std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path &path, const std::string &text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path.string() + "'");
}

std::string default_out() {
  const char *env = std::getenv("MARCHSIM_OUT");
  return env && *env ? env : "marchsim_out";
}

// Files directly named, plus the sorted matching entries of named directories.
std::vector<fs::path> collect_files(const std::vector<std::string> &paths, const std::vector<std::string> &exts) {
  std::vector<fs::path> out;
  for (const auto &p : paths) {
    const fs::path path(p);
    if (fs::is_directory(path)) {
      std::vector<fs::path> found;
      for (const auto &entry : fs::directory_iterator(path)) {
        if (!entry.is_regular_file()) continue;
        if (std::find(exts.begin(), exts.end(), entry.path().extension().string()) != exts.end())
          found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(path)) {
      out.push_back(path);
    } else {
      throw UsageError("no such file or directory: '" + p + "'");
    }
  }
  return out;
}

struct Common {
  unsigned c_size = 8;
  unsigned width = 32;
  std::string out = default_out();
  std::string format = "text";
  unsigned workers = 1;

  ms_config config() const {
    ms_config c;
    ms_config_default(&c);
    c.c_size = c_size;
    c.word_width = width;
    return c;
  }
  bool json() const { return format == "json"; }
};

void add_format(CLI::App *cmd, Common &c) {
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

void add_workers(CLI::App *cmd, Common &c) {
  cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
}

std::vector<const char *> c_strings(const std::vector<std::string> &v) {
  std::vector<const char *> out;
  for (const auto &s : v) out.push_back(s.c_str());
  return out;
}

std::string verdict_json(const ms_verdict &v) {
  nlohmann::ordered_json j;
  j["completed"] = v.completed != 0;
  j["any_fail"] = v.any_fail != 0;
  j["first_fail_cycle"] = v.has_first_fail ? nlohmann::ordered_json(v.first_fail_cycle) : nullptr;
  j["first_fail_state"] = v.first_fail_state[0] ? nlohmann::ordered_json(v.first_fail_state) : nullptr;
  j["first_fail_addr"] = v.has_first_fail_addr ? nlohmann::ordered_json(v.first_fail_addr) : nullptr;
  return j.dump(2) + "\n";
}

// ---- commands ----

int cmd_list(bool notation) {
  char *text = nullptr;
  check(ms_list_algorithms(notation, &text), "list-algorithms");
  std::cout << take(text);
  return kExitOk;
}

struct RunArgs {
  Common common;
  std::string alg = "march_c_fsm";
  std::string scenario;
  std::vector<std::string> faults;
  bool vcd = false;
  bool expect_fail = false;
};

int cmd_run(const RunArgs &a) {
  int controller = 0;
  check(ms_algorithm_is_controller(a.alg.c_str(), &controller), "--alg");
  const auto faults = c_strings(a.faults);

  if (!controller) {
    // Other algorithms run on the generic March engine: no controller trace.
    if (!a.scenario.empty()) throw UsageError("--scenario applies only to the controller algorithm (march_c_fsm)");
    int detected = 0;
    check(ms_algorithm_detects(a.alg.c_str(), faults.data(), faults.size(), std::uint64_t{1} << a.common.c_size,
                               a.common.width, &detected),
          "run");
    char *notation = nullptr;
    check(ms_algorithm_format(a.alg.c_str(), &notation), "--alg");
    std::ostringstream report;
    if (a.common.json()) {
      nlohmann::ordered_json j{{"algorithm", take(notation)}, {"detected", detected != 0}};
      report << j.dump(2) << "\n";
    } else {
      report << "algorithm " << take(notation) << "\ndetected=" << detected << "\n";
    }
    write_text(fs::path(a.common.out) / (a.common.json() ? "verdict.json" : "verdict.txt"), report.str());
    std::cout << report.str();
    return (detected != 0) == a.expect_fail ? kExitOk : kExitFail;
  }

  std::string scenario_text;
  if (!a.scenario.empty()) scenario_text = read_text(a.scenario);
  const ms_config config = a.common.config();
  ms_trace *raw = nullptr;
  ms_verdict verdict{};
  check(ms_run(&config, a.scenario.empty() ? nullptr : scenario_text.c_str(), faults.data(), faults.size(), &raw,
               &verdict),
        "run");
  TracePtr trace(raw);

  const fs::path out(a.common.out);
  char *csv = nullptr;
  check(ms_trace_csv(trace.get(), &csv), "trace");
  write_text(out / "trace.csv", take(csv));
  if (a.vcd) {
    char *vcd = nullptr;
    check(ms_trace_vcd(trace.get(), &vcd), "trace");
    write_text(out / "trace.vcd", take(vcd));
  }
  std::string report;
  if (a.common.json()) {
    report = verdict_json(verdict);
  } else {
    char *text = nullptr;
    check(ms_verdict_format(&verdict, &text), "verdict");
    report = take(text) + "\n";
  }
  write_text(out / (a.common.json() ? "verdict.json" : "verdict.txt"), report);
  std::cout << report;

  const bool clean = verdict.completed && !verdict.any_fail;
  if (a.expect_fail) return verdict.any_fail ? kExitOk : kExitFail;
  return clean ? kExitOk : kExitFail;
}

struct CheckArgs {
  Common common;
  std::vector<std::string> scenarios;
  std::string suite;
  bool vcd = false;
};

int cmd_check(const CheckArgs &a) {
  SuitePtr suite;
  {
    ms_suite *raw = nullptr;
    if (a.suite.empty() || a.suite == "builtin") {
      check(ms_suite_builtin(std::uint64_t{1} << a.common.c_size, &raw), "suite");
    } else {
      check(ms_suite_parse(read_text(a.suite).c_str(), &raw), "suite '" + a.suite + "'");
    }
    suite.reset(raw);
  }
  const auto files =
      collect_files(a.scenarios.empty() ? std::vector<std::string>{MARCHSIM_DEFAULT_SCENARIOS} : a.scenarios, {".scn"});
  if (files.empty()) throw UsageError("no scenario files found");

  StatsPtr stats;
  {
    ms_stats *raw = nullptr;
    check(ms_stats_new(&raw), "stats");
    stats.reset(raw);
  }
  const fs::path out(a.common.out);
  const ms_config config = a.common.config();
  std::string events;
  for (const auto &file : files) {
    const std::string text = read_text(file);
    ms_trace *raw = nullptr;
    ms_verdict verdict{};
    check(ms_run(&config, text.c_str(), nullptr, 0, &raw, &verdict), "scenario '" + file.string() + "'");
    TracePtr trace(raw);
    char *log = nullptr;
    check(ms_evaluate(trace.get(), suite.get(), a.common.workers, stats.get(), &log), "evaluate " + file.string());
    events += "== " + file.filename().string() + "\n" + take(log);

    const fs::path stem = out / "traces" / file.stem();
    char *csv = nullptr;
    check(ms_trace_csv(trace.get(), &csv), "trace");
    write_text(stem.string() + ".csv", take(csv));
    if (a.vcd) {
      char *vcd = nullptr;
      check(ms_trace_vcd(trace.get(), &vcd), "trace");
      write_text(stem.string() + ".vcd", take(vcd));
    }
  }
  char *report = nullptr;
  check(ms_stats_report(stats.get(), a.common.json(), &report), "report");
  const std::string text = take(report);
  write_text(out / (a.common.json() ? "assertions.json" : "assertions.txt"), text);
  write_text(out / "events.log", events);
  std::cout << text;

  int covered = 0;
  check(ms_stats_all_covered(stats.get(), &covered), "report");
  return covered ? kExitOk : kExitFail;
}

struct SyndromeArgs {
  Common common;
  std::vector<std::string> classes{"saf", "tf"};
  std::size_t sample = 16;
  std::uint64_t drf_limit = 64;
  bool compare = false;
};

std::string join(const std::vector<std::string> &v) {
  std::string out;
  for (const auto &s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

int cmd_syndromes(const SyndromeArgs &a) {
  const ms_config config = a.common.config();
  char *text = nullptr;
  int mismatch = 0;
  check(ms_syndromes(&config, join(a.classes).c_str(), a.sample, a.drf_limit, a.common.workers, a.common.json(),
                     a.compare, &text, &mismatch),
        "syndromes");
  const std::string out = take(text);
  write_text(fs::path(a.common.out) / (a.common.json() ? "syndromes.json" : "syndromes.txt"), out);
  std::cout << out;
  return a.compare && mismatch ? kExitFail : kExitOk;
}

struct CapabilityArgs {
  Common common;
  std::vector<std::string> algs{"mats+", "march_c-", "march_b"};
  std::vector<std::string> classes{"af", "saf", "tf", "cfin", "cfid", "cfst"};
  std::uint64_t words = 8;
  std::uint64_t max_cells = 64;
  bool compare = false;
};

int cmd_capability(const CapabilityArgs &a) {
  char *text = nullptr;
  int mismatch = 0;
  check(ms_capability(join(a.algs).c_str(), join(a.classes).c_str(), a.words, a.common.width, a.max_cells,
                      a.common.workers, a.common.json(), a.compare, &text, &mismatch),
        "capability");
  const std::string out = take(text);
  write_text(fs::path(a.common.out) / (a.common.json() ? "capability.json" : "capability.txt"), out);
  std::cout << out;
  return a.compare && mismatch ? kExitFail : kExitOk;
}

struct CoverageArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string assertions;
};

int cmd_coverage(const CoverageArgs &a) {
  const auto files = collect_files(a.inputs, {".vcd", ".csv"});
  if (files.empty()) throw UsageError("coverage: no traces given (expected .vcd or .csv files or directories)");
  std::vector<TracePtr> traces;
  for (const auto &f : files) {
    ms_trace *raw = nullptr;
    check(ms_trace_load(f.string().c_str(), &raw), "trace '" + f.string() + "'");
    traces.emplace_back(raw);
  }
  StatsPtr stats;
  if (!a.assertions.empty()) {
    ms_stats *raw = nullptr;
    check(ms_stats_from_json(read_text(a.assertions).c_str(), &raw), "assertion report '" + a.assertions + "'");
    stats.reset(raw);
  }
  std::vector<const ms_trace *> handles;
  for (const auto &t : traces) handles.push_back(t.get());
  char *text = nullptr;
  check(ms_coverage(handles.data(), handles.size(), stats.get(), a.common.workers, a.common.json(), &text),
        "coverage");
  const std::string out = take(text);
  write_text(fs::path(a.common.out) / (a.common.json() ? "coverage.json" : "coverage.txt"), out);
  std::cout << out;
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"MBIST controller workbench: March algorithms, fault simulation, assertions and coverage"};
  app.require_subcommand(1);

  bool notation = false;
  auto *list = app.add_subcommand("list-algorithms", "List built-in March algorithms with op counts");
  list->add_flag("--notation", notation, "Include the March notation");

  const std::string fault_help =
      "Inject a fault (repeatable): saf W B V | tf W B rise|fall | af noaccess A | af mapsto A O | af also A O | "
      "cfin AW AB VW VB rise|fall|any | cfid AW AB VW VB rise|fall|any F | cfst AW AB VW VB AV F | "
      "drf W B LIMIT zero|one|complement";

  RunArgs run_args;
  auto *run = app.add_subcommand("run", "Simulate the controller against the memory model");
  run->add_option("--c-size", run_args.common.c_size, "Address counter width")->capture_default_str();
  run->add_option("--width", run_args.common.width, "Memory word width")->capture_default_str();
  run->add_option("--alg", run_args.alg, "Built-in name or inline notation; anything but march_c_fsm runs on the "
                                         "generic March engine")
      ->capture_default_str();
  run->add_option("--scenario", run_args.scenario, "Scenario file (default: raise t_mode at edge 2)");
  run->add_option("--fault", run_args.faults, fault_help);
  run->add_option("--out", run_args.common.out, "Output directory (env MARCHSIM_OUT)")->capture_default_str();
  run->add_flag("--vcd", run_args.vcd, "Also write trace.vcd");
  run->add_flag("--expect-fail", run_args.expect_fail, "Exit 0 only if a fault is detected");
  add_format(run, run_args.common);

  CheckArgs check_args;
  auto *chk = app.add_subcommand("check", "Run scenarios and evaluate an assertion suite");
  chk->add_option("--scenario", check_args.scenarios, "Scenario file or directory (repeatable; default bundled set)");
  chk->add_option("--suite", check_args.suite, "Suite file (default: builtin)");
  chk->add_option("--c-size", check_args.common.c_size, "Address counter width")->capture_default_str();
  chk->add_option("--width", check_args.common.width, "Memory word width")->capture_default_str();
  chk->add_option("--out", check_args.common.out, "Output directory (env MARCHSIM_OUT)")->capture_default_str();
  chk->add_flag("--vcd", check_args.vcd, "Also write a VCD per scenario");
  add_format(chk, check_args.common);
  add_workers(chk, check_args.common);

  SyndromeArgs syn_args;
  auto *syn = app.add_subcommand("syndromes", "Fault syndromes F1..F6 of the controller");
  syn->add_option("--class", syn_args.classes, "Fault classes (repeatable or comma-separated)")
      ->delimiter(',')
      ->capture_default_str();
  syn->add_option("--c-size", syn_args.common.c_size, "Address counter width")->capture_default_str();
  syn->add_option("--width", syn_args.common.width, "Memory word width")->capture_default_str();
  syn->add_option("--sample", syn_args.sample, "Instances per row, 0 = all")->capture_default_str();
  syn->add_option("--drf-limit", syn_args.drf_limit, "Retention limit in cycles for drf")->capture_default_str();
  syn->add_flag("--compare", syn_args.compare, "Compare with the published syndromes; exit 1 on a SAF/TF mismatch");
  syn->add_option("--out", syn_args.common.out, "Output directory (env MARCHSIM_OUT)")->capture_default_str();
  add_format(syn, syn_args.common);
  add_workers(syn, syn_args.common);

  CapabilityArgs cap_args;
  cap_args.common.width = 1;
  auto *cap = app.add_subcommand("capability", "Algorithm vs fault-class detection matrix");
  cap->add_option("--algs", cap_args.algs, "Built-in algorithms (comma-separated)")
      ->delimiter(',')
      ->capture_default_str();
  cap->add_option("--class", cap_args.classes, "Fault classes (repeatable or comma-separated)")
      ->delimiter(',')
      ->capture_default_str();
  cap->add_option("--n", cap_args.words, "Memory words")->capture_default_str();
  cap->add_option("--width", cap_args.common.width, "Memory word width")->capture_default_str();
  cap->add_option("--max-cells", cap_args.max_cells, "Enumeration guard")->capture_default_str();
  cap->add_flag("--compare", cap_args.compare, "Compare with the published table; exit 1 on a SAF/TF mismatch");
  cap->add_option("--out", cap_args.common.out, "Output directory (env MARCHSIM_OUT)")->capture_default_str();
  add_format(cap, cap_args.common);
  add_workers(cap, cap_args.common);

  CoverageArgs cov_args;
  auto *cov = app.add_subcommand("coverage", "FSM, toggle and assertion coverage of recorded traces");
  cov->add_option("traces", cov_args.inputs, "Trace files (.vcd/.csv) or directories");
  cov->add_option("--assertions", cov_args.assertions, "Assertion report JSON from 'check --format json'");
  cov->add_option("--out", cov_args.common.out, "Output directory (env MARCHSIM_OUT)")->capture_default_str();
  add_format(cov, cov_args.common);
  add_workers(cov, cov_args.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list) return cmd_list(notation);
    if (*run) return cmd_run(run_args);
    if (*chk) return cmd_check(check_args);
    if (*syn) return cmd_syndromes(syn_args);
    if (*cap) return cmd_capability(cap_args);
    if (*cov) return cmd_coverage(cov_args);
  } catch (const UsageError &e) {
    std::cerr << "marchsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "marchsim: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
