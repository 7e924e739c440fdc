#include "marchsim/marchsim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "marchsim/bist_sim.hpp"
#include "marchsim/coverage.hpp"
#include "marchsim/diagnosis.hpp"
#include "marchsim/error.hpp"
#include "marchsim/march.hpp"
#include "marchsim/property.hpp"

using namespace marchsim;

struct ms_trace {
  SignalTrace trace;
};

struct ms_suite {
  std::vector<Directive> directives;
};

struct ms_stats {
  std::vector<DirectiveStats> stats;
};

namespace {

thread_local std::string g_last_error;

ms_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return MS_ERR_PARSE;
    case ErrorKind::InvalidArgument: return MS_ERR_INVALID_ARGUMENT;
    case ErrorKind::OutOfRange: return MS_ERR_OUT_OF_RANGE;
    case ErrorKind::UnknownName: return MS_ERR_UNKNOWN_NAME;
    case ErrorKind::Io: return MS_ERR_IO;
    case ErrorKind::GuardExceeded: return MS_ERR_GUARD;
    case ErrorKind::Conformance: return MS_ERR_CONFORMANCE;
  }
  return MS_ERR_INTERNAL;
}

template <class F>
ms_status guard(F &&body) {
  try {
    body();
    g_last_error.clear();
    return MS_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
  } catch (const std::exception &e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return MS_ERR_INTERNAL;
}

void require(const void *p, const char *what) {
  if (!p) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must not be NULL");
}

char *dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

MarchAlgorithm resolve_algorithm(const char *spec) {
  require(spec, "algorithm");
  std::string_view text(spec);
  if (text.find('{') != std::string_view::npos) return parse_march(text);
  return builtin(text);
}

std::vector<FaultSpec> parse_faults(const char *const *faults, std::size_t count) {
  if (count) require(faults, "faults");
  std::vector<FaultSpec> out;
  for (std::size_t i = 0; i < count; ++i) {
    require(faults[i], "fault text");
    out.push_back(parse_fault(faults[i]));
  }
  return out;
}

std::vector<std::string> split_csv(const char *text) {
  std::vector<std::string> out;
  if (!text) return out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<FaultClass> parse_classes(const char *text) {
  std::vector<FaultClass> out;
  for (const auto &name : split_csv(text)) out.push_back(parse_fault_class(name));
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "no fault classes given");
  return out;
}

BistConfig to_config(const ms_config *c) {
  BistConfig config;
  if (c) {
    config.c_size = c->c_size;
    config.word_width = c->word_width;
    config.post_done_edges = c->post_done_edges;
  }
  return config;
}

}  // namespace

extern "C" {

const char *ms_last_error(void) { return g_last_error.c_str(); }

const char *ms_status_name(ms_status status) {
  switch (status) {
    case MS_OK: return "ok";
    case MS_ERR_PARSE: return "parse error";
    case MS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MS_ERR_OUT_OF_RANGE: return "out of range";
    case MS_ERR_UNKNOWN_NAME: return "unknown name";
    case MS_ERR_IO: return "i/o error";
    case MS_ERR_GUARD: return "enumeration guard exceeded";
    case MS_ERR_CONFORMANCE: return "model conformance error";
    case MS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ms_string_free(char *s) { std::free(s); }

ms_status ms_list_algorithms(int with_notation, char **out) {
  return guard([&] {
    require(out, "out");
    std::ostringstream text;
    for (auto name : builtin_names()) {
      const auto alg = builtin(name);
      text << name << ' ' << op_count(alg);
      if (with_notation) text << ' ' << format_march(alg);
      text << '\n';
    }
    *out = dup(text.str());
  });
}

ms_status ms_algorithm_format(const char *spec, char **out) {
  return guard([&] {
    require(out, "out");
    *out = dup(format_march(resolve_algorithm(spec)));
  });
}

ms_status ms_algorithm_op_count(const char *spec, size_t *out) {
  return guard([&] {
    require(out, "out");
    *out = op_count(resolve_algorithm(spec));
  });
}

ms_status ms_algorithm_is_controller(const char *spec, int *out) {
  return guard([&] {
    require(out, "out");
    *out = resolve_algorithm(spec).same_structure(builtin("march_c_fsm")) ? 1 : 0;
  });
}

ms_status ms_algorithm_detects(const char *spec, const char *const *faults, size_t fault_count, uint64_t words,
                               unsigned width, int *detected) {
  return guard([&] {
    require(detected, "detected");
    const auto alg = resolve_algorithm(spec);
    const MemoryConfig config{words, width};
    config.validate();
    const auto specs = parse_faults(faults, fault_count);
    // Several faults are injected together into one memory.
    FaultMemory memory(config);
    memory.fill(0, 0);
    for (const auto &f : specs) memory.inject(f);
    const Word ones = config.mask();
    std::uint64_t cycle = 0;
    *detected = 0;
    for (const auto &step : expand(alg, words)) {
      if (const auto *pause = std::get_if<PauseMarker>(&step)) {
        cycle += pause->cycles;
        continue;
      }
      const auto &a = std::get<Access>(step);
      const Word data = op_value(a.op) ? ones : 0;
      if (is_write(a.op)) {
        memory.write(a.address, data, cycle);
      } else if (memory.read(a.address, cycle) != data) {
        *detected = 1;
        break;
      }
      ++cycle;
    }
  });
}

void ms_config_default(ms_config *config) {
  if (!config) return;
  const BistConfig d;
  config->c_size = d.c_size;
  config->word_width = d.word_width;
  config->post_done_edges = d.post_done_edges;
}

ms_status ms_run(const ms_config *config, const char *scenario_text, const char *const *faults, size_t fault_count,
                 ms_trace **trace, ms_verdict *verdict) {
  return guard([&] {
    require(verdict, "verdict");
    const Scenario scenario = scenario_text ? parse_scenario(scenario_text) : clean_scenario();
    auto result = run(to_config(config), parse_faults(faults, fault_count), scenario);
    *verdict = ms_verdict{};
    const auto &v = result.verdict;
    verdict->completed = v.completed;
    verdict->any_fail = v.any_fail;
    verdict->has_first_fail = v.first_fail_cycle.has_value();
    verdict->first_fail_cycle = v.first_fail_cycle.value_or(0);
    if (v.first_fail_state) {
      const auto name = to_string(*v.first_fail_state);
      std::memcpy(verdict->first_fail_state, name.data(), std::min(name.size(), sizeof verdict->first_fail_state - 1));
    }
    verdict->has_first_fail_addr = v.first_fail_addr.has_value();
    verdict->first_fail_addr = v.first_fail_addr.value_or(0);
    if (trace) *trace = new ms_trace{std::move(result.trace)};
  });
}

ms_status ms_verdict_format(const ms_verdict *verdict, char **out) {
  return guard([&] {
    require(verdict, "verdict");
    require(out, "out");
    TestVerdict v;
    v.completed = verdict->completed != 0;
    v.any_fail = verdict->any_fail != 0;
    if (verdict->has_first_fail) v.first_fail_cycle = verdict->first_fail_cycle;
    if (verdict->first_fail_state[0]) v.first_fail_state = parse_state(verdict->first_fail_state);
    if (verdict->has_first_fail_addr) v.first_fail_addr = verdict->first_fail_addr;
    *out = dup(format_verdict(v));
  });
}

ms_status ms_trace_load(const char *path, ms_trace **trace) {
  return guard([&] {
    require(path, "path");
    require(trace, "trace");
    *trace = new ms_trace{load_trace(path)};
  });
}

void ms_trace_free(ms_trace *trace) { delete trace; }

size_t ms_trace_length(const ms_trace *trace) { return trace ? trace->trace.length() : 0; }

ms_status ms_trace_vcd(const ms_trace *trace, char **out) {
  return guard([&] {
    require(trace, "trace");
    require(out, "out");
    *out = dup(write_vcd(trace->trace));
  });
}

ms_status ms_trace_csv(const ms_trace *trace, char **out) {
  return guard([&] {
    require(trace, "trace");
    require(out, "out");
    *out = dup(write_csv(trace->trace));
  });
}

ms_status ms_suite_builtin(uint64_t pause_edges, ms_suite **suite) {
  return guard([&] {
    require(suite, "suite");
    if (pause_edges == 0) throw Error(ErrorKind::InvalidArgument, "pause_edges must be positive");
    *suite = new ms_suite{builtin_suite(pause_edges)};
  });
}

ms_status ms_suite_parse(const char *text, ms_suite **suite) {
  return guard([&] {
    require(text, "text");
    require(suite, "suite");
    *suite = new ms_suite{parse_suite(text)};
  });
}

size_t ms_suite_size(const ms_suite *suite) { return suite ? suite->directives.size() : 0; }

ms_status ms_suite_format(const ms_suite *suite, char **out) {
  return guard([&] {
    require(suite, "suite");
    require(out, "out");
    *out = dup(format_suite(suite->directives));
  });
}

void ms_suite_free(ms_suite *suite) { delete suite; }

ms_status ms_stats_new(ms_stats **stats) {
  return guard([&] {
    require(stats, "stats");
    *stats = new ms_stats{};
  });
}

void ms_stats_free(ms_stats *stats) { delete stats; }

ms_status ms_evaluate(const ms_trace *trace, const ms_suite *suite, unsigned workers, ms_stats *stats,
                      char **events) {
  return guard([&] {
    require(trace, "trace");
    require(suite, "suite");
    require(stats, "stats");
    EvalOptions options;
    options.workers = workers;
    const auto result = evaluate(trace->trace, suite->directives, options);
    merge_stats(stats->stats, result.stats);
    if (events) {
      std::string log = format_events(result.events, options.scope);
      if (result.aborted)
        log += "Fatal: evaluation stopped at cycle " + std::to_string(result.evaluated_cycles - 1) + "\n";
      *events = dup(log);
    }
  });
}

ms_status ms_stats_report(const ms_stats *stats, int json, char **out) {
  return guard([&] {
    require(stats, "stats");
    require(out, "out");
    *out = dup(json ? render_report_json(stats->stats) : render_report(stats->stats));
  });
}

ms_status ms_stats_from_json(const char *text, ms_stats **stats) {
  return guard([&] {
    require(text, "text");
    require(stats, "stats");
    *stats = new ms_stats{parse_report_json(text)};
  });
}

ms_status ms_stats_all_covered(const ms_stats *stats, int *out) {
  return guard([&] {
    require(stats, "stats");
    require(out, "out");
    const auto cov = assertion_coverage(stats->stats);
    *out = cov.assert_covered == cov.assert_total && cov.cover_covered == cov.cover_total;
  });
}

ms_status ms_coverage(const ms_trace *const *traces, size_t count, const ms_stats *stats, unsigned workers, int json,
                      char **out) {
  return guard([&] {
    require(out, "out");
    if (count) require(traces, "traces");
    std::vector<SignalTrace> all;
    all.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(traces[i], "trace");
      all.push_back(traces[i]->trace);
    }
    const auto report = collect_coverage(all, stats ? stats->stats : std::vector<DirectiveStats>{}, workers);
    *out = dup(json ? render_coverage_json(report) : render_coverage(report));
  });
}

ms_status ms_syndromes(const ms_config *config, const char *classes, size_t max_instances, uint64_t drf_limit,
                       unsigned workers, int json, int compare, char **out, int *strict_mismatch) {
  return guard([&] {
    require(out, "out");
    const auto list = parse_classes(classes);
    SyndromeOptions options;
    options.workers = workers;
    options.max_instances = max_instances;
    options.enumerate.drf_limit = drf_limit;
    const auto rows = syndrome_table(to_config(config), {list.begin(), list.end()}, options);
    if (strict_mismatch) *strict_mismatch = !strict_syndrome_mismatches(rows).empty();
    *out = dup(json ? render_syndromes_json(rows) : render_syndromes(rows, compare != 0));
  });
}

ms_status ms_capability(const char *algorithms, const char *classes, uint64_t words, unsigned width,
                        uint64_t max_cells, unsigned workers, int json, int compare, char **out,
                        int *strict_mismatch) {
  return guard([&] {
    require(out, "out");
    std::vector<MarchAlgorithm> algs;
    for (const auto &name : split_csv(algorithms)) algs.push_back(builtin(name));
    if (algs.empty()) throw Error(ErrorKind::InvalidArgument, "no algorithms given");
    CapabilityOptions options;
    options.workers = workers;
    options.max_cells = max_cells;
    const auto matrix = capability_matrix(algs, parse_classes(classes), MemoryConfig{words, width}, options);
    if (strict_mismatch) {
      *strict_mismatch = 0;
      for (const auto &d : compare_capability(matrix))
        if (d.fault_class == FaultClass::SAF || d.fault_class == FaultClass::TF) *strict_mismatch = 1;
    }
    *out = dup(json ? render_capability_json(matrix) : render_capability(matrix, compare != 0));
  });
}

}  // extern "C"
