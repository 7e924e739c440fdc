// Acceptance run: one PASS/FAIL line per criterion.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "marchsim/bist_sim.hpp"
#include "marchsim/coverage.hpp"
#include "marchsim/diagnosis.hpp"
#include "marchsim/march.hpp"
#include "marchsim/parallel.hpp"
#include "marchsim/property.hpp"
#include "oracles.hpp"
#include "random_traces.hpp"

namespace fs = std::filesystem;
using namespace marchsim;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string &title, const std::function<void(Check &)> &body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception &e) {
    c.ok = false;
    c.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.ok) ++failures;
  std::cout << (c.ok ? "PASS" : "FAIL") << "  " << id << ". " << title << " (" << std::fixed
            << std::setprecision(2) << secs << " s)" << c.detail.str() << std::endl;
}

std::string state_at(const SignalTrace &t, std::size_t i) {
  const auto sc = t.index_of("state");
  return t.signals()[sc].enumerants[t.value(sc, i)];
}

std::vector<fs::path> scenario_files() {
  std::vector<fs::path> out;
  for (const auto &e : fs::directory_iterator(MARCHSIM_SCENARIOS))
    if (e.path().extension() == ".scn") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::string> read_tree(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  return out;
}

}  // namespace

int main() {
  criterion(1, "op counts: mats+ 5, march_c- 10, march_b 17", [](Check &c) {
    for (auto [name, n] : {std::pair{"mats+", 5u}, {"march_c-", 10u}, {"march_b", 17u}}) {
      const auto got = op_count(builtin(name));
      c.detail << ' ' << name << '=' << got;
      c.expect(got == n && oracle::count_ops(format_march(builtin(name))) == n, name);
    }
  });

  criterion(2, "SAF/TF syndromes at every cell (c_size 3) and 16 cells (c_size 8)", [](Check &c) {
    const std::map<std::string, std::string> expect{
        {"saf0", "010100"}, {"saf1", "101010"}, {"rise", "010100"}, {"fall", "101010"}};
    std::size_t checked = 0;
    for (unsigned c_size : {3u, 8u}) {
      BistConfig cfg;
      cfg.c_size = c_size;
      const std::uint64_t cells = cfg.memory().cells();
      const std::uint64_t stride = c_size == 3 ? 1 : cells / 16;
      std::vector<BitAddress> picks;
      for (std::uint64_t i = 0; i < cells; i += stride) picks.push_back({i / cfg.word_width, unsigned(i % cfg.word_width)});
      const auto bad = parallel_map(picks.size(), 8, [&](std::size_t k) -> std::uint8_t {
        const auto cell = picks[k];
        return syndrome(cfg, StuckAt{cell, 0}).bits() != expect.at("saf0") ||
               syndrome(cfg, StuckAt{cell, 1}).bits() != expect.at("saf1") ||
               syndrome(cfg, Transition{cell, Edge::Rising}).bits() != expect.at("rise") ||
               syndrome(cfg, Transition{cell, Edge::Falling}).bits() != expect.at("fall");
      });
      for (auto b : bad) c.expect(!b, "mismatch at c_size " + std::to_string(c_size));
      checked += picks.size();
    }
    c.detail << ' ' << checked << " cells x 4 faults";
  });

  criterion(3, "DRF complement, limit 64, c_size 8: f6 = 1 with pause, rdn0 clean when fast-forwarded", [](Check &c) {
    BistConfig cfg;
    cfg.word_width = 1;
    BistConfig ff = cfg;
    ff.fast_forward_pause = true;
    for (std::uint64_t w : {0u, 100u, 255u}) {
      const Retention f{{w, 0}, 64, Decay::Complement};
      const bool paused = read_pass_flags(run(cfg, {f}, clean_scenario()).trace)[2];
      const bool fast = read_pass_flags(run(ff, {f}, clean_scenario()).trace)[2];
      const auto s = syndrome(cfg, f);
      c.detail << " w" << w << ':' << s.bits() << "(rdn0 paused=" << paused << " ff=" << fast << ')';
      c.expect(s.f[5], "f6=0 at word " + std::to_string(w));
      c.expect(!fast, "fast-forward rdn0 flag set at word " + std::to_string(w));
    }
    // DRF rows per decay mode, reported against the all-ones expectation.
    SyndromeOptions opt;
    opt.max_instances = 16;
    opt.workers = 8;
    for (const auto &row : syndrome_table(cfg, {FaultClass::DRF}, opt)) {
      c.detail << " | " << row.label << ':';
      for (const auto &[bits, n] : row.patterns) c.detail << ' ' << bits << 'x' << n;
    }
  });

  criterion(4, "capability on 8x1 memory", [](Check &c) {
    const MemoryConfig mem{8, 1};
    const std::vector<FaultClass> classes{FaultClass::SAF,  FaultClass::TF,       FaultClass::CFin,
                                          FaultClass::CFid, FaultClass::CFst,     FaultClass::AF,
                                          FaultClass::AFMapsTo, FaultClass::AFAlsoAccesses};
    CapabilityOptions opt;
    opt.workers = 8;
    const auto m = capability_matrix({builtin("mats+"), builtin("march_c-"), builtin("march_b"),
                                      builtin("march_c_fsm")},
                                     classes, mem, opt);
    for (std::size_t k = 0; k < 5; ++k) c.expect(m.cells[1][k].all(), "march_c- " + std::string(to_string(classes[k])));
    c.expect(m.cells[0][0].all(), "mats+ SAF");
    c.expect(m.cells[0][6].all() && m.cells[0][7].all(), "mats+ AF mapsto/also");
    c.expect(!m.cells[0][1].all(), "mats+ TF should be partial");
    c.detail << " mats+ TF " << m.cells[0][1].label();
    for (const auto &d : compare_capability(m))
      c.detail << " | reported: " << d.algorithm << ' ' << to_string(d.fault_class) << ' ' << d.measured.label();
    c.detail << " | march_c_fsm:";
    for (std::size_t k = 0; k < classes.size(); ++k)
      c.detail << ' ' << to_string(classes[k]) << '=' << m.cells[3][k].label();
  });

  criterion(5, "controller: done, no fail, 256-edge states, pause->rdn0 after 256 edges", [](Check &c) {
    BistConfig cfg;
    const auto r = run(cfg, {}, clean_scenario());
    c.expect(r.verdict.completed && !r.verdict.any_fail, "verdict");
    std::map<std::string, std::size_t> dwell;
    std::size_t pause_entry = 0, rdn0_entry = 0;
    for (std::size_t i = 0; i < r.trace.length(); ++i) {
      const auto s = state_at(r.trace, i);
      ++dwell[s];
      if (s == "pause" && !pause_entry) pause_entry = i;
      if (s == "rdn0" && !rdn0_entry) rdn0_entry = i;
    }
    for (const char *s : {"wdn0", "rup0", "wup1", "rdn1", "wdna0", "pause", "rdn0", "wdn1", "rup1", "wup0", "rdna0"})
      c.expect(dwell[s] == 256, s);
    c.expect(rdn0_entry - pause_entry == 256, "pause->rdn0 distance");
    c.detail << " pause->rdn0 " << rdn0_entry - pause_entry << " edges";
  });

  criterion(6, "fail rises one edge after the first match=0 sample; pass falls on that edge", [](Check &c) {
    BistConfig cfg;
    std::size_t n = 0;
    for (const char *f : {"saf 0 0 0", "saf 3 0 0", "saf 77 5 1", "saf 200 31 1", "saf 255 16 0"}) {
      const auto t = run(cfg, {parse_fault(f)}, clean_scenario()).trace;
      const auto m = t.index_of("match"), fl = t.index_of("fail"), p = t.index_of("pass");
      std::size_t k = 0;
      while (k < t.length() && t.value(m, k)) ++k;
      const bool ok = k + 1 < t.length() && !t.value(fl, k) && t.value(p, k) && t.value(fl, k + 1) &&
                      !t.value(p, k + 1);
      c.expect(ok, f);
      ++n;
    }
    c.detail << ' ' << n << " faults";
  });

  // Criteria 7, 8 and 11 share the directed scenario runs.
  std::vector<SignalTrace> directed;
  std::vector<DirectiveStats> stats;

  criterion(7, "directed set: every assert has a real success, every cover a match", [&](Check &c) {
    BistConfig cfg;
    const auto suite = builtin_suite(cfg.words());
    for (const auto &f : scenario_files()) {
      directed.push_back(run(cfg, {}, parse_scenario(read_file(f.string()))).trace);
      EvalOptions opt;
      opt.workers = 4;
      merge_stats(stats, evaluate(directed.back(), suite, opt).stats);
    }
    const auto ac = assertion_coverage(stats);
    c.detail << " asserts " << ac.assert_covered << '/' << ac.assert_total << " covers " << ac.cover_covered << '/'
             << ac.cover_total << " over " << directed.size() << " scenarios";
    c.expect(ac.assert_total == 53 && ac.cover_total == 53, "suite size");
    c.expect(ac.unsuccessful.empty(), "unexercised directives");
  });

  criterion(8, "FSM coverage: directed 13/13 and 24/24, clean run 13/24", [&](Check &c) {
    const auto all = fsm_coverage(directed);
    const std::vector<SignalTrace> clean{directed.front()};
    const auto one = fsm_coverage(clean);
    c.detail << " directed " << all.states_covered() << "/13 " << all.transitions_covered() << "/24, clean "
             << one.transitions_covered() << "/24";
    c.expect(all.states_covered() == 13 && all.transitions_covered() == 24, "directed");
    c.expect(one.transitions_covered() == 13, "clean");
  });

  criterion(9, "engine vs brute-force span enumeration, 500 random 200-cycle traces", [](Check &c) {
    const auto suite = builtin_suite(256);
    std::vector<SignalTrace> traces;
    std::mt19937_64 rng(0xB157);
    for (int i = 0; i < 500; ++i) traces.push_back(testutil::random_controller_trace(rng, 200));
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    const auto diffs = parallel_map(traces.size(), workers, [&](std::size_t k) -> std::uint64_t {
      const auto &t = traces[k];
      std::uint64_t d = 0;
      for (const auto &dir : suite) {
        CompiledProperty cp(dir.property, t);
        oracle::BruteForce bf(dir.property, t);
        for (std::size_t s = 0; s < t.length(); ++s) {
          const auto a = cp.attempt(s, t.length());
          const auto b = bf.attempt(s, t.length());
          d += a.outcome != b.outcome || a.decided != b.decided;
        }
      }
      return d;
    });
    std::uint64_t total = 0;
    for (auto d : diffs) total += d;
    c.detail << ' ' << 500ull * 200 * suite.size() << " attempts, " << total << " discrepancies";
    c.expect(total == 0, "discrepancies");
  });

  criterion(10, "determinism: CLI outputs byte-identical across runs and worker counts", [](Check &c) {
    const fs::path base = fs::temp_directory_path() / ("marchsim_accept_" + std::to_string(::getpid()));
    const std::string cli = MARCHSIM_CLI;
    const std::vector<std::string> commands{
        "run --vcd --fault 'saf 3 0 0'",
        "check --vcd --format json",
        "check",
        "syndromes --class saf,tf,af,cfin --c-size 3 --width 2 --sample 8",
        "capability --algs mats+,march_c-,march_b --format json",
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
      std::map<std::string, std::string> first;
      bool have = false;
      for (int workers : {1, 4, 1, 4}) {
        const fs::path out = base / (std::to_string(i) + "_" + std::to_string(workers) + (have ? "b" : "a"));
        std::string cmd = cli + " " + commands[i];
        if (commands[i].rfind("run", 0) != 0) cmd += " --workers " + std::to_string(workers);
        cmd += " --out " + out.string() + " > " + (out.string() + ".stdout") + " 2>&1";
        fs::create_directories(out);
        const int rc = std::system(cmd.c_str());
        auto files = read_tree(out);
        files["stdout"] = read_file(out.string() + ".stdout");
        files["status"] = std::to_string(rc);
        if (!have) {
          first = files;
          have = true;
        } else {
          c.expect(files == first, commands[i] + " workers=" + std::to_string(workers));
        }
      }
    }
    // Coverage over the traces written by check.
    std::string cov[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = base / ("cov" + std::to_string(k));
      const std::string cmd = cli + " coverage " + (base / "1_1a" / "traces").string() + " --assertions " +
                              (base / "1_1a" / "assertions.json").string() + " --workers " +
                              (k ? "4" : "1") + " --out " + out.string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) c.expect(false, "coverage exit status");
      cov[k] = read_file((out / "coverage.txt").string());
    }
    c.expect(!cov[0].empty() && cov[0] == cov[1], "coverage");
    fs::remove_all(base);
    c.detail << ' ' << commands.size() + 1 << " commands";
  });

  criterion(11, "round-trips: notation, VCD, JSON reports", [&](Check &c) {
    for (auto name : builtin_names()) {
      const auto alg = builtin(name);
      const auto back = parse_march(format_march(alg));
      c.expect(back.same_structure(alg) && format_march(back) == format_march(alg), std::string(name));
    }
    for (std::size_t i = 0; i < directed.size(); i += 6)
      c.expect(read_vcd(write_vcd(directed[i])) == directed[i], "vcd " + std::to_string(i));
    c.expect(parse_report_json(render_report_json(stats)) == stats, "assertion report json");
    const auto cov = collect_coverage(directed, stats, 4);
    c.expect(parse_coverage_json(render_coverage_json(cov)) == cov, "coverage json");
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
