#include "doctest.h"
#include "marchsim/bist_sim.hpp"
#include "marchsim/coverage.hpp"
#include "marchsim/error.hpp"

using namespace marchsim;

namespace {

SignalTrace run_text(const std::string &scenario, unsigned c_size = 3) {
  BistConfig cfg;
  cfg.c_size = c_size;
  cfg.word_width = 4;
  return run(cfg, {}, parse_scenario(scenario)).trace;
}

}  // namespace

TEST_SUITE("coverage") {
  TEST_CASE("clean run covers every state and thirteen arcs") {
    // 12 forward arcs plus s_done -> s_idle once t_mode drops.
    const std::vector<SignalTrace> traces{run_text("@2 t_mode=1\n@100 t_mode=0\n")};
    const auto fsm = fsm_coverage(traces);
    CHECK(fsm.states_covered() == 13);
    CHECK(fsm.transitions_covered() == 13);
  }

  TEST_CASE("held t_mode misses the done-to-idle arc") {
    const std::vector<SignalTrace> traces{run_text("@2 t_mode=1\n")};
    CHECK(fsm_coverage(traces).transitions_covered() == 12);
  }

  TEST_CASE("mid-test resets cover the to-idle arcs") {
    std::vector<SignalTrace> traces;
    // At c_size 3 each state spans 8 edges; state k (1-based) starts at 2 + 8(k-1).
    for (int k = 1; k <= 11; ++k) {
      const int at = 2 + 8 * (k - 1) + 3;
      traces.push_back(run_text("@2 t_mode=1\n@" + std::to_string(at) + " rst=1\n@" + std::to_string(at + 1) +
                                " rst=0 t_mode=0\n"));
    }
    const auto fsm = fsm_coverage(traces);
    CHECK(fsm.states_covered() == 12);
    CHECK(fsm.transitions_covered() == 22);  // 11 forward, 11 to idle; done never reached
    traces.push_back(run_text("@2 t_mode=1\n@100 t_mode=0\n"));
    CHECK(fsm_coverage(traces).transitions_covered() == 24);
    CHECK(fsm_coverage(traces).percent() == doctest::Approx(100.0));
  }

  TEST_CASE("illegal arcs are conformance errors") {
    SignalTrace t({{"state", 4, {"s_idle", "wdn0", "rup0", "wup1", "rdn1", "wdna0", "pause", "rdn0", "wdn1", "rup1",
                                 "wup0", "rdna0", "s_done"}}});
    for (std::uint64_t v : {0, 2}) {
      const std::uint64_t row[] = {v};
      t.append(row);
    }
    const std::vector<SignalTrace> traces{t};
    try {
      fsm_coverage(traces);
      FAIL("expected conformance error");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::Conformance);
    }
  }

  TEST_CASE("toggle coverage per bit") {
    SignalTrace t({{"x", 2, {}}, {"k", 1, {}}});
    for (auto [x, k] : {std::pair<std::uint64_t, std::uint64_t>{0, 1}, {1, 1}, {0, 1}, {2, 1}}) {
      const std::uint64_t row[] = {x, k};
      t.append(row);
    }
    const std::vector<SignalTrace> traces{t};
    const auto tc = toggle_coverage(traces);
    REQUIRE(tc.signals.size() == 2);
    // bit 0 rose and fell; bit 1 only rose.
    CHECK(tc.signals[0].bits_covered() == 1);
    CHECK_FALSE(tc.signals[0].constant);
    CHECK(tc.signals[1].constant);
    CHECK(tc.bits_covered() == 1);
    CHECK(tc.bits_total() == 3);
    CHECK_THROWS_AS(toggle_coverage(std::span<const SignalTrace>{}), Error);
  }

  TEST_CASE("assertion coverage and score") {
    std::vector<DirectiveStats> stats(3);
    stats[0].name = "A";
    stats[0].real_successes = 1;
    stats[1].name = "B";
    stats[2].name = "C";
    stats[2].kind = DirectiveKind::Cover;
    stats[2].real_successes = 4;
    const auto ac = assertion_coverage(stats);
    CHECK(ac.assert_covered == 1);
    CHECK(ac.assert_total == 2);
    CHECK(ac.cover_covered == 1);
    CHECK(ac.unsuccessful == std::vector<std::string>{"B"});
    CHECK(ac.percent() == doctest::Approx(50.0));
  }

  TEST_CASE("collection is order-stable across workers and round-trips JSON") {
    std::vector<SignalTrace> traces{run_text("@2 t_mode=1\n@100 t_mode=0\n"),
                                    run_text("@2 t_mode=1\n@30 rst=1\n@31 rst=0 t_mode=0\n")};
    const auto a = collect_coverage(traces, {}, 1);
    const auto b = collect_coverage(traces, {}, 4);
    CHECK(a == b);
    CHECK(render_coverage(a) == render_coverage(b));
    CHECK(parse_coverage_json(render_coverage_json(a)) == a);
    CHECK_FALSE(a.assertion.applicable());
    CHECK(a.score() == doctest::Approx((a.fsm.percent() + a.toggle.percent()) / 2));
    CHECK_THROWS_AS(collect_coverage(std::span<const SignalTrace>{}), Error);
  }
}
