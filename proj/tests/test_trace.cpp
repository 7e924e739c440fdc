#include <random>

#include "doctest.h"
#include "marchsim/error.hpp"
#include "marchsim/trace.hpp"

using namespace marchsim;

namespace {

SignalTrace sample_trace(unsigned seed, std::size_t cycles) {
  SignalTrace t({{"clk_en", 1, {}}, {"bus", 12, {}}, {"mode", 2, {"off", "run", "hold"}}, {"wide", 64, {}}});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cycles; ++i) {
    const std::uint64_t row[] = {rng() & 1, rng() & 0xFFF, rng() % 3, rng()};
    t.append(row);
  }
  t.meta()["c_size"] = "4";
  return t;
}

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("VCD round-trip recovers the trace") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const auto t = sample_trace(seed, 50);
      const auto back = read_vcd(write_vcd(t));
      CHECK(back == t);
    }
  }

  TEST_CASE("CSV round-trip recovers the trace") {
    const auto t = sample_trace(9, 40);
    CHECK(read_csv(write_csv(t)) == t);
  }

  TEST_CASE("VCD is deterministic and records changes only") {
    SignalTrace t({{"a", 1, {}}});
    for (std::uint64_t v : {0, 0, 1, 1, 0}) {
      const std::uint64_t row[] = {v};
      t.append(row);
    }
    const auto text = write_vcd(t);
    CHECK(text == write_vcd(t));
    CHECK(text.find("#2\n") != std::string::npos);
    CHECK(text.find("#1\n") == std::string::npos);
  }

  TEST_CASE("lookup and truncation") {
    auto t = sample_trace(3, 10);
    CHECK(t.index_of("mode") == 2);
    CHECK_FALSE(t.find("nope").has_value());
    CHECK_THROWS_AS(t.index_of("nope"), Error);
    t.truncate(4);
    CHECK(t.length() == 4);
  }

  TEST_CASE("malformed inputs") {
    CHECK_THROWS_AS(read_vcd("$var wire 1 ! a $end\n#0\n1!"), Error);
    CHECK_THROWS_AS(read_csv("cycle,a\n0,1,2\n"), Error);
  }
}
