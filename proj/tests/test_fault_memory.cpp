#include "doctest.h"
#include "marchsim/error.hpp"
#include "marchsim/fault_memory.hpp"

using namespace marchsim;

TEST_SUITE("fault_memory") {
  TEST_CASE("fault-free memory stores words") {
    FaultMemory m({4, 8});
    m.write(2, 0x1A5, 0);  // masked to 8 bits
    CHECK(m.read(2, 1) == 0xA5);
    CHECK(m.read(0, 1) == 0);
    CHECK_THROWS_AS(m.read(4, 1), Error);
  }

  TEST_CASE("stuck-at cell ignores writes") {
    FaultMemory m({4, 4});
    m.inject(StuckAt{{1, 2}, 1});
    m.write(1, 0, 0);
    CHECK(m.read(1, 1) == 0b0100);
    m.inject(StuckAt{{3, 0}, 0});
    m.write(3, 0xF, 2);
    CHECK(m.read(3, 3) == 0xE);
  }

  TEST_CASE("transition fault blocks one direction") {
    FaultMemory m({2, 1});
    m.inject(Transition{{0, 0}, Edge::Rising});
    m.write(0, 1, 0);
    CHECK(m.read(0, 1) == 0);
    FaultMemory f({2, 1});
    f.fill(1);
    f.inject(Transition{{0, 0}, Edge::Falling});
    f.write(0, 0, 0);
    CHECK(f.read(0, 1) == 1);
    f.write(1, 0, 2);
    CHECK(f.read(1, 3) == 0);
  }

  TEST_CASE("address decoder faults") {
    FaultMemory none({4, 4});
    none.inject(AddressFault{AddressFault::Kind::NoAccess, 1, 0});
    none.write(1, 5, 0);
    CHECK(none.stored(1) == 0);

    FaultMemory maps({4, 4});
    maps.inject(AddressFault{AddressFault::Kind::MapsTo, 1, 2});
    maps.write(1, 5, 0);
    CHECK(maps.stored(2) == 5);
    CHECK(maps.stored(1) == 0);

    FaultMemory also({4, 4});
    also.inject(AddressFault{AddressFault::Kind::AlsoAccesses, 1, 3});
    also.write(1, 6, 0);
    CHECK(also.stored(1) == 6);
    CHECK(also.stored(3) == 6);
  }

  TEST_CASE("coupling faults") {
    FaultMemory inv({4, 1});
    inv.inject(Coupling{Coupling::Kind::Inversion, Edge::Rising, 0, 0, {0, 0}, {2, 0}});
    inv.write(0, 1, 0);
    CHECK(inv.read(2, 1) == 1);
    inv.write(0, 0, 2);  // falling: no effect
    CHECK(inv.read(2, 3) == 1);

    FaultMemory idem({4, 1});
    idem.inject(Coupling{Coupling::Kind::Idempotent, Edge::Falling, 0, 1, {1, 0}, {0, 0}});
    idem.write(1, 1, 0);
    CHECK(idem.read(0, 1) == 0);
    idem.write(1, 0, 2);
    CHECK(idem.read(0, 3) == 1);

    FaultMemory st({4, 1});
    st.inject(Coupling{Coupling::Kind::State, Edge::Any, 1, 0, {3, 0}, {0, 0}});
    st.write(0, 1, 0);
    CHECK(st.read(0, 1) == 1);
    st.write(3, 1, 2);
    CHECK(st.read(0, 3) == 0);
  }

  TEST_CASE("retention decays after the limit") {
    for (auto [decay, expect] : {std::pair{Decay::Complement, 0}, {Decay::ToZero, 0}, {Decay::ToOne, 1}}) {
      FaultMemory m({2, 1});
      m.inject(Retention{{0, 0}, 10, decay});
      m.write(0, 1, 100);
      CHECK(m.read(0, 105) == 1);
      CHECK(m.read(0, 111) == expect);
    }
    FaultMemory c({2, 1});
    c.inject(Retention{{0, 0}, 10, Decay::Complement});
    c.write(0, 0, 0);
    CHECK(c.read(0, 20) == 1);
  }

  TEST_CASE("fault text round-trips") {
    for (const char *text : {"saf 3 0 0", "tf 2 0 rise", "af mapsto 2 5", "af noaccess 1", "af also 1 2",
                             "cfin 0 0 1 0 rise", "cfid 0 0 1 0 fall 1", "cfst 0 0 1 0 1 0", "drf 1 0 64 complement"}) {
      CAPTURE(text);
      CHECK(format_fault(parse_fault(text)) == text);
    }
    CHECK_THROWS_AS(parse_fault("saf 3"), Error);
    CHECK_THROWS_AS(parse_fault("xyz 1 2"), Error);
  }

  TEST_CASE("validation rejects out-of-range cells") {
    CHECK_THROWS_AS(validate_fault(StuckAt{{8, 0}, 0}, {8, 1}), Error);
    CHECK_THROWS_AS(validate_fault(StuckAt{{0, 1}, 0}, {8, 1}), Error);
    CHECK_NOTHROW(validate_fault(StuckAt{{7, 0}, 1}, {8, 1}));
  }

  TEST_CASE("enumeration sizes follow from the class definitions") {
    const MemoryConfig c{8, 1};
    const std::uint64_t n = c.cells();
    const std::uint64_t pairs = n * (n - 1);
    CHECK(enumerate_faults(c, {FaultClass::SAF}).size() == 2 * n);
    CHECK(enumerate_faults(c, {FaultClass::TF}).size() == 2 * n);
    CHECK(enumerate_faults(c, {FaultClass::CFin}).size() == 2 * pairs);
    CHECK(enumerate_faults(c, {FaultClass::CFid}).size() == 4 * pairs);
    CHECK(enumerate_faults(c, {FaultClass::CFst}).size() == 4 * pairs);
    CHECK(enumerate_faults(c, {FaultClass::DRF}).size() == 3 * n);
  }
}
