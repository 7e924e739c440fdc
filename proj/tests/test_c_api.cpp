#include <cstdlib>
#include <string>

#include "doctest.h"
#include "marchsim/marchsim.h"

namespace {

std::string take(char *s) {
  std::string out = s ? s : "";
  ms_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("c_api") {
  TEST_CASE("algorithm queries") {
    size_t n = 0;
    CHECK(ms_algorithm_op_count("march_b", &n) == MS_OK);
    CHECK(n == 17);
    CHECK(ms_algorithm_op_count("{ u(w0); d(r0,w1) }", &n) == MS_OK);
    CHECK(n == 3);
    CHECK(ms_algorithm_op_count("nope", &n) == MS_ERR_UNKNOWN_NAME);
    CHECK(std::string(ms_last_error()).size() > 0);
    CHECK(ms_algorithm_op_count("{ u(w0", &n) == MS_ERR_PARSE);
    char *list = nullptr;
    CHECK(ms_list_algorithms(0, &list) == MS_OK);
    CHECK(take(list).find("march_b 17") != std::string::npos);
  }

  TEST_CASE("run and verdict") {
    ms_config cfg;
    ms_config_default(&cfg);
    cfg.c_size = 3;
    ms_trace *trace = nullptr;
    ms_verdict v{};
    const char *faults[] = {"saf 3 0 0"};
    REQUIRE(ms_run(&cfg, nullptr, faults, 1, &trace, &v) == MS_OK);
    CHECK(v.completed);
    CHECK(v.any_fail);
    CHECK(std::string(v.first_fail_state) == "rdn1");
    CHECK(v.first_fail_addr == 3);
    CHECK(ms_trace_length(trace) > 0);
    ms_trace_free(trace);

    const char *bad[] = {"saf 99 0 0"};
    CHECK(ms_run(&cfg, nullptr, bad, 1, &trace, &v) != MS_OK);
    ms_trace_free(nullptr);
  }

  TEST_CASE("suite evaluation accumulates") {
    ms_config cfg;
    ms_config_default(&cfg);
    cfg.c_size = 3;
    ms_suite *suite = nullptr;
    REQUIRE(ms_suite_builtin(8, &suite) == MS_OK);
    CHECK(ms_suite_size(suite) == 106);
    ms_stats *stats = nullptr;
    REQUIRE(ms_stats_new(&stats) == MS_OK);
    ms_trace *trace = nullptr;
    ms_verdict v{};
    REQUIRE(ms_run(&cfg, "@2 t_mode=1\n@120 t_mode=0\n", nullptr, 0, &trace, &v) == MS_OK);
    char *events = nullptr;
    CHECK(ms_evaluate(trace, suite, 2, stats, &events) == MS_OK);
    take(events);
    int covered = 1;
    CHECK(ms_stats_all_covered(stats, &covered) == MS_OK);
    CHECK_FALSE(covered);  // reset arcs need mid-test resets
    char *json = nullptr;
    REQUIRE(ms_stats_report(stats, 1, &json) == MS_OK);
    ms_stats *back = nullptr;
    CHECK(ms_stats_from_json(json, &back) == MS_OK);
    char *j2 = nullptr;
    CHECK(ms_stats_report(back, 1, &j2) == MS_OK);
    CHECK(std::string(json) == std::string(j2));
    ms_string_free(json);
    ms_string_free(j2);

    const ms_trace *list[] = {trace};
    char *cov = nullptr;
    CHECK(ms_coverage(list, 1, stats, 1, 0, &cov) == MS_OK);
    CHECK(take(cov).find("13/24") != std::string::npos);
    CHECK(ms_coverage(list, 0, nullptr, 1, 0, &cov) == MS_ERR_INVALID_ARGUMENT);

    ms_stats_free(back);
    ms_stats_free(stats);
    ms_trace_free(trace);
    ms_suite_free(suite);
  }

  TEST_CASE("malformed suite text") {
    ms_suite *suite = nullptr;
    CHECK(ms_suite_parse("assert x : a &&", &suite) == MS_ERR_PARSE);
    CHECK(suite == nullptr);
  }

  TEST_CASE("diagnosis entry points") {
    ms_config cfg;
    ms_config_default(&cfg);
    cfg.c_size = 3;
    cfg.word_width = 1;
    char *out = nullptr;
    int mismatch = 1;
    REQUIRE(ms_syndromes(&cfg, "saf,tf", 0, 64, 2, 0, 1, &out, &mismatch) == MS_OK);
    CHECK(mismatch == 0);
    CHECK(take(out).find("010100") != std::string::npos);
    CHECK(ms_capability("mats+", "saf", 100000, 1, 64, 1, 0, 0, &out, &mismatch) == MS_ERR_GUARD);
    CHECK(ms_syndromes(&cfg, "bogus", 0, 64, 1, 0, 0, &out, &mismatch) != MS_OK);
  }
}
