#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "harness.hpp"

using namespace harness;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& body = "")
        : path("/tmp/gmelab_test_" + name) {
        if (!body.empty()) {
            std::ofstream out(path);
            out << body;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("quartiles interpolate linearly") {
    const Quartiles q4 = quartiles({4.0, 1.0, 3.0, 2.0});
    CHECK(q4.q1 == doctest::Approx(1.75));
    CHECK(q4.median == doctest::Approx(2.5));
    CHECK(q4.q3 == doctest::Approx(3.25));

    const Quartiles q5 = quartiles({5.0, 1.0, 2.0, 4.0, 3.0});
    CHECK(q5.q1 == doctest::Approx(2.0));
    CHECK(q5.median == doctest::Approx(3.0));
    CHECK(q5.q3 == doctest::Approx(4.0));

    const Quartiles q1 = quartiles({7.5});
    CHECK(q1.q1 == 7.5);
    CHECK(q1.median == 7.5);
    CHECK(q1.q3 == 7.5);
}

TEST_CASE("fmt uses 12 significant digits") {
    CHECK(fmt(0.5) == "0.5");
    CHECK(fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(fmt(123456.0) == "123456");
}

TEST_CASE("summary csv layout") {
    TempFile f("summary.csv");
    write_summary_csv(f.path, {{1.0, 0.5, 0.25, 0.75, 0.0},
                               {2.0, 0.625, 0.5, 0.75, 0.0}},
                      false);
    CHECK(slurp(f.path) ==
          "x,median,q1,q3\n1,0.5,0.25,0.75\n2,0.625,0.5,0.75\n");

    write_summary_csv(f.path, {{130.0, 0.95, 0.9, 1.0, 71.0}}, true);
    CHECK(slurp(f.path) == "x,median,q1,q3,bp_pct\n130,0.95,0.9,1,71\n");
}

TEST_CASE("trace csv layout") {
    gme_state* ghz = nullptr;
    REQUIRE(gme_state_named("GHZ", 3, 0.0, &ghz) == GME_OK);
    gme_run_config cfg;
    gme_run_config_defaults(&cfg);
    cfg.iters_local = 2;
    cfg.iters_global = 3;
    cfg.shots_local = 32;
    cfg.shots_global = 64;
    cfg.seed = 7;
    gme_trace* trace = nullptr;
    REQUIRE(gme_run_ivdge(ghz, &cfg, nullptr, &trace) == GME_OK);

    TempFile f("trace.csv");
    write_trace_csv(f.path, trace);
    std::ifstream in(f.path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "iteration,stage,cost_sampled,infidelity_exact,cum_shots");
    int rows = 0;
    std::set<std::string> stages;
    while (std::getline(in, line)) {
        ++rows;
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        stages.insert(line.substr(first + 1, second - first - 1));
    }
    CHECK(rows == 5);
    CHECK(stages == std::set<std::string>{"local", "global"});

    gme_trace_free(trace);
    gme_state_free(ghz);
}

TEST_CASE("noise file parsing") {
    TempFile f("noise.cfg",
               "# calibration snapshot\n"
               "depolarizing = 0.02\n"
               "p01 = 0.015\n"
               "p10 = 0.01\n"
               "p01_2 = 0.04\n"
               "\n"
               "p10_0 = 0.005\n");
    const NoiseSpec spec = parse_noise_file(f.path, 3);
    CHECK(spec.depolarizing == doctest::Approx(0.02));
    CHECK(spec.p01[0] == doctest::Approx(0.015));
    CHECK(spec.p01[2] == doctest::Approx(0.04));
    CHECK(spec.p10[0] == doctest::Approx(0.005));
    CHECK(spec.p10[1] == doctest::Approx(0.01));

    TempFile bad_key("noise_bad.cfg", "depol = 0.1\n");
    CHECK_THROWS_AS(parse_noise_file(bad_key.path, 3), std::runtime_error);
    TempFile bad_idx("noise_idx.cfg", "p01_7 = 0.1\n");
    CHECK_THROWS_AS(parse_noise_file(bad_idx.path, 3), std::runtime_error);
    CHECK_THROWS_AS(parse_noise_file("/nonexistent/noise.cfg", 3),
                    std::runtime_error);
}

TEST_CASE("member streams leave room for repetition offsets") {
    std::set<std::uint64_t> seen;
    for (int m = 0; m < 64; ++m) {
        const std::uint64_t base = member_stream(m);
        CHECK(seen.insert(base).second);
        if (m > 0) CHECK(base - member_stream(m - 1) > 1024);
    }
}

TEST_CASE("parallel_for covers every index once and propagates exceptions") {
    std::vector<int> hits(200, 0);
    parallel_for(200, 4, [&](int i) { hits[std::size_t(i)] += 1; });
    for (const int h : hits) CHECK(h == 1);

    std::atomic<int> ran{0};
    CHECK_THROWS_AS(parallel_for(50, 4,
                                 [&](int i) {
                                     ran.fetch_add(1);
                                     if (i == 13) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    CHECK(ran.load() >= 1);
}
