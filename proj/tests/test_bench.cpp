// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pagebench/bench.hpp"
#include "pagebench/errors.hpp"
#include "support/oracle.hpp"

using namespace pagebench;

namespace {

Histogram hist_of(std::vector<uint64_t> counts) {
    Histogram h;
    h.lo = 0;
    h.hi = 100;
    h.counts = std::move(counts);
    return h;
}

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.rows = 1500;
    c.seed = 11;
    c.trials = 12;
    c.warmup = 2;
    c.strategy = Strategy::seek;
    c.sort_field = Field::int_field;
    return c;
}

} // namespace

TEST_CASE("histogram build spreads values over equal bins") {
    std::vector<uint64_t> values;
    for (uint64_t v = 0; v < 100; ++v) values.push_back(v);
    Histogram h = Histogram::build(values, 10);
    CHECK(h.lo == 0);
    CHECK(h.hi == 99);
    REQUIRE(h.counts.size() == 10);
    for (uint64_t c : h.counts) CHECK(c == 10);
}

TEST_CASE("histogram puts the maximum in the last bin") {
    Histogram h = Histogram::build({10, 20}, 4);
    CHECK(h.counts.front() == 1);
    CHECK(h.counts.back() == 1);
}

TEST_CASE("histogram with equal values uses bin zero") {
    Histogram h = Histogram::build({7, 7, 7}, 5);
    REQUIRE(h.counts.size() == 5);
    CHECK(h.counts[0] == 3);
    for (size_t i = 1; i < 5; ++i) CHECK(h.counts[i] == 0);
}

TEST_CASE("histogram rejects zero bins and handles empty input") {
    CHECK_THROWS_AS(Histogram::build({1, 2}, 0), ConfigError);
    Histogram h = Histogram::build({}, 3);
    REQUIRE(h.counts.size() == 3);
    for (uint64_t c : h.counts) CHECK(c == 0);
}

TEST_CASE("peak_count identifies modes") {
    CHECK(peak_count(hist_of({5, 1, 5})) == 2);
    CHECK(peak_count(hist_of({1, 5, 1})) == 1);
    CHECK(peak_count(hist_of({5, 5, 5})) == 1);
    CHECK(peak_count(hist_of({1, 2, 3})) == 1);
    CHECK(peak_count(hist_of({3, 2, 1})) == 1);
    CHECK(peak_count(hist_of({1, 3, 1, 3, 1})) == 2);
    CHECK(peak_count(hist_of({2, 2, 1, 3})) == 2);
    CHECK(peak_count(hist_of({4})) == 1);
    CHECK(peak_count(hist_of({0, 0, 0})) == 0);
    CHECK(peak_count(hist_of({1, 2, 2, 1, 0, 9, 9, 9})) == 2);
    CHECK(peak_count(hist_of({})) == 0);
}

TEST_CASE("percentile is nearest rank") {
    std::vector<uint64_t> v;
    for (uint64_t i = 1; i <= 100; ++i) v.push_back(101 - i);
    CHECK(percentile(v, 50) == 50);
    CHECK(percentile(v, 95) == 95);
    CHECK(percentile(v, 100) == 100);
    CHECK(percentile(v, 1) == 1);
    CHECK(percentile({42}, 50) == 42);
    CHECK(percentile({}, 50) == 0);
    CHECK(percentile({3, 1}, 50) == 1);
    CHECK(percentile({3, 1}, 75) == 3);
}

TEST_CASE("spearman correlation on known data") {
    CHECK(spearman_rank_correlation({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman_rank_correlation({1, 2, 3, 4}, {40, 30, 20, 10}) == doctest::Approx(-1.0));
    CHECK(spearman_rank_correlation({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK(spearman_rank_correlation({1, 2}, {5}) == doctest::Approx(0.0));
}

TEST_CASE("page_span covers the table") {
    ScenarioConfig c;
    c.rows = 95;
    c.page_size = 10;
    CHECK(c.page_span() == 10);
    c.rows = 100;
    CHECK(c.page_span() == 10);
    c.rows = 0;
    CHECK(c.page_span() == 1);
    c.rows = 5;
    CHECK(c.page_span() == 1);
}

TEST_CASE("index labels") {
    ScenarioConfig c;
    CHECK(c.index_label() == "none");
    c.clustered = Field::int_field;
    CHECK(c.index_label() == "clustered:IntField");
    c.indices = {Field::id, Field::text};
    CHECK(c.index_label() == "clustered:IntField+nc:ID+nc:TextField");
    c.clustered.reset();
    CHECK(c.index_label() == "nc:ID+nc:TextField");
}

TEST_CASE("scenario runs are deterministic in pages and bytes") {
    ScenarioConfig c = small_config();
    ScenarioResult a = run_scenario(c);
    ScenarioResult b = run_scenario(c);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    REQUIRE(a.samples.size() == c.trials);
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].page == b.samples[i].page);
        CHECK(a.samples[i].bytes == b.samples[i].bytes);
        CHECK(a.samples[i].elapsed_ns >= 1);
    }
}

TEST_CASE("uniform pages stay inside the span") {
    ScenarioConfig c = small_config();
    c.trials = 200;
    ScenarioResult r = run_scenario(c);
    REQUIRE(r.ok());
    for (const SampleRow& s : r.samples) {
        CHECK(s.page >= 1);
        CHECK(s.page <= c.page_span());
    }
}

TEST_CASE("fixed page scenarios hammer one page") {
    ScenarioConfig c = small_config();
    c.page_dist = ScenarioConfig::PageDist::fixed;
    c.fixed_page = 7;
    ScenarioResult r = run_scenario(c);
    REQUIRE(r.ok());
    for (const SampleRow& s : r.samples) CHECK(s.page == 7);
}

TEST_CASE("scenario failures land in the error field") {
    ScenarioConfig c = small_config();
    c.strategy = Strategy::two_phase;  // no index on the sort field
    ScenarioResult r = run_scenario(c);
    CHECK_FALSE(r.ok());
    CHECK(r.error.find("access path") != std::string::npos);

    ScenarioConfig sim = small_config();
    sim.link.kind = LinkSpec::Kind::simulated;
    sim.link.model.bandwidth_bytes_per_sec = 0;
    r = run_scenario(sim);
    CHECK_FALSE(r.ok());
}

TEST_CASE("simulated link adds its cost to every sample") {
    ScenarioConfig plain = small_config();
    plain.trials = 10;
    ScenarioConfig linked = plain;
    linked.link.kind = LinkSpec::Kind::simulated;
    linked.link.model.latency = std::chrono::milliseconds(5);
    linked.link.model.bandwidth_bytes_per_sec = 1000000000;
    ScenarioResult r = run_scenario(linked);
    REQUIRE(r.ok());
    for (const SampleRow& s : r.samples) CHECK(s.elapsed_ns >= 5000000);
}

TEST_CASE("socket scenarios spawn an in-process server") {
    ScenarioConfig c = small_config();
    c.trials = 8;
    c.clustered = Field::int_field;
    c.strategy = Strategy::two_phase;
    c.link.kind = LinkSpec::Kind::socket;
    ScenarioResult r = run_scenario(c);
    REQUIRE(r.ok());
    ScenarioConfig local = c;
    local.link.kind = LinkSpec::Kind::none;
    ScenarioResult l = run_scenario(local);
    REQUIRE(l.ok());
    for (size_t i = 0; i < r.samples.size(); ++i) {
        CHECK(r.samples[i].page == l.samples[i].page);
        CHECK(r.samples[i].bytes > l.samples[i].bytes);  // wire framing counted
    }
}

TEST_CASE("matrix of four configs yields full csv output") {
    std::vector<ScenarioConfig> configs;
    for (Strategy s : {Strategy::adb, Strategy::seek}) {
        for (uint64_t rows : {400ull, 800ull}) {
            ScenarioConfig c;
            c.name = std::string(strategy_name(s)) + "-" + std::to_string(rows);
            c.rows = rows;
            c.seed = 3;
            c.strategy = s;
            c.sort_field = Field::date_field;
            c.trials = 5;
            c.warmup = 1;
            configs.push_back(c);
        }
    }
    std::vector<ScenarioResult> results = run_matrix(configs);
    REQUIRE(results.size() == 4);
    for (const ScenarioResult& r : results) REQUIRE(r.ok());

    std::ostringstream samples, summary;
    write_samples_csv(samples, results);
    write_summary_csv(summary, results);

    std::istringstream sin(samples.str());
    std::string line;
    std::getline(sin, line);
    CHECK(line == "scenario,trial,strategy,field,index,rows,page,elapsed_ns,bytes,spilled");
    size_t sample_lines = 0;
    while (std::getline(sin, line)) {
        if (!line.empty()) ++sample_lines;
    }
    CHECK(sample_lines == 20);

    std::istringstream min(summary.str());
    std::getline(min, line);
    CHECK(line ==
          "scenario,strategy,field,index,rows,trials,mean_ns,median_ns,p95_ns,peak_count,"
          "mean_bytes,error");
    size_t summary_lines = 0;
    while (std::getline(min, line)) {
        if (!line.empty()) ++summary_lines;
    }
    CHECK(summary_lines == 4);
}

TEST_CASE("summary statistics come from the samples") {
    ScenarioConfig c = small_config();
    ScenarioResult r = run_scenario(c);
    REQUIRE(r.ok());
    std::vector<uint64_t> elapsed;
    double sum = 0;
    for (const SampleRow& s : r.samples) {
        elapsed.push_back(s.elapsed_ns);
        sum += static_cast<double>(s.elapsed_ns);
    }
    CHECK(r.mean_ns == doctest::Approx(sum / static_cast<double>(elapsed.size())));
    CHECK(r.median_ns == percentile(elapsed, 50));
    CHECK(r.p95_ns == percentile(elapsed, 95));
    CHECK(r.peaks == peak_count(r.hist));
    REQUIRE(r.hist.counts.size() == c.bins);
}
