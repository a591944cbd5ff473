// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pagebench/config.hpp"
#include "pagebench/errors.hpp"

using namespace pagebench;

namespace {

ScenarioConfig defaults() {
    ScenarioConfig c;
    c.name = "base";
    return c;
}

} // namespace

TEST_CASE("empty text yields one default scenario") {
    std::vector<ScenarioConfig> v = parse_matrix_text("", defaults());
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "base");
    CHECK(v[0].rows == 100000);
    CHECK(v[0].strategy == Strategy::adb);
}

TEST_CASE("top level keys override defaults") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "rows = 5_000\n"
        "seed = 9\n"
        "strategy = seek\n"
        "field = DateField\n"
        "page_size = 25\n"
        "trials = 33\n"
        "warmup = 2\n"
        "bins = 12\n"
        "skip_mode = faithful\n"
        "budget_bytes = 1_000_000\n",
        defaults());
    REQUIRE(v.size() == 1);
    const ScenarioConfig& c = v[0];
    CHECK(c.rows == 5000);
    CHECK(c.seed == 9);
    CHECK(c.strategy == Strategy::seek);
    CHECK(c.sort_field == Field::date_field);
    CHECK(c.page_size == 25);
    CHECK(c.trials == 33);
    CHECK(c.warmup == 2);
    CHECK(c.bins == 12);
    CHECK(c.skip_mode == SkipMode::faithful);
    CHECK(c.budget.bytes == 1000000);
}

TEST_CASE("sections inherit the top level") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "rows = 1000\n"
        "trials = 7\n"
        "cluster = IntField\n"
        "index = ID TextField\n"
        "\n"
        "[fast]\n"
        "strategy = two_phase\n"
        "field = IntField\n"
        "\n"
        "[slow] # trailing comment\n"
        "strategy = adb\n"
        "rows = 2000\n",
        defaults());
    REQUIRE(v.size() == 2);
    CHECK(v[0].name == "fast");
    CHECK(v[0].rows == 1000);
    CHECK(v[0].trials == 7);
    CHECK(v[0].strategy == Strategy::two_phase);
    CHECK(v[0].sort_field == Field::int_field);
    REQUIRE(v[0].clustered.has_value());
    CHECK(*v[0].clustered == Field::int_field);
    REQUIRE(v[0].indices.size() == 2);
    CHECK(v[0].indices[0] == Field::id);
    CHECK(v[0].indices[1] == Field::text);
    CHECK(v[1].name == "slow");
    CHECK(v[1].rows == 2000);
    CHECK(v[1].strategy == Strategy::adb);
}

TEST_CASE("list values expand cartesian scenarios") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "[sweep]\n"
        "rows = 100 200\n"
        "strategy = adb seek\n",
        defaults());
    REQUIRE(v.size() == 4);
    CHECK(v[0].name == "sweep-r100-adb");
    CHECK(v[1].name == "sweep-r100-seek");
    CHECK(v[2].name == "sweep-r200-adb");
    CHECK(v[3].name == "sweep-r200-seek");
    CHECK(v[0].rows == 100);
    CHECK(v[3].strategy == Strategy::seek);
}

TEST_CASE("page lists mix fixed pages and uniform") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "[pages]\n"
        "page = 1 500 uniform\n",
        defaults());
    REQUIRE(v.size() == 3);
    CHECK(v[0].name == "pages-p1");
    CHECK(v[0].page_dist == ScenarioConfig::PageDist::fixed);
    CHECK(v[0].fixed_page == 1);
    CHECK(v[1].fixed_page == 500);
    CHECK(v[2].name == "pages-uniform");
    CHECK(v[2].page_dist == ScenarioConfig::PageDist::uniform);
}

TEST_CASE("single-valued lists add no suffix") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "[solo]\n"
        "rows = 123\n"
        "strategy = seek\n"
        "field = TextField\n"
        "page = uniform\n",
        defaults());
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "solo");
    CHECK(v[0].sort_field == Field::text);
}

TEST_CASE("link settings parse") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "[wire]\n"
        "link = socket\n"
        "connect = db.internal:5432\n"
        "latency_us = 250\n"
        "bandwidth_bytes_per_sec = 125_000_000\n"
        "real_sleep = true\n"
        "spill_dir = /tmp/spills\n"
        "spill_delay_ns_per_byte = 15\n",
        defaults());
    REQUIRE(v.size() == 1);
    const ScenarioConfig& c = v[0];
    CHECK(c.link.kind == LinkSpec::Kind::socket);
    CHECK(c.link.connect_host == "db.internal");
    CHECK(c.link.connect_port == 5432);
    CHECK(c.link.model.latency == std::chrono::microseconds(250));
    CHECK(c.link.model.bandwidth_bytes_per_sec == 125000000);
    CHECK(c.link.model.real_sleep);
    CHECK(c.spill.temp_dir == std::filesystem::path("/tmp/spills"));
    CHECK(c.spill.delay_ns_per_byte == 15);
}

TEST_CASE("cluster none clears an inherited cluster") {
    std::vector<ScenarioConfig> v = parse_matrix_text(
        "cluster = IntField\n"
        "[a]\n"
        "cluster = none\n"
        "[b]\n"
        "index = none\n",
        defaults());
    REQUIRE(v.size() == 2);
    CHECK_FALSE(v[0].clustered.has_value());
    REQUIRE(v[1].clustered.has_value());
    CHECK(v[1].indices.empty());
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_matrix_text("rows\n", defaults()),
                         "matrix line 1: expected key = value", ConfigError);
    CHECK_THROWS_WITH_AS(parse_matrix_text("\nrows = abc\n", defaults()),
                         "matrix line 2: expected an unsigned integer, got 'abc'", ConfigError);
    CHECK_THROWS_AS(parse_matrix_text("bogus_key = 3\n", defaults()), ConfigError);
    CHECK_THROWS_AS(parse_matrix_text("[unclosed\n", defaults()), ConfigError);
    CHECK_THROWS_AS(parse_matrix_text("[]\n", defaults()), ConfigError);
    CHECK_THROWS_AS(parse_matrix_text("rows =\n", defaults()), ConfigError);
    CHECK_THROWS_AS(parse_matrix_text("link = zeppelin\n", defaults()), ConfigError);
    CHECK_THROWS_AS(parse_matrix_text("strategy = quicksort\n", defaults()), ConfigError);
}

TEST_CASE("matrix files load and missing files fail") {
    namespace fs = std::filesystem;
    fs::path p = fs::temp_directory_path() / "pagebench-matrix-test.toml";
    {
        std::ofstream out(p);
        out << "[filed]\nrows = 42\n";
    }
    std::vector<ScenarioConfig> v = parse_matrix_file(p.string(), defaults());
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "filed");
    CHECK(v[0].rows == 42);
    fs::remove(p);
    CHECK_THROWS_AS(parse_matrix_file(p.string(), defaults()), ConfigError);
}
