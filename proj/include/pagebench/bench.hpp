// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pagebench/strategies.hpp"
#include "pagebench/transport.hpp"

namespace pagebench {

struct Histogram {
    uint64_t lo = 0;
    uint64_t hi = 0;
    std::vector<uint64_t> counts;

    // Equal-width bins over [min, max] of values. All values land in bin 0
    // when min == max.
    static Histogram build(const std::vector<uint64_t>& values, uint32_t bins);
};

// Local maxima after collapsing adjacent equal-count bins. A flat or single
// bin histogram counts as one peak; a bimodal latency profile counts as two.
uint32_t peak_count(const Histogram& h);

// Nearest-rank percentile over an unsorted sample, p in (0, 100].
uint64_t percentile(std::vector<uint64_t> values, double p);

double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y);

struct LinkSpec {
    enum class Kind { none, simulated, socket } kind = Kind::none;
    LinkModel model;
    // socket only: empty host spawns an in-process server.
    std::string connect_host;
    uint16_t connect_port = 0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    uint64_t rows = 100000;
    uint64_t seed = 42;
    std::optional<Field> clustered;
    std::vector<Field> indices;
    Strategy strategy = Strategy::adb;
    Field sort_field = Field::id;

    enum class PageDist { uniform, fixed } page_dist = PageDist::uniform;
    uint32_t fixed_page = 1;
    uint32_t page_size = 10;
    uint32_t trials = 500;
    uint32_t warmup = 5;
    uint32_t bins = 10;
    SkipMode skip_mode = SkipMode::corrected;
    MemoryBudget budget;
    SpillConfig spill;
    LinkSpec link;

    uint32_t page_span() const;  // highest page the uniform picker can draw
    std::string index_label() const;
};

struct SampleRow {
    uint32_t trial = 0;
    uint32_t page = 0;
    uint64_t elapsed_ns = 0;
    uint64_t bytes = 0;
    bool spilled = false;
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<SampleRow> samples;
    Histogram hist;
    double mean_ns = 0;
    uint64_t median_ns = 0;
    uint64_t p95_ns = 0;
    uint32_t peaks = 0;
    double mean_bytes = 0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

// Builds the table, wires up the link, runs warmup + trials with a
// deterministic page sequence, and summarizes.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Shares nothing between scenarios; a failure lands in that result's error
// field instead of stopping the sweep.
std::vector<ScenarioResult> run_matrix(const std::vector<ScenarioConfig>& configs);

void write_samples_csv(std::ostream& out, const std::vector<ScenarioResult>& results);
void write_summary_csv(std::ostream& out, const std::vector<ScenarioResult>& results);

} // namespace pagebench
