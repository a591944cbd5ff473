// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <ostream>
#include <thread>

#include "pagebench/errors.hpp"
#include "pagebench/rng.hpp"

namespace pagebench {
namespace {

using Clock = std::chrono::steady_clock;

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::vector<double> rank_with_ties(const std::vector<double>& v) {
    size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&v](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

} // namespace

Histogram Histogram::build(const std::vector<uint64_t>& values, uint32_t bins) {
    if (bins == 0) throw ConfigError("histogram needs at least one bin");
    Histogram h;
    h.counts.assign(bins, 0);
    if (values.empty()) return h;
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    h.lo = *lo_it;
    h.hi = *hi_it;
    if (h.lo == h.hi) {
        h.counts[0] = values.size();
        return h;
    }
    double width = static_cast<double>(h.hi - h.lo);
    for (uint64_t v : values) {
        auto idx = static_cast<size_t>(static_cast<double>(v - h.lo) / width * bins);
        if (idx >= bins) idx = bins - 1;
        ++h.counts[idx];
    }
    return h;
}

uint32_t peak_count(const Histogram& h) {
    std::vector<uint64_t> merged;
    for (uint64_t c : h.counts) {
        if (merged.empty() || merged.back() != c) merged.push_back(c);
    }
    if (merged.empty()) return 0;
    uint32_t peaks = 0;
    for (size_t i = 0; i < merged.size(); ++i) {
        bool left_ok = i == 0 || merged[i] > merged[i - 1];
        bool right_ok = i + 1 == merged.size() || merged[i] > merged[i + 1];
        if (merged[i] > 0 && left_ok && right_ok) ++peaks;
    }
    return peaks;
}

uint64_t percentile(std::vector<uint64_t> values, double p) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    auto rank = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
    if (rank < 1) rank = 1;
    if (rank > values.size()) rank = values.size();
    return values[rank - 1];
}

double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return 0.0;
    std::vector<double> rx = rank_with_ties(x);
    std::vector<double> ry = rank_with_ties(y);
    size_t n = rx.size();
    double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double num = 0, dx = 0, dy = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (dx == 0 || dy == 0) return 0.0;
    return num / std::sqrt(dx * dy);
}

uint32_t ScenarioConfig::page_span() const {
    if (rows == 0 || page_size == 0) return 1;
    uint64_t span = (rows + page_size - 1) / page_size;
    if (span < 1) span = 1;
    if (span > 0xffffffffull) span = 0xffffffffull;
    return static_cast<uint32_t>(span);
}

std::string ScenarioConfig::index_label() const {
    std::string label;
    if (clustered) {
        label += "clustered:";
        label += field_name(*clustered);
    }
    for (Field f : indices) {
        if (!label.empty()) label += "+";
        label += "nc:";
        label += field_name(f);
    }
    return label.empty() ? "none" : label;
}

namespace {

struct ScenarioRig {
    Table table;
    std::unique_ptr<StoreServer> server;
    std::unique_ptr<StoreClient> client;
};

void run_one(const ScenarioConfig& cfg, ScenarioRig& rig, const PageRequest& req,
             CostReport& cost) {
    StrategyContext ctx{cfg.budget, cfg.spill};
    if (rig.client) {
        rig.client->run(cfg.strategy, req, ctx, cost);
        return;
    }
    run_strategy(cfg.strategy, rig.table, req, ctx, cost);
    if (cfg.link.kind == LinkSpec::Kind::simulated) {
        std::chrono::nanoseconds lc = cfg.link.model.cost(cost.bytes_crossing_tiers);
        if (cfg.link.model.real_sleep && lc.count() > 0) std::this_thread::sleep_for(lc);
        cost.elapsed += lc;
    }
}

ScenarioResult run_scenario_impl(const ScenarioConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.bins < 1) throw ConfigError("bins must be >= 1");
    if (cfg.page_size < 1) throw ConfigError("page_size must be >= 1");
    if (cfg.page_dist == ScenarioConfig::PageDist::fixed && cfg.fixed_page < 1) {
        throw ConfigError("fixed_page must be >= 1");
    }
    if (cfg.link.kind == LinkSpec::Kind::simulated &&
        cfg.link.model.bandwidth_bytes_per_sec == 0) {
        throw ConfigError("simulated link needs bandwidth > 0");
    }

    ScenarioResult res;
    res.config = cfg;

    ScenarioRig rig;
    bool remote = cfg.link.kind == LinkSpec::Kind::socket;
    bool external = remote && !cfg.link.connect_host.empty();
    if (!external) {
        if (cfg.clustered) rig.table.cluster_on(*cfg.clustered);
        for (Field f : cfg.indices) rig.table.add_index(f);
        rig.table.populate(cfg.rows, cfg.seed);
    }
    if (remote) {
        std::string host = cfg.link.connect_host;
        uint16_t port = cfg.link.connect_port;
        if (!external) {
            rig.server = std::make_unique<StoreServer>(
                rig.table, StoreServer::Config{cfg.budget, cfg.spill});
            host = "127.0.0.1";
            port = rig.server->port();
        }
        rig.client = std::make_unique<StoreClient>(host, port, cfg.link.model);
    }

    SplitMix64 pager(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto draw_page = [&]() -> uint32_t {
        if (cfg.page_dist == ScenarioConfig::PageDist::fixed) return cfg.fixed_page;
        return 1 + static_cast<uint32_t>(pager.next_below(cfg.page_span()));
    };

    PageRequest req;
    req.sort_field = cfg.sort_field;
    req.page_size = cfg.page_size;
    req.skip_mode = cfg.skip_mode;

    for (uint32_t w = 0; w < cfg.warmup; ++w) {
        req.page_number = draw_page();
        CostReport cost;
        run_one(cfg, rig, req, cost);
    }

    res.samples.reserve(cfg.trials);
    for (uint32_t t = 0; t < cfg.trials; ++t) {
        req.page_number = draw_page();
        CostReport cost;
        run_one(cfg, rig, req, cost);
        SampleRow s;
        s.trial = t;
        s.page = req.page_number;
        s.elapsed_ns = std::max<uint64_t>(1, static_cast<uint64_t>(cost.elapsed.count()));
        s.bytes = cost.bytes_crossing_tiers;
        s.spilled = cost.spill.spilled;
        res.samples.push_back(s);
    }

    std::vector<uint64_t> elapsed;
    elapsed.reserve(res.samples.size());
    double sum_ns = 0, sum_bytes = 0;
    for (const SampleRow& s : res.samples) {
        elapsed.push_back(s.elapsed_ns);
        sum_ns += static_cast<double>(s.elapsed_ns);
        sum_bytes += static_cast<double>(s.bytes);
    }
    res.hist = Histogram::build(elapsed, cfg.bins);
    res.mean_ns = sum_ns / static_cast<double>(res.samples.size());
    res.median_ns = percentile(elapsed, 50.0);
    res.p95_ns = percentile(elapsed, 95.0);
    res.peaks = peak_count(res.hist);
    res.mean_bytes = sum_bytes / static_cast<double>(res.samples.size());
    return res;
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    try {
        return run_scenario_impl(cfg);
    } catch (const std::exception& e) {
        ScenarioResult res;
        res.config = cfg;
        res.samples.clear();
        res.error = e.what();
        return res;
    }
}

std::vector<ScenarioResult> run_matrix(const std::vector<ScenarioConfig>& configs) {
    std::vector<ScenarioResult> results;
    results.reserve(configs.size());
    for (const ScenarioConfig& cfg : configs) results.push_back(run_scenario(cfg));
    return results;
}

void write_samples_csv(std::ostream& out, const std::vector<ScenarioResult>& results) {
    out << "scenario,trial,strategy,field,index,rows,page,elapsed_ns,bytes,spilled\n";
    for (const ScenarioResult& r : results) {
        const ScenarioConfig& c = r.config;
        std::string prefix = csv_escape(c.name);
        prefix += ',';
        for (const SampleRow& s : r.samples) {
            out << prefix << s.trial << ',' << strategy_name(c.strategy) << ','
                << field_name(c.sort_field) << ',' << c.index_label() << ',' << c.rows << ','
                << s.page << ',' << s.elapsed_ns << ',' << s.bytes << ',' << (s.spilled ? 1 : 0)
                << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<ScenarioResult>& results) {
    out << "scenario,strategy,field,index,rows,trials,mean_ns,median_ns,p95_ns,peak_count,"
           "mean_bytes,error\n";
    char buf[64];
    for (const ScenarioResult& r : results) {
        const ScenarioConfig& c = r.config;
        std::snprintf(buf, sizeof buf, "%.1f", r.mean_ns);
        out << csv_escape(c.name) << ',' << strategy_name(c.strategy) << ','
            << field_name(c.sort_field) << ',' << c.index_label() << ',' << c.rows << ','
            << r.samples.size() << ',' << buf << ',' << r.median_ns << ',' << r.p95_ns << ','
            << r.peaks;
        std::snprintf(buf, sizeof buf, "%.1f", r.mean_bytes);
        out << ',' << buf << ',' << csv_escape(r.error) << '\n';
    }
}

} // namespace pagebench
