// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pagebench/bench.hpp"
#include "pagebench/config.hpp"
#include "pagebench/errors.hpp"
#include "pagebench/loadgen.hpp"
#include "pagebench/rng.hpp"
#include "pagebench/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pagebench;

namespace {

struct TableFlags {
    uint64_t rows = 100000;
    uint64_t seed = 42;
    std::string cluster;
    std::vector<std::string> index;
    std::string table_file;

    void add_to(CLI::App* cmd, bool with_file) {
        cmd->add_option("--rows", rows, "Row count");
        cmd->add_option("--seed", seed, "Generator seed");
        cmd->add_option("--cluster", cluster, "Clustered index field (or 'none')");
        cmd->add_option("--index", index, "Non-clustered index field, repeatable");
        if (with_file) cmd->add_option("--table", table_file, "Load a .pgb dump instead");
    }

    Table build() const {
        Table t;
        if (!table_file.empty()) {
            t = Table::load(table_file);
        }
        if (!cluster.empty() && cluster != "none") t.cluster_on(parse_field(cluster));
        for (const std::string& f : index) t.add_index(parse_field(f));
        if (table_file.empty()) t.populate(rows, seed);
        return t;
    }
};

std::pair<std::string, uint16_t> parse_host_port(const std::string& s, const char* flag) {
    size_t colon = s.rfind(':');
    if (colon == std::string::npos) throw ConfigError(std::string(flag) + " needs host:port");
    std::string host = s.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
        throw ConfigError(std::string(flag) + " has a bad port");
    }
    if (port < 0 || port > 65535) throw ConfigError(std::string(flag) + " has a bad port");
    return {host, static_cast<uint16_t>(port)};
}

json scenario_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["rows"] = c.rows;
    j["seed"] = c.seed;
    j["cluster"] = c.clustered ? json(field_name(*c.clustered)) : json(nullptr);
    json idx = json::array();
    for (Field f : c.indices) idx.push_back(field_name(f));
    j["index"] = idx;
    j["strategy"] = strategy_name(c.strategy);
    j["field"] = field_name(c.sort_field);
    j["page"] = c.page_dist == ScenarioConfig::PageDist::fixed ? json(c.fixed_page)
                                                               : json("uniform");
    j["page_size"] = c.page_size;
    j["trials"] = c.trials;
    j["warmup"] = c.warmup;
    j["bins"] = c.bins;
    j["skip_mode"] = skip_mode_name(c.skip_mode);
    j["budget_bytes"] = c.budget.bytes;
    j["spill_dir"] = c.spill.temp_dir.string();
    j["spill_delay_ns_per_byte"] = c.spill.delay_ns_per_byte;
    const char* kind = c.link.kind == LinkSpec::Kind::none        ? "none"
                       : c.link.kind == LinkSpec::Kind::simulated ? "simulated"
                                                                  : "socket";
    j["link"] = {{"kind", kind},
                 {"connect", c.link.connect_host.empty()
                                 ? json(nullptr)
                                 : json(c.link.connect_host + ":" +
                                        std::to_string(c.link.connect_port))},
                 {"latency_us",
                  std::chrono::duration_cast<std::chrono::microseconds>(c.link.model.latency)
                      .count()},
                 {"bandwidth_bytes_per_sec", c.link.model.bandwidth_bytes_per_sec},
                 {"real_sleep", c.link.model.real_sleep}};
    return j;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

// ---- gen ----

struct GenArgs {
    TableFlags table;
    std::string out;
};

int run_gen(const GenArgs& a) {
    Table t;
    if (!a.table.cluster.empty() && a.table.cluster != "none") {
        t.cluster_on(parse_field(a.table.cluster));
    }
    t.populate(a.table.rows, a.table.seed);
    t.save(a.out);
    std::cout << "wrote " << t.row_count() << " rows, " << t.total_encoded_bytes()
              << " data bytes, to " << a.out << "\n";
    return 0;
}

// ---- bench ----

struct BenchArgs {
    ScenarioConfig defaults;
    std::string page = "uniform";
    std::string cluster;
    std::vector<std::string> index;
    std::string skip_mode = "corrected";
    std::string link = "none";
    std::string connect;
    std::string spill_dir;
    uint64_t latency_us = 0;
    uint64_t bandwidth = 0;
    bool real_sleep = false;
    std::string matrix;
    std::string out = "bench-out";
    std::string strategy = "adb";
    std::string field = "ID";
};

ScenarioConfig resolve_bench_defaults(const BenchArgs& a) {
    ScenarioConfig c = a.defaults;
    c.strategy = parse_strategy(a.strategy);
    c.sort_field = parse_field(a.field);
    if (a.cluster.empty() || a.cluster == "none") c.clustered.reset();
    else c.clustered = parse_field(a.cluster);
    c.indices.clear();
    for (const std::string& f : a.index) c.indices.push_back(parse_field(f));
    if (a.page == "uniform") {
        c.page_dist = ScenarioConfig::PageDist::uniform;
    } else {
        c.page_dist = ScenarioConfig::PageDist::fixed;
        try {
            c.fixed_page = static_cast<uint32_t>(std::stoul(a.page));
        } catch (const std::exception&) {
            throw ConfigError("--page must be 'uniform' or a page number");
        }
    }
    c.skip_mode = parse_skip_mode(a.skip_mode);
    c.spill.temp_dir = a.spill_dir;
    if (a.link == "none") c.link.kind = LinkSpec::Kind::none;
    else if (a.link == "simulated") c.link.kind = LinkSpec::Kind::simulated;
    else if (a.link == "socket") c.link.kind = LinkSpec::Kind::socket;
    else throw ConfigError("--link must be none, simulated or socket");
    if (!a.connect.empty()) {
        auto [host, port] = parse_host_port(a.connect, "--connect");
        c.link.connect_host = host;
        c.link.connect_port = port;
    }
    c.link.model.latency = std::chrono::microseconds(a.latency_us);
    c.link.model.bandwidth_bytes_per_sec = a.bandwidth;
    c.link.model.real_sleep = a.real_sleep;
    return c;
}

int run_bench(const BenchArgs& a) {
    ScenarioConfig defaults = resolve_bench_defaults(a);
    std::vector<ScenarioConfig> configs;
    if (!a.matrix.empty()) {
        configs = parse_matrix_file(a.matrix, defaults);
    } else {
        configs.push_back(defaults);
    }

    fs::create_directories(a.out);
    std::vector<ScenarioResult> results = run_matrix(configs);

    {
        std::ofstream samples(fs::path(a.out) / "samples.csv", std::ios::trunc);
        if (!samples) throw IoError("cannot write samples.csv");
        write_samples_csv(samples, results);
    }
    {
        std::ofstream summary(fs::path(a.out) / "summary.csv", std::ios::trunc);
        if (!summary) throw IoError("cannot write summary.csv");
        write_summary_csv(summary, results);
    }
    json manifest;
    manifest["command"] = "bench";
    manifest["matrix"] = a.matrix.empty() ? json(nullptr) : json(a.matrix);
    manifest["outputs"] = {"samples.csv", "summary.csv"};
    json scenarios = json::array();
    for (const ScenarioConfig& c : configs) scenarios.push_back(scenario_json(c));
    manifest["scenarios"] = scenarios;
    write_text_file(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");

    for (const ScenarioResult& r : results) {
        if (r.ok()) {
            std::cout << r.config.name << ": mean " << static_cast<uint64_t>(r.mean_ns)
                      << " ns, median " << r.median_ns << " ns, p95 " << r.p95_ns << " ns, peaks "
                      << r.peaks << "\n";
        } else {
            std::cout << r.config.name << ": error: " << r.error << "\n";
        }
    }
    std::cout << "results in " << a.out << "\n";
    return 0;
}

// ---- serve ----

struct ServeArgs {
    TableFlags table;
    std::string listen = "0.0.0.0:0";
    uint64_t budget_bytes = MemoryBudget{}.bytes;
    std::string spill_dir;
    uint64_t spill_delay = 0;
    uint64_t duration_s = 0;
};

int run_serve(const ServeArgs& a) {
    Table t = a.table.build();
    auto [host, port] = parse_host_port(a.listen, "--listen");
    (void)host;
    StoreServer::Config cfg;
    cfg.budget.bytes = a.budget_bytes;
    cfg.spill.temp_dir = a.spill_dir;
    cfg.spill.delay_ns_per_byte = a.spill_delay;
    StoreServer server(t, cfg, port);
    std::cout << "serving " << t.row_count() << " rows on port " << server.port() << std::endl;
    if (a.duration_s == 0) {
        while (true) std::this_thread::sleep_for(std::chrono::hours(24));
    }
    std::this_thread::sleep_for(std::chrono::seconds(a.duration_s));
    server.stop();
    return 0;
}

// ---- loadtest ----

struct LoadArgs {
    TableFlags table;
    std::string strategy = "seek";
    std::string field = "ID";
    uint32_t page_size = 10;
    uint64_t budget_bytes = MemoryBudget{}.bytes;
    std::string spill_dir;
    uint64_t spill_delay = 0;
    std::string connect;
    LoadProfile profile;
    uint64_t step_interval_s = 60;
    uint64_t ramp_s = 600;
    uint64_t cooldown_s = 120;
    std::string out = "load-out";
};

int run_loadtest(const LoadArgs& a) {
    LoadProfile profile = a.profile;
    profile.step_interval = std::chrono::seconds(a.step_interval_s);
    profile.ramp_duration = std::chrono::seconds(a.ramp_s);
    profile.cooldown = std::chrono::seconds(a.cooldown_s);

    Strategy strategy = parse_strategy(a.strategy);
    Field field = parse_field(a.field);
    StrategyContext ctx;
    ctx.budget.bytes = a.budget_bytes;
    ctx.spill.temp_dir = a.spill_dir;
    ctx.spill.delay_ns_per_byte = a.spill_delay;

    uint32_t users = profile.max_users();
    std::vector<SplitMix64> pagers;
    pagers.reserve(users);
    for (uint32_t w = 0; w < users; ++w) pagers.emplace_back(a.table.seed ^ (w + 1));
    uint64_t span = (a.table.rows + a.page_size - 1) / a.page_size;
    if (span < 1) span = 1;

    Table t;
    std::vector<std::unique_ptr<StoreClient>> clients;
    if (a.connect.empty()) {
        t = a.table.build();
    } else {
        auto [host, port] = parse_host_port(a.connect, "--connect");
        for (uint32_t w = 0; w < users; ++w) {
            clients.push_back(std::make_unique<StoreClient>(host, port));
        }
    }

    auto target = [&](uint32_t w) {
        PageRequest req;
        req.sort_field = field;
        req.page_size = a.page_size;
        req.page_number = 1 + static_cast<uint32_t>(pagers[w].next_below(span));
        CostReport cost;
        if (clients.empty()) {
            run_strategy(strategy, t, req, ctx, cost);
        } else {
            clients[w]->run(strategy, req, ctx, cost);
        }
    };

    LoadReport report = run_load(profile, target);

    fs::create_directories(a.out);
    {
        std::ofstream csv(fs::path(a.out) / "loadtest.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot write loadtest.csv");
        write_load_csv(csv, report);
    }
    json manifest;
    manifest["command"] = "loadtest";
    manifest["target"] = {{"rows", a.table.rows},
                          {"seed", a.table.seed},
                          {"cluster", a.table.cluster.empty() ? json(nullptr)
                                                              : json(a.table.cluster)},
                          {"index", a.table.index},
                          {"strategy", strategy_name(strategy)},
                          {"field", field_name(field)},
                          {"page_size", a.page_size},
                          {"budget_bytes", a.budget_bytes},
                          {"connect", a.connect.empty() ? json(nullptr) : json(a.connect)}};
    manifest["profile"] = {{"initial_users", profile.initial_users},
                           {"step_users", profile.step_users},
                           {"step_interval_s", a.step_interval_s},
                           {"ramp_s", a.ramp_s},
                           {"cooldown_s", a.cooldown_s},
                           {"time_scale", profile.time_scale}};
    manifest["outputs"] = {"loadtest.csv"};
    manifest["valid"] = report.valid;
    manifest["error"] = report.error;
    write_text_file(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");

    if (!report.valid) {
        std::cerr << "load test invalid: " << report.error << "\n";
        return 2;
    }
    std::cout << report.total_requests << " requests, " << report.total_errors << " errors, "
              << report.intervals.size() << " intervals; results in " << a.out << "\n";
    return 0;
}

// ---- report ----

struct ReportArgs {
    std::string samples;
    uint32_t bins = 10;
    std::string out;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

int run_report(const ReportArgs& a) {
    std::ifstream in(a.samples);
    if (!in) throw IoError("cannot open " + a.samples);
    std::string line;
    if (!std::getline(in, line) ||
        line != "scenario,trial,strategy,field,index,rows,page,elapsed_ns,bytes,spilled") {
        throw ConfigError("unrecognized samples header in " + a.samples);
    }

    struct Group {
        std::string strategy, field, index, rows;
        std::vector<uint64_t> elapsed;
        double sum_bytes = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Group> groups;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 10) {
            throw ConfigError(a.samples + " line " + std::to_string(line_no) +
                              ": expected 10 fields");
        }
        auto [it, fresh] = groups.try_emplace(f[0]);
        if (fresh) {
            order.push_back(f[0]);
            it->second.strategy = f[2];
            it->second.field = f[3];
            it->second.index = f[4];
            it->second.rows = f[5];
        }
        try {
            it->second.elapsed.push_back(std::stoull(f[7]));
            it->second.sum_bytes += std::stod(f[8]);
        } catch (const std::exception&) {
            throw ConfigError(a.samples + " line " + std::to_string(line_no) + ": bad number");
        }
    }

    std::ostringstream out;
    out << "scenario,strategy,field,index,rows,trials,mean_ns,median_ns,p95_ns,peak_count,"
           "mean_bytes,error\n";
    char buf[64];
    for (const std::string& name : order) {
        const Group& g = groups[name];
        double sum = 0;
        for (uint64_t v : g.elapsed) sum += static_cast<double>(v);
        size_t n = g.elapsed.size();
        Histogram h = Histogram::build(g.elapsed, a.bins);
        std::string quoted = name;
        if (quoted.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char c : quoted) {
                if (c == '"') q += "\"\"";
                else q.push_back(c);
            }
            quoted = q + "\"";
        }
        std::snprintf(buf, sizeof buf, "%.1f", n ? sum / static_cast<double>(n) : 0.0);
        out << quoted << ',' << g.strategy << ',' << g.field << ',' << g.index << ',' << g.rows
            << ',' << n << ',' << buf << ',' << percentile(g.elapsed, 50.0) << ','
            << percentile(g.elapsed, 95.0) << ',' << peak_count(h);
        std::snprintf(buf, sizeof buf, "%.1f", n ? g.sum_bytes / static_cast<double>(n) : 0.0);
        out << ',' << buf << ",\n";
    }

    if (a.out.empty()) {
        std::cout << out.str();
    } else {
        write_text_file(a.out, out.str());
        std::cout << "wrote " << a.out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pagination strategy testbed: row store, spilling sorts, wire protocol, "
                 "benchmarks and load generation"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a table dump file");
    gen->alias("generate");
    gen_args.table.add_to(gen, false);
    gen->add_option("--out", gen_args.out, "Output .pgb file")->required();

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Run benchmark scenarios");
    bench->add_option("--name", bench_args.defaults.name, "Scenario name");
    bench->add_option("--rows", bench_args.defaults.rows, "Row count");
    bench->add_option("--seed", bench_args.defaults.seed, "Generator seed");
    bench->add_option("--cluster", bench_args.cluster, "Clustered index field (or 'none')");
    bench->add_option("--index", bench_args.index, "Non-clustered index field, repeatable");
    bench->add_option("--strategy", bench_args.strategy, "adb | seek | two_phase");
    bench->add_option("--field", bench_args.field, "Sort field");
    bench->add_option("--page", bench_args.page, "'uniform' or a fixed page number");
    bench->add_option("--page-size", bench_args.defaults.page_size, "Rows per page");
    bench->add_option("--trials", bench_args.defaults.trials, "Timed requests per scenario");
    bench->add_option("--warmup", bench_args.defaults.warmup, "Untimed requests per scenario");
    bench->add_option("--bins", bench_args.defaults.bins, "Histogram bins");
    bench->add_option("--skip-mode", bench_args.skip_mode, "corrected | faithful");
    bench->add_option("--budget-bytes", bench_args.defaults.budget.bytes, "Sort memory budget");
    bench->add_option("--spill-dir", bench_args.spill_dir, "Directory for spill runs");
    bench->add_option("--spill-delay-ns-per-byte", bench_args.defaults.spill.delay_ns_per_byte,
                      "Synthetic device cost for spill I/O");
    bench->add_option("--link", bench_args.link, "none | simulated | socket");
    bench->add_option("--connect", bench_args.connect, "host:port of an external store server");
    bench->add_option("--latency-us", bench_args.latency_us, "Link round-trip latency");
    bench->add_option("--bandwidth-bytes-per-sec", bench_args.bandwidth, "Link bandwidth");
    bench->add_flag("--real-sleep", bench_args.real_sleep, "Sleep link cost instead of adding");
    bench->add_option("--matrix", bench_args.matrix, "Scenario matrix file");
    bench->add_option("--out", bench_args.out, "Output directory");

    ServeArgs serve_args;
    CLI::App* serve = app.add_subcommand("serve", "Run a store server");
    serve_args.table.add_to(serve, true);
    serve->add_option("--listen", serve_args.listen, "host:port to bind (port 0 = ephemeral)");
    serve->add_option("--budget-bytes", serve_args.budget_bytes, "Sort memory budget");
    serve->add_option("--spill-dir", serve_args.spill_dir, "Directory for spill runs");
    serve->add_option("--spill-delay-ns-per-byte", serve_args.spill_delay,
                      "Synthetic device cost for spill I/O");
    serve->add_option("--duration-s", serve_args.duration_s, "Stop after N seconds (0 = run)");

    LoadArgs load_args;
    CLI::App* load = app.add_subcommand("loadtest", "Run a ramped closed-loop load test");
    load_args.table.add_to(load, false);
    load->add_option("--strategy", load_args.strategy, "adb | seek | two_phase");
    load->add_option("--field", load_args.field, "Sort field");
    load->add_option("--page-size", load_args.page_size, "Rows per page");
    load->add_option("--budget-bytes", load_args.budget_bytes, "Sort memory budget");
    load->add_option("--spill-dir", load_args.spill_dir, "Directory for spill runs");
    load->add_option("--spill-delay-ns-per-byte", load_args.spill_delay,
                     "Synthetic device cost for spill I/O");
    load->add_option("--connect", load_args.connect, "host:port of an external store server");
    load->add_option("--initial-users", load_args.profile.initial_users, "Starting users");
    load->add_option("--step-users", load_args.profile.step_users, "Users added per interval");
    load->add_option("--step-interval-s", load_args.step_interval_s, "Interval length, seconds");
    load->add_option("--ramp-s", load_args.ramp_s, "Ramp duration, seconds");
    load->add_option("--cooldown-s", load_args.cooldown_s, "Cool-down budget, seconds");
    load->add_option("--time-scale", load_args.profile.time_scale, "Duration divisor");
    load->add_option("--out", load_args.out, "Output directory");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "Summarize a samples.csv");
    report->add_option("--samples", report_args.samples, "samples.csv path")->required();
    report->add_option("--bins", report_args.bins, "Histogram bins");
    report->add_option("--out", report_args.out, "Summary CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (bench->parsed()) return run_bench(bench_args);
        if (serve->parsed()) return run_serve(serve_args);
        if (load->parsed()) return run_loadtest(load_args);
        if (report->parsed()) return run_report(report_args);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
