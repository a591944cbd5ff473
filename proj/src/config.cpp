// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

struct KeyValue {
    std::string key;
    std::string value;
    size_t line = 0;
};

struct RawSection {
    std::string name;
    size_t line = 0;
    std::vector<KeyValue> kvs;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(size_t line, const std::string& msg) {
    throw ConfigError("matrix line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

uint64_t parse_u64(std::string_view raw, size_t line) {
    std::string digits;
    for (char c : raw) {
        if (c == '_') continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            fail(line, "expected an unsigned integer, got '" + std::string(raw) + "'");
        }
        digits.push_back(c);
    }
    if (digits.empty()) fail(line, "expected an unsigned integer");
    errno = 0;
    char* end = nullptr;
    uint64_t v = std::strtoull(digits.c_str(), &end, 10);
    if (errno != 0 || end != digits.c_str() + digits.size()) fail(line, "integer out of range");
    return v;
}

uint32_t parse_u32(std::string_view raw, size_t line) {
    uint64_t v = parse_u64(raw, line);
    if (v > 0xffffffffull) fail(line, "value too large");
    return static_cast<uint32_t>(v);
}

bool parse_bool(std::string_view raw, size_t line) {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    fail(line, "expected true or false");
}

// One scenario section before cartesian expansion.
struct PendingScenario {
    ScenarioConfig base;
    std::vector<uint64_t> rows{};
    std::vector<Strategy> strategies{};
    std::vector<Field> fields{};
    // nullopt entry means the uniform page distribution.
    std::vector<std::optional<uint32_t>> pages{};
};

void apply_kv(PendingScenario& p, const KeyValue& kv) {
    ScenarioConfig& c = p.base;
    const std::string& k = kv.key;
    std::string_view v = kv.value;
    try {
        if (k == "rows") {
            p.rows.clear();
            for (const std::string& tok : split_ws(v)) p.rows.push_back(parse_u64(tok, kv.line));
            if (p.rows.empty()) fail(kv.line, "rows needs at least one value");
        } else if (k == "seed") {
            c.seed = parse_u64(v, kv.line);
        } else if (k == "cluster") {
            if (v == "none") c.clustered.reset();
            else c.clustered = parse_field(v);
        } else if (k == "index") {
            c.indices.clear();
            if (v != "none") {
                for (const std::string& tok : split_ws(v)) c.indices.push_back(parse_field(tok));
            }
        } else if (k == "strategy") {
            p.strategies.clear();
            for (const std::string& tok : split_ws(v)) p.strategies.push_back(parse_strategy(tok));
            if (p.strategies.empty()) fail(kv.line, "strategy needs at least one value");
        } else if (k == "field") {
            p.fields.clear();
            for (const std::string& tok : split_ws(v)) p.fields.push_back(parse_field(tok));
            if (p.fields.empty()) fail(kv.line, "field needs at least one value");
        } else if (k == "page") {
            p.pages.clear();
            for (const std::string& tok : split_ws(v)) {
                if (tok == "uniform") p.pages.push_back(std::nullopt);
                else p.pages.push_back(parse_u32(tok, kv.line));
            }
            if (p.pages.empty()) fail(kv.line, "page needs at least one value");
        } else if (k == "page_size") {
            c.page_size = parse_u32(v, kv.line);
        } else if (k == "trials") {
            c.trials = parse_u32(v, kv.line);
        } else if (k == "warmup") {
            c.warmup = parse_u32(v, kv.line);
        } else if (k == "bins") {
            c.bins = parse_u32(v, kv.line);
        } else if (k == "skip_mode") {
            c.skip_mode = parse_skip_mode(v);
        } else if (k == "budget_bytes") {
            c.budget.bytes = parse_u64(v, kv.line);
        } else if (k == "spill_dir") {
            c.spill.temp_dir = std::string(v);
        } else if (k == "spill_delay_ns_per_byte") {
            c.spill.delay_ns_per_byte = parse_u64(v, kv.line);
        } else if (k == "link") {
            if (v == "none") c.link.kind = LinkSpec::Kind::none;
            else if (v == "simulated") c.link.kind = LinkSpec::Kind::simulated;
            else if (v == "socket") c.link.kind = LinkSpec::Kind::socket;
            else fail(kv.line, "link must be none, simulated or socket");
        } else if (k == "connect") {
            size_t colon = v.rfind(':');
            if (colon == std::string_view::npos) fail(kv.line, "connect needs host:port");
            c.link.connect_host = std::string(v.substr(0, colon));
            c.link.connect_port = static_cast<uint16_t>(parse_u32(v.substr(colon + 1), kv.line));
        } else if (k == "latency_us") {
            c.link.model.latency = std::chrono::microseconds(parse_u64(v, kv.line));
        } else if (k == "bandwidth_bytes_per_sec") {
            c.link.model.bandwidth_bytes_per_sec = parse_u64(v, kv.line);
        } else if (k == "real_sleep") {
            c.link.model.real_sleep = parse_bool(v, kv.line);
        } else {
            fail(kv.line, "unknown key '" + k + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(kv.line, e.what());
    }
}

std::vector<ScenarioConfig> expand(const PendingScenario& p, const std::string& name) {
    std::vector<uint64_t> rows = p.rows.empty() ? std::vector<uint64_t>{p.base.rows} : p.rows;
    std::vector<Strategy> strategies =
        p.strategies.empty() ? std::vector<Strategy>{p.base.strategy} : p.strategies;
    std::vector<Field> fields = p.fields.empty() ? std::vector<Field>{p.base.sort_field} : p.fields;
    std::vector<std::optional<uint32_t>> pages;
    if (p.pages.empty()) {
        if (p.base.page_dist == ScenarioConfig::PageDist::fixed) pages.push_back(p.base.fixed_page);
        else pages.push_back(std::nullopt);
    } else {
        pages = p.pages;
    }

    std::vector<ScenarioConfig> out;
    for (uint64_t r : rows) {
        for (Strategy s : strategies) {
            for (Field f : fields) {
                for (const std::optional<uint32_t>& page : pages) {
                    ScenarioConfig c = p.base;
                    c.rows = r;
                    c.strategy = s;
                    c.sort_field = f;
                    if (page) {
                        c.page_dist = ScenarioConfig::PageDist::fixed;
                        c.fixed_page = *page;
                    } else {
                        c.page_dist = ScenarioConfig::PageDist::uniform;
                    }
                    std::string n = name;
                    if (rows.size() > 1) n += "-r" + std::to_string(r);
                    if (strategies.size() > 1) n += std::string("-") + strategy_name(s);
                    if (fields.size() > 1) n += std::string("-") + field_name(f);
                    if (pages.size() > 1) {
                        n += page ? "-p" + std::to_string(*page) : std::string("-uniform");
                    }
                    c.name = n;
                    out.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<ScenarioConfig> parse_matrix_text(std::string_view text,
                                              const ScenarioConfig& defaults) {
    std::vector<RawSection> sections;
    RawSection top;
    RawSection* current = &top;

    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) fail(line_no, "empty section name");
            sections.push_back(RawSection{std::string(name), line_no, {}});
            current = &sections.back();
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for '" + key + "'");
        current->kvs.push_back(KeyValue{std::move(key), std::move(value), line_no});
    }

    PendingScenario base;
    base.base = defaults;
    for (const KeyValue& kv : top.kvs) apply_kv(base, kv);

    std::vector<ScenarioConfig> out;
    if (sections.empty()) {
        for (ScenarioConfig& c : expand(base, defaults.name)) out.push_back(std::move(c));
        return out;
    }
    for (const RawSection& sec : sections) {
        PendingScenario p = base;
        for (const KeyValue& kv : sec.kvs) apply_kv(p, kv);
        for (ScenarioConfig& c : expand(p, sec.name)) out.push_back(std::move(c));
    }
    return out;
}

std::vector<ScenarioConfig> parse_matrix_file(const std::filesystem::path& path,
                                              const ScenarioConfig& defaults) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_matrix_text(text, defaults);
}

} // namespace pagebench
