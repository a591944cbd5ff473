// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/strategies.hpp"

#include <algorithm>
#include <iterator>

#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

using Clock = std::chrono::steady_clock;

uint64_t bytes_of(const std::vector<Row>& rows) {
    uint64_t total = 0;
    for (const Row& r : rows) total += encoded_size(r);
    return total;
}

std::vector<Row> slice(std::vector<Row>&& sorted, uint64_t offset, uint64_t count) {
    if (offset >= sorted.size()) return {};
    auto first = sorted.begin() + static_cast<ptrdiff_t>(offset);
    auto last = sorted.begin() +
                static_cast<ptrdiff_t>(std::min<uint64_t>(sorted.size(), offset + count));
    return std::vector<Row>(std::make_move_iterator(first), std::make_move_iterator(last));
}

// Boundary key for pages past the first: the largest key among the first
// min(skip, n) entries in sort order.
SortKey boundary_from_path(const AccessPath& path, uint64_t skip) {
    return path.nth_key(static_cast<size_t>(std::min<uint64_t>(skip, path.size())) - 1);
}

} // namespace

const char* skip_mode_name(SkipMode m) {
    return m == SkipMode::faithful ? "faithful" : "corrected";
}

SkipMode parse_skip_mode(std::string_view name) {
    if (name == "corrected") return SkipMode::corrected;
    if (name == "faithful") return SkipMode::faithful;
    throw ConfigError("unknown skip mode: " + std::string(name));
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::adb: return "adb";
        case Strategy::seek: return "seek";
        case Strategy::two_phase: return "two_phase";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "adb") return Strategy::adb;
    if (name == "seek") return Strategy::seek;
    if (name == "two_phase" || name == "twophase" || name == "two-phase") {
        return Strategy::two_phase;
    }
    throw ConfigError("unknown strategy: " + std::string(name));
}

void validate_page_request(const PageRequest& req) {
    if (req.page_number < 1) throw ConfigError("page_number must be >= 1");
    if (req.page_size < 1) throw ConfigError("page_size must be >= 1");
}

uint64_t skip_count(const PageRequest& req) {
    if (req.page_number == 1) return 0;
    uint64_t pages = req.skip_mode == SkipMode::faithful
                         ? static_cast<uint64_t>(req.page_number)
                         : static_cast<uint64_t>(req.page_number) - 1;
    return pages * req.page_size;
}

std::vector<Row> oracle_page(const Table& table, const PageRequest& req) {
    validate_page_request(req);
    std::vector<Row> all = table.rows();
    sort_rows_by(all, req.sort_field);
    return slice(std::move(all), skip_count(req), req.page_size);
}

std::vector<Row> adb_page(const Table& table, const PageRequest& req, const StrategyContext& ctx,
                          CostReport& cost) {
    validate_page_request(req);
    cost = {};
    Clock::time_point t0 = Clock::now();

    std::vector<Row> all = table.rows();
    cost.rows_fetched_from_store = all.size();
    cost.bytes_crossing_tiers = table.total_encoded_bytes();
    cost.spill = budgeted_sort(all, req.sort_field, ctx.budget, ctx.spill);

    // Slices the sorted result directly, so the skip mode never shifts it.
    uint64_t offset = static_cast<uint64_t>(req.page_number - 1) * req.page_size;
    std::vector<Row> page = slice(std::move(all), offset, req.page_size);

    cost.elapsed = Clock::now() - t0;
    return page;
}

std::vector<Row> seek_page(const Table& table, const PageRequest& req, const StrategyContext& ctx,
                           CostReport& cost) {
    validate_page_request(req);
    cost = {};
    Clock::time_point t0 = Clock::now();

    size_t n = table.row_count();
    if (n == 0) {
        cost.elapsed = Clock::now() - t0;
        return {};
    }

    const AccessPath* path = table.path_for(req.sort_field);
    uint64_t skip = skip_count(req);

    SortKey boundary = SortKey::lowest(req.sort_field);
    SpillStats key_spill;
    if (skip > 0) {
        if (path != nullptr) {
            boundary = boundary_from_path(*path, skip);
        } else {
            std::vector<SortKey> keys;
            keys.reserve(n);
            for (const Row& r : table.rows()) keys.push_back(sort_key(r, req.sort_field));
            key_spill = budgeted_sort_keys(keys, req.sort_field, ctx.budget, ctx.spill);
            boundary = std::move(keys[std::min<uint64_t>(skip, n) - 1]);
        }
    }

    std::vector<Row> page;
    if (path != nullptr) {
        size_t rank = path->rank_gt(boundary);
        size_t end = std::min(n, rank + req.page_size);
        page.reserve(end - rank);
        for (size_t r = rank; r < end; ++r) page.push_back(path->row_at_rank(r));
        cost.rows_fetched_from_store = page.size();
    } else {
        std::vector<Row> suffix;
        for (const Row& r : table.rows()) {
            if (compare_row_key(r, boundary) > 0) suffix.push_back(r);
        }
        cost.rows_fetched_from_store = n;
        cost.spill = budgeted_sort(suffix, req.sort_field, ctx.budget, ctx.spill);
        page = slice(std::move(suffix), 0, req.page_size);
    }

    cost.spill.merge(key_spill);
    cost.bytes_crossing_tiers = bytes_of(page);
    cost.elapsed = Clock::now() - t0;
    return page;
}

std::vector<Row> two_phase_page(const Table& table, const PageRequest& req,
                                const StrategyContext& ctx, CostReport& cost) {
    (void)ctx;
    validate_page_request(req);
    const AccessPath* path = table.path_for(req.sort_field);
    if (path == nullptr) {
        throw ConfigError("two-phase pagination requires an access path on the sort field");
    }
    cost = {};
    Clock::time_point t0 = Clock::now();

    size_t n = table.row_count();
    if (n == 0) {
        cost.elapsed = Clock::now() - t0;
        return {};
    }

    uint64_t skip = skip_count(req);
    SortKey boundary =
        skip > 0 ? boundary_from_path(*path, skip) : SortKey::lowest(req.sort_field);

    // Phase one touches only the ordered key structure.
    size_t rank = path->rank_gt(boundary);
    std::vector<RowLocator> locs = path->collect(rank, req.page_size);

    // Phase two joins the locators back to the heap.
    std::vector<Row> page;
    page.reserve(locs.size());
    for (RowLocator loc : locs) page.push_back(table.row_at(loc));

    cost.rows_fetched_from_store = page.size();
    cost.bytes_crossing_tiers = bytes_of(page);
    cost.elapsed = Clock::now() - t0;
    return page;
}

std::vector<Row> run_strategy(Strategy s, const Table& table, const PageRequest& req,
                              const StrategyContext& ctx, CostReport& cost) {
    switch (s) {
        case Strategy::adb: return adb_page(table, req, ctx, cost);
        case Strategy::seek: return seek_page(table, req, ctx, cost);
        case Strategy::two_phase: return two_phase_page(table, req, ctx, cost);
    }
    throw ConfigError("unknown strategy");
}

} // namespace pagebench
