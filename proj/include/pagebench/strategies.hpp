// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pagebench/sortspill.hpp"
#include "pagebench/table.hpp"

namespace pagebench {

// How the boundary-key subquery counts rows to skip for page p of size s.
// The faithful mode reproduces a widespread off-by-one: it skips s*p rows
// instead of s*(p-1), so every page past the first is shifted by one page.
// Page one never runs the subquery and is identical in both modes.
enum class SkipMode : uint8_t {
    corrected = 0,
    faithful = 1,
};

const char* skip_mode_name(SkipMode m);
SkipMode parse_skip_mode(std::string_view name);

struct PageRequest {
    Field sort_field = Field::id;
    uint32_t page_number = 1;  // 1-based
    uint32_t page_size = 10;
    SkipMode skip_mode = SkipMode::corrected;
};

struct CostReport {
    uint64_t rows_fetched_from_store = 0;
    uint64_t bytes_crossing_tiers = 0;
    SpillStats spill;
    std::chrono::nanoseconds elapsed{0};
};

struct StrategyContext {
    MemoryBudget budget;
    SpillConfig spill;
};

enum class Strategy : uint8_t {
    adb = 0,        // fetch everything, sort, slice
    seek = 1,       // boundary key, then rows greater than it
    two_phase = 2,  // boundary key, locator scan, then row lookup
};

const char* strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

// Reference implementation: plain sort of a full copy plus a slice. Slow on
// purpose; everything else must agree with it.
std::vector<Row> oracle_page(const Table& table, const PageRequest& req);

// Fetch-all-and-sort. Pulls every row across the tier boundary and sorts
// under the budget; the page slice happens after the fact, so skip_mode is
// irrelevant here.
std::vector<Row> adb_page(const Table& table, const PageRequest& req, const StrategyContext& ctx,
                          CostReport& cost);

// Keyset pagination. With an access path on the sort field both the boundary
// probe and the page scan are index seeks. Without one, the boundary comes
// from sorting the bare key column and the page from sorting the matching
// suffix of the heap, both under the budget.
std::vector<Row> seek_page(const Table& table, const PageRequest& req, const StrategyContext& ctx,
                           CostReport& cost);

// Key-then-join: collect the page's locators from the access path first,
// then fetch the rows. Requires a path on the sort field.
std::vector<Row> two_phase_page(const Table& table, const PageRequest& req,
                                const StrategyContext& ctx, CostReport& cost);

std::vector<Row> run_strategy(Strategy s, const Table& table, const PageRequest& req,
                              const StrategyContext& ctx, CostReport& cost);

// Rows to skip before the page, after boundary-mode adjustment.
uint64_t skip_count(const PageRequest& req);

// Throws ConfigError unless page_number and page_size are both >= 1.
void validate_page_request(const PageRequest& req);

} // namespace pagebench
