// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pagebench/row.hpp"

namespace pagebench {

struct MemoryBudget {
    uint64_t bytes = 64ull << 20;
};

struct SpillConfig {
    // Empty means the system temp directory.
    std::filesystem::path temp_dir;
    // Optional synthetic device cost, applied per byte written to and read
    // from run files. Zero disables it. Useful when the page cache makes
    // spilled runs nearly free.
    uint64_t delay_ns_per_byte = 0;
};

struct SpillStats {
    bool spilled = false;
    uint32_t runs_written = 0;
    uint64_t bytes_spilled = 0;

    void merge(const SpillStats& other) {
        spilled = spilled || other.spilled;
        runs_written += other.runs_written;
        bytes_spilled += other.bytes_spilled;
    }
};

// Sorts rows by (f, id). The working set is costed conservatively at the
// maximum encoded row size; when n * max_row exceeds the budget the sort
// splits into budget-sized runs, writes them to temp files, and k-way merges
// them back in one pass. Budgets below one row are a ConfigError.
SpillStats budgeted_sort(std::vector<Row>& rows, Field f, const MemoryBudget& budget,
                         const SpillConfig& spill);

// Same discipline for a bare key column, costed at the field's maximum
// encoded key size.
SpillStats budgeted_sort_keys(std::vector<SortKey>& keys, Field f, const MemoryBudget& budget,
                              const SpillConfig& spill);

// Rows (or keys) per in-memory run under a budget; the spill decision is
// n > max_sortable_rows.
uint64_t max_sortable_rows(const MemoryBudget& budget);
uint64_t max_sortable_keys(const MemoryBudget& budget, Field f);

} // namespace pagebench
