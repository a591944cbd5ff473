// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pagebench/index.hpp"
#include "pagebench/row.hpp"

namespace pagebench {

// In-memory row store: one heap of rows, an optional clustered ordering, and
// any number of non-clustered single-field indices.
class Table {
public:
    Table() = default;
    Table(const Table&) = delete;
    Table& operator=(const Table&) = delete;
    Table(Table&& other) noexcept;
    Table& operator=(Table&& other) noexcept;

    // Replaces all contents with n generated rows. Keeps the current
    // clustering and index set, rebuilding them over the new rows.
    void populate(uint64_t n, uint64_t seed);

    // Physically re-sorts the heap by (f, id) and rebuilds indices.
    void cluster_on(Field f);

    // Adds a non-clustered index. No-op if f is the clustered field or
    // already indexed.
    void add_index(Field f);

    std::optional<Field> clustered_field() const { return clustered_; }
    bool has_index(Field f) const;

    // Clustered path if f is the clustered field, else the non-clustered
    // index on f, else nullptr.
    const AccessPath* path_for(Field f) const;

    size_t row_count() const { return rows_.size(); }
    const std::vector<Row>& rows() const { return rows_; }
    const Row& row_at(RowLocator loc) const { return rows_[loc]; }
    uint64_t total_encoded_bytes() const { return encoded_bytes_; }

    // "PGB1" dump of the heap. Ordering and indices are not persisted;
    // load() returns an unclustered, unindexed table.
    void save(const std::filesystem::path& path) const;
    void dump(std::ostream& out) const;
    static Table load(const std::filesystem::path& path);
    static Table read(std::istream& in);

private:
    void rebuild_paths();
    void rebind_paths();

    std::vector<Row> rows_;
    uint64_t encoded_bytes_ = 0;
    std::optional<Field> clustered_;
    std::optional<AccessPath> clustered_path_;
    std::vector<AccessPath> indices_;
};

} // namespace pagebench
