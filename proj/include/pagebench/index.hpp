// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <vector>

#include "pagebench/row.hpp"

namespace pagebench {

using RowLocator = uint32_t;

// Ordered access over (field value, id) for one column of a row heap.
//
// A clustered path is the heap itself: the rows are stored in key order, so
// rank and locator coincide and nothing extra is materialized. A non-clustered
// path keeps a sorted locator array and pays one indirection per probe, the
// same shape as a secondary index with a bookmark lookup.
class AccessPath {
public:
    AccessPath(const std::vector<Row>* rows, Field f, bool clustered);

    Field field() const { return field_; }
    bool clustered() const { return clustered_; }
    size_t size() const { return rows_->size(); }

    RowLocator at(size_t rank) const { return clustered_ ? static_cast<RowLocator>(rank) : locs_[rank]; }
    const Row& row_at_rank(size_t rank) const { return (*rows_)[at(rank)]; }

    // Key of the rank-th entry in sort order; rank must be < size().
    SortKey nth_key(size_t rank) const;

    // First rank whose key compares greater than k, i.e. where the page
    // after the boundary key starts. size() when nothing is greater.
    size_t rank_gt(const SortKey& k) const;

    std::vector<RowLocator> collect(size_t first_rank, size_t count) const;

    // Tables rebind after moving their row storage.
    void rebind(const std::vector<Row>* rows) { rows_ = rows; }

private:
    const std::vector<Row>* rows_;
    Field field_;
    bool clustered_;
    std::vector<RowLocator> locs_;  // empty when clustered
};

} // namespace pagebench
