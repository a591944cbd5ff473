// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/index.hpp"

#include <algorithm>
#include <numeric>

namespace pagebench {

AccessPath::AccessPath(const std::vector<Row>* rows, Field f, bool clustered)
    : rows_(rows), field_(f), clustered_(clustered) {
    if (clustered_) return;
    locs_.resize(rows_->size());
    std::iota(locs_.begin(), locs_.end(), 0u);
    const std::vector<Row>& r = *rows_;
    Field field = field_;
    std::sort(locs_.begin(), locs_.end(), [&r, field](RowLocator a, RowLocator b) {
        return compare_rows(r[a], r[b], field) < 0;
    });
}

SortKey AccessPath::nth_key(size_t rank) const { return sort_key(row_at_rank(rank), field_); }

size_t AccessPath::rank_gt(const SortKey& k) const {
    size_t lo = 0;
    size_t hi = size();
    while (lo < hi) {
        size_t mid = lo + (hi - lo) / 2;
        if (compare_row_key(row_at_rank(mid), k) <= 0) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::vector<RowLocator> AccessPath::collect(size_t first_rank, size_t count) const {
    size_t end = std::min(size(), first_rank + count);
    std::vector<RowLocator> out;
    if (first_rank >= end) return out;
    out.reserve(end - first_rank);
    for (size_t r = first_rank; r < end; ++r) out.push_back(at(r));
    return out;
}

} // namespace pagebench
