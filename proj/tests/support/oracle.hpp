// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pagebench/rng.hpp"
#include "pagebench/row.hpp"

namespace testoracle {

// Decorate-sort-undedecorate reference, deliberately structured unlike the
// library's comparator sorts.
inline std::vector<pagebench::Row> sorted_rows(const std::vector<pagebench::Row>& rows,
                                               pagebench::Field f) {
    using pagebench::Field;
    using Key = std::tuple<int64_t, std::string, int32_t>;
    std::vector<std::pair<Key, size_t>> keyed;
    keyed.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        const pagebench::Row& r = rows[i];
        Key k;
        switch (f) {
            case Field::id: k = Key{r.id, "", r.id}; break;
            case Field::text: k = Key{0, r.text, r.id}; break;
            case Field::int_field: k = Key{r.int_value, "", r.id}; break;
            case Field::bool_field: k = Key{r.bool_value ? 1 : 0, "", r.id}; break;
            case Field::date_field: k = Key{r.date, "", r.id}; break;
        }
        keyed.emplace_back(std::move(k), i);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<pagebench::Row> out;
    out.reserve(rows.size());
    for (const auto& [k, i] : keyed) out.push_back(rows[i]);
    return out;
}

inline uint64_t skip_of(uint32_t page, uint32_t size, bool faithful) {
    if (page <= 1) return 0;
    return static_cast<uint64_t>(size) * (faithful ? page : page - 1u);
}

inline std::vector<pagebench::Row> page_of(const std::vector<pagebench::Row>& rows,
                                           pagebench::Field f, uint32_t page, uint32_t size,
                                           bool faithful = false) {
    std::vector<pagebench::Row> sorted = sorted_rows(rows, f);
    uint64_t skip = skip_of(page, size, faithful);
    std::vector<pagebench::Row> out;
    for (uint64_t i = skip; i < sorted.size() && out.size() < size; ++i) {
        out.push_back(sorted[i]);
    }
    return out;
}

// Mirrors table population: one fresh stream, ids assigned in draw order.
inline std::vector<pagebench::Row> make_rows(size_t n, uint64_t seed) {
    pagebench::SplitMix64 rng(seed);
    std::vector<pagebench::Row> rows;
    rows.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        rows.push_back(pagebench::generate_row(rng, static_cast<int32_t>(i + 1)));
    }
    return rows;
}

inline bool same_rows(const std::vector<pagebench::Row>& a,
                      const std::vector<pagebench::Row>& b) {
    return a == b;
}

} // namespace testoracle
