// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pagebench/bytes.hpp"
#include "pagebench/rng.hpp"

namespace pagebench {

enum class Field : uint8_t {
    id = 0,
    text = 1,
    int_field = 2,
    bool_field = 3,
    date_field = 4,
};

inline constexpr Field kAllFields[] = {Field::id, Field::text, Field::int_field,
                                       Field::bool_field, Field::date_field};

const char* field_name(Field f);
Field parse_field(std::string_view name);
Field field_from_byte(uint8_t b);

struct Row {
    int32_t id = 0;            // 1-based, unique
    std::string text;          // 1..50 chars of [A-Za-z0-9]
    int32_t int_value = 0;     // uniform [0, 2^31)
    bool bool_value = false;
    int64_t date = 0;          // unix seconds

    bool operator==(const Row&) const = default;
};

inline constexpr size_t kMinTextLen = 1;
inline constexpr size_t kMaxTextLen = 50;
// id(4) + len(2) + text + int(4) + bool(1) + date(8)
inline constexpr size_t kRowOverhead = 19;
inline constexpr size_t kMinEncodedRow = kRowOverhead + kMinTextLen;
inline constexpr size_t kMaxEncodedRow = kRowOverhead + kMaxTextLen;

inline size_t encoded_size(const Row& r) { return kRowOverhead + r.text.size(); }

void encode_row(const Row& r, std::string& out);
std::string encode_row(const Row& r);

// Exact fit: trailing bytes are a protocol error.
Row decode_row(std::string_view bytes);
// Consumes one row from a stream, leaving the cursor after it.
Row decode_row_prefix(ByteReader& in);

// Deterministic generator. One row costs a fixed number of rng draws for a
// given text length, so tables regenerate bit-identically from (n, seed).
Row generate_row(SplitMix64& rng, int32_t id);

inline constexpr int64_t kDateMin = 946684800;   // 2000-01-01T00:00:00Z
inline constexpr int64_t kDateMax = 1609459199;  // 2020-12-31T23:59:59Z

// Composite sort key (field value, id). The id tiebreak makes every ordering
// total, which keyset pagination relies on.
struct SortKey {
    Field field = Field::id;
    bool neg_inf = false;  // sorts before every real key; used for page one
    int64_t num = 0;       // id / int / bool-as-0-1 / date
    std::string text;      // only for Field::text
    int32_t id = 0;

    static SortKey lowest(Field f) {
        SortKey k;
        k.field = f;
        k.neg_inf = true;
        return k;
    }
};

SortKey sort_key(const Row& r, Field f);

// Three-way comparisons; negative means "left sorts first".
int compare_rows(const Row& a, const Row& b, Field f);
int compare_row_key(const Row& r, const SortKey& k);
int compare_keys(const SortKey& a, const SortKey& b);

// Sorts with a per-field comparator instead of dispatching per element.
void sort_rows_by(std::vector<Row>& rows, Field f);
void sort_keys(std::vector<SortKey>& keys);

// Compact key serialization for spilled key-column runs.
size_t max_key_encoded_size(Field f);
void encode_key(const SortKey& k, std::string& out);
SortKey decode_key_prefix(ByteReader& in, Field f);

} // namespace pagebench
