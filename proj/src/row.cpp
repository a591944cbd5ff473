// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/row.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

constexpr char kCharset[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
constexpr uint64_t kCharsetSize = 62;

bool charset_member(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

int sign(int c) { return (c > 0) - (c < 0); }

int cmp_i64(int64_t a, int64_t b) { return (a > b) - (a < b); }

int64_t num_value(const Row& r, Field f) {
    switch (f) {
        case Field::id: return r.id;
        case Field::int_field: return r.int_value;
        case Field::bool_field: return r.bool_value ? 1 : 0;
        case Field::date_field: return r.date;
        case Field::text: break;
    }
    return 0;
}

} // namespace

const char* field_name(Field f) {
    switch (f) {
        case Field::id: return "ID";
        case Field::text: return "TextField";
        case Field::int_field: return "IntField";
        case Field::bool_field: return "BoolField";
        case Field::date_field: return "DateField";
    }
    return "?";
}

Field parse_field(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "id") return Field::id;
    if (lower == "text" || lower == "textfield") return Field::text;
    if (lower == "int" || lower == "intfield") return Field::int_field;
    if (lower == "bool" || lower == "boolfield" || lower == "bit") return Field::bool_field;
    if (lower == "date" || lower == "datefield" || lower == "datetime") return Field::date_field;
    throw ConfigError("unknown field: " + std::string(name));
}

Field field_from_byte(uint8_t b) {
    if (b > static_cast<uint8_t>(Field::date_field)) throw ProtocolError("bad field byte");
    return static_cast<Field>(b);
}

void encode_row(const Row& r, std::string& out) {
    put_i32(out, r.id);
    put_u16(out, static_cast<uint16_t>(r.text.size()));
    out.append(r.text);
    put_i32(out, r.int_value);
    put_u8(out, r.bool_value ? 1 : 0);
    put_i64(out, r.date);
}

std::string encode_row(const Row& r) {
    std::string out;
    out.reserve(encoded_size(r));
    encode_row(r, out);
    return out;
}

Row decode_row_prefix(ByteReader& in) {
    Row r;
    r.id = in.i32();
    if (r.id < 1) throw ProtocolError("row id must be positive");
    uint16_t len = in.u16();
    if (len < kMinTextLen || len > kMaxTextLen) throw ProtocolError("text length out of range");
    std::string_view text = in.bytes(len);
    for (char c : text) {
        if (!charset_member(c)) throw ProtocolError("text has bytes outside [A-Za-z0-9]");
    }
    r.text.assign(text);
    r.int_value = in.i32();
    uint8_t b = in.u8();
    if (b > 1) throw ProtocolError("bool byte out of range");
    r.bool_value = b == 1;
    r.date = in.i64();
    return r;
}

Row decode_row(std::string_view bytes) {
    ByteReader in(bytes);
    Row r = decode_row_prefix(in);
    if (!in.done()) throw ProtocolError("trailing bytes after row");
    return r;
}

Row generate_row(SplitMix64& rng, int32_t id) {
    Row r;
    r.id = id;
    size_t len = kMinTextLen + rng.next_below(kMaxTextLen - kMinTextLen + 1);
    r.text.reserve(len);
    for (size_t i = 0; i < len; ++i) r.text.push_back(kCharset[rng.next_below(kCharsetSize)]);
    r.int_value = static_cast<int32_t>(rng.next_below(0x80000000ull));
    r.bool_value = (rng.next() & 1) != 0;
    r.date = kDateMin + static_cast<int64_t>(rng.next_below(kDateMax - kDateMin + 1));
    return r;
}

SortKey sort_key(const Row& r, Field f) {
    SortKey k;
    k.field = f;
    k.id = r.id;
    if (f == Field::text) {
        k.text = r.text;
    } else {
        k.num = num_value(r, f);
    }
    return k;
}

int compare_rows(const Row& a, const Row& b, Field f) {
    int c = f == Field::text ? sign(a.text.compare(b.text))
                             : cmp_i64(num_value(a, f), num_value(b, f));
    return c != 0 ? c : cmp_i64(a.id, b.id);
}

int compare_row_key(const Row& r, const SortKey& k) {
    if (k.neg_inf) return 1;
    int c = k.field == Field::text ? sign(r.text.compare(k.text))
                                   : cmp_i64(num_value(r, k.field), k.num);
    return c != 0 ? c : cmp_i64(r.id, k.id);
}

int compare_keys(const SortKey& a, const SortKey& b) {
    if (a.neg_inf || b.neg_inf) return cmp_i64(a.neg_inf ? 0 : 1, b.neg_inf ? 0 : 1);
    int c = a.field == Field::text ? sign(a.text.compare(b.text)) : cmp_i64(a.num, b.num);
    return c != 0 ? c : cmp_i64(a.id, b.id);
}

void sort_rows_by(std::vector<Row>& rows, Field f) {
    switch (f) {
        case Field::id:
            std::sort(rows.begin(), rows.end(),
                      [](const Row& a, const Row& b) { return a.id < b.id; });
            break;
        case Field::text:
            std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                return std::tie(a.text, a.id) < std::tie(b.text, b.id);
            });
            break;
        case Field::int_field:
            std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                return std::tie(a.int_value, a.id) < std::tie(b.int_value, b.id);
            });
            break;
        case Field::bool_field:
            std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                return std::tie(a.bool_value, a.id) < std::tie(b.bool_value, b.id);
            });
            break;
        case Field::date_field:
            std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                return std::tie(a.date, a.id) < std::tie(b.date, b.id);
            });
            break;
    }
}

void sort_keys(std::vector<SortKey>& keys) {
    if (keys.empty()) return;
    if (keys.front().field == Field::text) {
        std::sort(keys.begin(), keys.end(), [](const SortKey& a, const SortKey& b) {
            return std::tie(a.text, a.id) < std::tie(b.text, b.id);
        });
    } else {
        std::sort(keys.begin(), keys.end(), [](const SortKey& a, const SortKey& b) {
            return std::tie(a.num, a.id) < std::tie(b.num, b.id);
        });
    }
}

size_t max_key_encoded_size(Field f) {
    switch (f) {
        case Field::id: return 4;
        case Field::text: return 2 + kMaxTextLen + 4;
        case Field::int_field: return 8;
        case Field::bool_field: return 5;
        case Field::date_field: return 12;
    }
    return 0;
}

void encode_key(const SortKey& k, std::string& out) {
    switch (k.field) {
        case Field::id:
            put_i32(out, k.id);
            return;
        case Field::text:
            put_u16(out, static_cast<uint16_t>(k.text.size()));
            out.append(k.text);
            put_i32(out, k.id);
            return;
        case Field::int_field:
            put_i32(out, static_cast<int32_t>(k.num));
            put_i32(out, k.id);
            return;
        case Field::bool_field:
            put_u8(out, k.num != 0 ? 1 : 0);
            put_i32(out, k.id);
            return;
        case Field::date_field:
            put_i64(out, k.num);
            put_i32(out, k.id);
            return;
    }
}

SortKey decode_key_prefix(ByteReader& in, Field f) {
    SortKey k;
    k.field = f;
    switch (f) {
        case Field::id:
            k.id = in.i32();
            k.num = k.id;
            return k;
        case Field::text: {
            uint16_t len = in.u16();
            if (len > kMaxTextLen) throw ProtocolError("key text length out of range");
            k.text.assign(in.bytes(len));
            k.id = in.i32();
            return k;
        }
        case Field::int_field:
            k.num = in.i32();
            k.id = in.i32();
            return k;
        case Field::bool_field: {
            uint8_t b = in.u8();
            if (b > 1) throw ProtocolError("key bool byte out of range");
            k.num = b;
            k.id = in.i32();
            return k;
        }
        case Field::date_field:
            k.num = in.i64();
            k.id = in.i32();
            return k;
    }
    throw ProtocolError("bad key field");
}

} // namespace pagebench
