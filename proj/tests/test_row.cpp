// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pagebench/errors.hpp"
#include "pagebench/rng.hpp"
#include "pagebench/row.hpp"
#include "support/oracle.hpp"

using namespace pagebench;

TEST_CASE("splitmix64 reference vectors") {
    SplitMix64 a(0);
    CHECK(a.next() == 0xE220A8397B1DCDAFull);
    CHECK(a.next() == 0x6E789E6AA1B965F4ull);
    CHECK(a.next() == 0x06C45D188009454Full);
    SplitMix64 b(42);
    CHECK(b.next() == 0xBDD732262FEB6E95ull);
    CHECK(b.next() == 0x28EFE333B266F103ull);
    CHECK(b.next() == 0x47526757130F9F52ull);
}

TEST_CASE("next_below stays under the bound and is deterministic") {
    SplitMix64 a(9), b(9);
    for (int i = 0; i < 1000; ++i) {
        uint64_t v = a.next_below(37);
        CHECK(v < 37);
        CHECK(v == b.next_below(37));
    }
}

TEST_CASE("generate_row golden value for seed 7") {
    SplitMix64 rng(7);
    Row r = generate_row(rng, 1);
    CHECK(r.id == 1);
    CHECK(r.text == "Se7ElySHLB4YMaETT9WpPZpip8DjBqQSATjQ73");
    CHECK(r.int_value == 1367711323);
    CHECK(r.bool_value == true);
    CHECK(r.date == 1260872905);
}

TEST_CASE("generated rows respect the field domains") {
    SplitMix64 rng(123);
    for (int i = 1; i <= 2000; ++i) {
        Row r = generate_row(rng, i);
        CHECK(r.id == i);
        CHECK(r.text.size() >= kMinTextLen);
        CHECK(r.text.size() <= kMaxTextLen);
        for (char c : r.text) {
            bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
            CHECK(ok);
        }
        CHECK(r.int_value >= 0);
        CHECK(r.date >= kDateMin);
        CHECK(r.date <= kDateMax);
    }
}

TEST_CASE("encoded_size bounds and formula") {
    Row r;
    r.id = 1;
    r.text = "A";
    r.int_value = 5;
    r.bool_value = true;
    r.date = kDateMin;
    CHECK(encoded_size(r) == kMinEncodedRow);
    CHECK(kMinEncodedRow == 20);
    r.text = std::string(50, 'z');
    CHECK(encoded_size(r) == kMaxEncodedRow);
    CHECK(kMaxEncodedRow == 69);
    CHECK(kRowOverhead == 19);
    r.text = "hello";
    CHECK(encoded_size(r) == 19 + 5);
}

TEST_CASE("encode_row golden bytes") {
    Row r;
    r.id = 1;
    r.text = "A";
    r.int_value = 5;
    r.bool_value = true;
    r.date = 946684800;
    std::string buf;
    encode_row(r, buf);
    const unsigned char want[20] = {0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x41, 0x05, 0x00, 0x00,
                                    0x00, 0x01, 0x80, 0x43, 0x6D, 0x38, 0x00, 0x00, 0x00, 0x00};
    REQUIRE(buf.size() == 20);
    for (size_t i = 0; i < 20; ++i) CHECK(static_cast<unsigned char>(buf[i]) == want[i]);
}

TEST_CASE("encode/decode round trip") {
    SplitMix64 rng(55);
    for (int i = 1; i <= 500; ++i) {
        Row r = generate_row(rng, i);
        std::string buf;
        encode_row(r, buf);
        CHECK(buf.size() == encoded_size(r));
        Row back = decode_row(buf);
        CHECK(back == r);
    }
}

TEST_CASE("decode_row rejects malformed input") {
    Row r;
    r.id = 7;
    r.text = "ok";
    r.int_value = 1;
    r.bool_value = false;
    r.date = kDateMin;
    std::string buf;
    encode_row(r, buf);

    CHECK_THROWS_AS(decode_row(buf.substr(0, buf.size() - 1)), ProtocolError);
    CHECK_THROWS_AS(decode_row(buf + "x"), ProtocolError);

    std::string zero_id = buf;
    zero_id[0] = 0;
    zero_id[1] = 0;
    zero_id[2] = 0;
    zero_id[3] = 0;
    CHECK_THROWS_AS(decode_row(zero_id), ProtocolError);

    std::string bad_char = buf;
    bad_char[6] = '!';
    CHECK_THROWS_AS(decode_row(bad_char), ProtocolError);

    std::string bad_bool = buf;
    bad_bool[4 + 2 + r.text.size() + 4] = 2;
    CHECK_THROWS_AS(decode_row(bad_bool), ProtocolError);

    std::string zero_len = buf;
    zero_len[4] = 0;
    zero_len[5] = 0;
    CHECK_THROWS_AS(decode_row(zero_len), ProtocolError);
}

TEST_CASE("decode_row_prefix consumes exactly one row") {
    Row a;
    a.id = 1;
    a.text = "xy";
    a.int_value = 9;
    a.bool_value = true;
    a.date = kDateMin + 5;
    Row b = a;
    b.id = 2;
    b.text = "Q";
    std::string buf;
    encode_row(a, buf);
    encode_row(b, buf);
    ByteReader in(buf);
    Row first = decode_row_prefix(in);
    CHECK(first == a);
    CHECK(buf.size() - in.remaining() == encoded_size(a));
    Row second = decode_row_prefix(in);
    CHECK(second == b);
    CHECK(in.done());
}

TEST_CASE("sort_rows_by matches the reference sort on every field") {
    std::vector<Row> rows = testoracle::make_rows(1000, 13);
    for (Field f : kAllFields) {
        std::vector<Row> lib = rows;
        sort_rows_by(lib, f);
        CHECK(lib == testoracle::sorted_rows(rows, f));
    }
}

TEST_CASE("compare_rows breaks ties by id") {
    Row a, b;
    a.id = 1;
    b.id = 2;
    a.text = b.text = "same";
    a.int_value = b.int_value = 10;
    a.bool_value = b.bool_value = false;
    a.date = b.date = kDateMin;
    for (Field f : kAllFields) {
        CHECK(compare_rows(a, b, f) < 0);
        CHECK(compare_rows(b, a, f) > 0);
        CHECK(compare_rows(a, a, f) == 0);
    }
}

TEST_CASE("lowest sort key sorts before every row") {
    std::vector<Row> rows = testoracle::make_rows(50, 77);
    for (Field f : kAllFields) {
        SortKey lo = SortKey::lowest(f);
        for (const Row& r : rows) {
            CHECK(compare_row_key(r, lo) > 0);
            CHECK(compare_keys(lo, sort_key(r, f)) < 0);
        }
    }
}

TEST_CASE("sort keys order rows exactly like the rows themselves") {
    std::vector<Row> rows = testoracle::make_rows(300, 5);
    for (Field f : kAllFields) {
        std::vector<SortKey> keys;
        for (const Row& r : rows) keys.push_back(sort_key(r, f));
        sort_keys(keys);
        std::vector<Row> sorted = testoracle::sorted_rows(rows, f);
        REQUIRE(keys.size() == sorted.size());
        for (size_t i = 0; i < keys.size(); ++i) CHECK(keys[i].id == sorted[i].id);
    }
}

TEST_CASE("key encode/decode round trip and size bounds") {
    std::vector<Row> rows = testoracle::make_rows(200, 31);
    for (Field f : kAllFields) {
        for (const Row& r : rows) {
            SortKey k = sort_key(r, f);
            std::string buf;
            encode_key(k, buf);
            CHECK(buf.size() <= max_key_encoded_size(f));
            ByteReader in(buf);
            SortKey back = decode_key_prefix(in, f);
            CHECK(in.done());
            CHECK(compare_keys(k, back) == 0);
            CHECK(back.id == k.id);
        }
    }
    CHECK(max_key_encoded_size(Field::id) == 4);
    CHECK(max_key_encoded_size(Field::text) == 56);
    CHECK(max_key_encoded_size(Field::int_field) == 8);
    CHECK(max_key_encoded_size(Field::bool_field) == 5);
    CHECK(max_key_encoded_size(Field::date_field) == 12);
}

TEST_CASE("field names and parsing") {
    CHECK(field_name(Field::id) == std::string("ID"));
    CHECK(field_name(Field::text) == std::string("TextField"));
    CHECK(field_name(Field::int_field) == std::string("IntField"));
    CHECK(field_name(Field::bool_field) == std::string("BoolField"));
    CHECK(field_name(Field::date_field) == std::string("DateField"));
    for (Field f : kAllFields) CHECK(parse_field(field_name(f)) == f);
    CHECK(parse_field("id") == Field::id);
    CHECK(parse_field("TEXT") == Field::text);
    CHECK(parse_field("int") == Field::int_field);
    CHECK(parse_field("bool") == Field::bool_field);
    CHECK(parse_field("bit") == Field::bool_field);
    CHECK(parse_field("date") == Field::date_field);
    CHECK(parse_field("datetime") == Field::date_field);
    CHECK_THROWS_AS(parse_field("nope"), ConfigError);
    CHECK_THROWS_AS(field_from_byte(9), ProtocolError);
    for (Field f : kAllFields) CHECK(field_from_byte(static_cast<uint8_t>(f)) == f);
}

TEST_CASE("distinct seeds give distinct tables") {
    std::vector<Row> a = testoracle::make_rows(100, 1);
    std::vector<Row> b = testoracle::make_rows(100, 2);
    CHECK(a != b);
    std::vector<Row> c = testoracle::make_rows(100, 1);
    CHECK(a == c);
}
