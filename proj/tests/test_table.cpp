// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pagebench/errors.hpp"
#include "pagebench/table.hpp"
#include "support/oracle.hpp"

using namespace pagebench;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const char* name) : path(fs::temp_directory_path() / name) {}
    ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

} // namespace

TEST_CASE("populate is deterministic and id-ordered") {
    Table a, b;
    a.populate(250, 99);
    b.populate(250, 99);
    CHECK(a.rows() == b.rows());
    CHECK(a.rows() == testoracle::make_rows(250, 99));
    for (size_t i = 0; i < a.row_count(); ++i) {
        CHECK(a.row_at(i).id == static_cast<int32_t>(i + 1));
    }
    b.populate(250, 100);
    CHECK(a.rows() != b.rows());
}

TEST_CASE("clustering physically reorders the heap") {
    Table t;
    t.cluster_on(Field::text);
    t.populate(300, 6);
    std::vector<Row> want = testoracle::sorted_rows(testoracle::make_rows(300, 6), Field::text);
    CHECK(t.rows() == want);

    Table late;
    late.populate(300, 6);
    late.cluster_on(Field::text);
    CHECK(late.rows() == want);
}

TEST_CASE("cluster_on absorbs a non-clustered index on the same field") {
    Table t;
    t.populate(50, 2);
    t.add_index(Field::int_field);
    REQUIRE(t.path_for(Field::int_field) != nullptr);
    CHECK_FALSE(t.path_for(Field::int_field)->clustered());
    t.cluster_on(Field::int_field);
    REQUIRE(t.path_for(Field::int_field) != nullptr);
    CHECK(t.path_for(Field::int_field)->clustered());
    t.add_index(Field::int_field);
    CHECK(t.path_for(Field::int_field)->clustered());
}

TEST_CASE("path_for misses give null") {
    Table t;
    t.populate(10, 1);
    for (Field f : kAllFields) CHECK(t.path_for(f) == nullptr);
    t.add_index(Field::date_field);
    CHECK(t.path_for(Field::date_field) != nullptr);
    CHECK(t.path_for(Field::id) == nullptr);
}

TEST_CASE("total_encoded_bytes sums row sizes") {
    Table t;
    t.populate(400, 12);
    uint64_t want = 0;
    for (const Row& r : t.rows()) want += encoded_size(r);
    CHECK(t.total_encoded_bytes() == want);
    t.populate(0, 1);
    CHECK(t.total_encoded_bytes() == 0);
    CHECK(t.row_count() == 0);
}

TEST_CASE("save/load round trip") {
    TempFile f("pagebench-table-rt.pgb");
    Table t;
    t.cluster_on(Field::bool_field);
    t.populate(321, 17);
    t.save(f.path.string());

    Table back = Table::load(f.path.string());
    CHECK(back.rows() == t.rows());
    CHECK(back.total_encoded_bytes() == t.total_encoded_bytes());
    for (Field field : kAllFields) CHECK(back.path_for(field) == nullptr);
}

TEST_CASE("load rejects malformed dumps") {
    TempFile f("pagebench-table-bad.pgb");
    {
        std::ofstream out(f.path, std::ios::binary);
        out << "NOPE" << std::string(12, '\0');
    }
    CHECK_THROWS_AS(Table::load(f.path.string()), ProtocolError);

    Table t;
    t.populate(5, 1);
    t.save(f.path.string());
    {
        std::ofstream out(f.path, std::ios::binary | std::ios::app);
        out << "junk";
    }
    CHECK_THROWS_AS(Table::load(f.path.string()), ProtocolError);

    CHECK_THROWS_AS(Table::load("/nonexistent/dir/t.pgb"), IoError);
}

TEST_CASE("moved table keeps serving rows") {
    Table t;
    t.populate(64, 9);
    std::vector<Row> want = t.rows();
    Table m = std::move(t);
    CHECK(m.rows() == want);
}
