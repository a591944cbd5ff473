// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/table.hpp"

#include <fstream>
#include <iterator>
#include <limits>

#include "pagebench/bytes.hpp"
#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

constexpr char kTableMagic[4] = {'P', 'G', 'B', '1'};
constexpr size_t kWriteChunk = 1 << 20;

} // namespace

Table::Table(Table&& other) noexcept
    : rows_(std::move(other.rows_)),
      encoded_bytes_(other.encoded_bytes_),
      clustered_(other.clustered_),
      clustered_path_(std::move(other.clustered_path_)),
      indices_(std::move(other.indices_)) {
    rebind_paths();
}

Table& Table::operator=(Table&& other) noexcept {
    if (this != &other) {
        rows_ = std::move(other.rows_);
        encoded_bytes_ = other.encoded_bytes_;
        clustered_ = other.clustered_;
        clustered_path_ = std::move(other.clustered_path_);
        indices_ = std::move(other.indices_);
        rebind_paths();
    }
    return *this;
}

void Table::populate(uint64_t n, uint64_t seed) {
    if (n > static_cast<uint64_t>(std::numeric_limits<int32_t>::max())) {
        throw ConfigError("row count exceeds id space");
    }
    rows_.clear();
    rows_.reserve(n);
    encoded_bytes_ = 0;
    SplitMix64 rng(seed);
    for (uint64_t i = 0; i < n; ++i) {
        rows_.push_back(generate_row(rng, static_cast<int32_t>(i + 1)));
        encoded_bytes_ += encoded_size(rows_.back());
    }
    if (clustered_) sort_rows_by(rows_, *clustered_);
    rebuild_paths();
}

void Table::cluster_on(Field f) {
    clustered_ = f;
    sort_rows_by(rows_, f);
    std::erase_if(indices_, [f](const AccessPath& p) { return p.field() == f; });
    rebuild_paths();
}

void Table::add_index(Field f) {
    if (has_index(f)) return;
    indices_.emplace_back(&rows_, f, false);
}

bool Table::has_index(Field f) const { return path_for(f) != nullptr; }

const AccessPath* Table::path_for(Field f) const {
    if (clustered_ && *clustered_ == f) return &*clustered_path_;
    for (const AccessPath& p : indices_) {
        if (p.field() == f) return &p;
    }
    return nullptr;
}

void Table::rebuild_paths() {
    clustered_path_.reset();
    if (clustered_) clustered_path_.emplace(&rows_, *clustered_, true);
    std::vector<Field> fields;
    fields.reserve(indices_.size());
    for (const AccessPath& p : indices_) fields.push_back(p.field());
    indices_.clear();
    for (Field f : fields) indices_.emplace_back(&rows_, f, false);
}

void Table::rebind_paths() {
    if (clustered_path_) clustered_path_->rebind(&rows_);
    for (AccessPath& p : indices_) p.rebind(&rows_);
}

void Table::dump(std::ostream& out) const {
    std::string buf(kTableMagic, sizeof(kTableMagic));
    put_u64(buf, rows_.size());
    for (const Row& r : rows_) {
        encode_row(r, buf);
        if (buf.size() >= kWriteChunk) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("table write failed");
}

void Table::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    dump(out);
    out.flush();
    if (!out) throw IoError("table write failed: " + path.string());
}

Table Table::read(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ByteReader r(data);
    if (r.bytes(4) != std::string_view(kTableMagic, 4)) throw ProtocolError("bad table magic");
    uint64_t n = r.u64();
    Table t;
    t.rows_.reserve(std::min<uint64_t>(n, data.size() / kMinEncodedRow + 1));
    for (uint64_t i = 0; i < n; ++i) {
        t.rows_.push_back(decode_row_prefix(r));
        t.encoded_bytes_ += encoded_size(t.rows_.back());
    }
    if (!r.done()) throw ProtocolError("trailing bytes after table");
    return t;
}

Table Table::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read(in);
}

} // namespace pagebench
