// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/sortspill.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include "pagebench/bytes.hpp"
#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

namespace fs = std::filesystem;

constexpr size_t kReadChunk = 64 * 1024;
constexpr size_t kWriteChunk = 1 << 20;

std::atomic<uint64_t> g_run_seq{0};

void device_delay(uint64_t bytes, uint64_t ns_per_byte) {
    if (ns_per_byte == 0 || bytes == 0) return;
    std::this_thread::sleep_for(std::chrono::nanoseconds(bytes * ns_per_byte));
}

fs::path resolve_temp_dir(const SpillConfig& spill) {
    fs::path dir = spill.temp_dir.empty() ? fs::temp_directory_path() : spill.temp_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create spill directory " + dir.string());
    return dir;
}

struct RunFile {
    fs::path path;
    uint64_t bytes = 0;
};

struct RunSet {
    std::vector<RunFile> runs;
    ~RunSet() {
        for (const RunFile& r : runs) {
            std::error_code ec;
            fs::remove(r.path, ec);
        }
    }
};

// Streams one run back, decoding items out of a refill buffer so an item may
// straddle read boundaries.
template <class Item, class DecodeFn>
class RunReader {
public:
    RunReader(const fs::path& path, size_t max_item, uint64_t delay, DecodeFn decode)
        : in_(path, std::ios::binary), max_item_(max_item), delay_(delay), decode_(decode) {
        if (!in_) throw IoError("cannot reopen spill run " + path.string());
    }

    bool next(Item& out) {
        while (buf_.size() - off_ < max_item_ && !eof_) refill();
        if (buf_.size() == off_) return false;
        ByteReader r(buf_.data() + off_, buf_.size() - off_);
        out = decode_(r);
        off_ = buf_.size() - r.remaining();
        return true;
    }

private:
    void refill() {
        buf_.erase(0, off_);
        off_ = 0;
        size_t old = buf_.size();
        buf_.resize(old + kReadChunk);
        in_.read(buf_.data() + old, static_cast<std::streamsize>(kReadChunk));
        size_t got = static_cast<size_t>(in_.gcount());
        buf_.resize(old + got);
        if (got < kReadChunk) eof_ = true;
        if (in_.bad()) throw IoError("spill run read failed");
        device_delay(got, delay_);
    }

    std::ifstream in_;
    std::string buf_;
    size_t off_ = 0;
    size_t max_item_ = 0;
    uint64_t delay_ = 0;
    bool eof_ = false;
    DecodeFn decode_;
};

template <class Item, class LessFn, class EncodeFn, class DecodeFn>
SpillStats external_sort(std::vector<Item>& items, uint64_t run_len, size_t max_item,
                         const SpillConfig& spill, LessFn less, EncodeFn encode,
                         DecodeFn decode) {
    SpillStats stats;
    if (items.size() <= run_len) {
        std::sort(items.begin(), items.end(), less);
        return stats;
    }

    fs::path dir = resolve_temp_dir(spill);
    uint64_t seq = g_run_seq.fetch_add(1);
    RunSet run_set;
    size_t n = items.size();
    size_t run_count = (n + run_len - 1) / run_len;

    for (size_t run = 0; run < run_count; ++run) {
        size_t begin = run * run_len;
        size_t end = std::min(n, begin + run_len);
        std::sort(items.begin() + begin, items.begin() + end, less);

        RunFile rf;
        rf.path = dir / ("pgb-run-" + std::to_string(getpid()) + "-" + std::to_string(seq) +
                         "-" + std::to_string(run) + ".bin");
        std::ofstream out(rf.path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create spill run " + rf.path.string());
        std::string buf;
        buf.reserve(kWriteChunk + max_item);
        for (size_t i = begin; i < end; ++i) {
            encode(items[i], buf);
            if (buf.size() >= kWriteChunk) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                rf.bytes += buf.size();
                buf.clear();
            }
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        rf.bytes += buf.size();
        out.flush();
        if (!out) throw IoError("spill run write failed " + rf.path.string());
        device_delay(rf.bytes, spill.delay_ns_per_byte);
        run_set.runs.push_back(std::move(rf));
    }

    stats.spilled = true;
    stats.runs_written = static_cast<uint32_t>(run_count);
    for (const RunFile& r : run_set.runs) stats.bytes_spilled += r.bytes;

    using Reader = RunReader<Item, DecodeFn>;
    std::vector<Reader> readers;
    readers.reserve(run_count);
    for (const RunFile& r : run_set.runs) {
        readers.emplace_back(r.path, max_item, spill.delay_ns_per_byte, decode);
    }

    // Index heap over one in-flight item per run; the comparator reads the
    // cursor array, so it stays valid as long as entries are refilled between
    // heap operations.
    std::vector<Item> current(run_count);
    std::vector<size_t> heap;
    heap.reserve(run_count);
    auto heap_cmp = [&](size_t a, size_t b) { return less(current[b], current[a]); };
    for (size_t i = 0; i < readers.size(); ++i) {
        if (readers[i].next(current[i])) heap.push_back(i);
    }
    std::make_heap(heap.begin(), heap.end(), heap_cmp);

    items.clear();
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), heap_cmp);
        size_t run = heap.back();
        heap.pop_back();
        items.push_back(std::move(current[run]));
        if (readers[run].next(current[run])) {
            heap.push_back(run);
            std::push_heap(heap.begin(), heap.end(), heap_cmp);
        }
    }
    if (items.size() != n) throw IoError("spill merge lost rows");
    return stats;
}

} // namespace

uint64_t max_sortable_rows(const MemoryBudget& budget) { return budget.bytes / kMaxEncodedRow; }

uint64_t max_sortable_keys(const MemoryBudget& budget, Field f) {
    return budget.bytes / max_key_encoded_size(f);
}

SpillStats budgeted_sort(std::vector<Row>& rows, Field f, const MemoryBudget& budget,
                         const SpillConfig& spill) {
    uint64_t run_len = max_sortable_rows(budget);
    if (run_len == 0) throw ConfigError("memory budget below one row");
    if (rows.size() <= run_len) {
        sort_rows_by(rows, f);
        return {};
    }
    auto less = [f](const Row& a, const Row& b) { return compare_rows(a, b, f) < 0; };
    auto encode = [](const Row& r, std::string& out) { encode_row(r, out); };
    auto decode = [](ByteReader& in) { return decode_row_prefix(in); };
    return external_sort<Row>(rows, run_len, kMaxEncodedRow, spill, less, encode, decode);
}

SpillStats budgeted_sort_keys(std::vector<SortKey>& keys, Field f, const MemoryBudget& budget,
                              const SpillConfig& spill) {
    size_t max_item = max_key_encoded_size(f);
    uint64_t run_len = max_sortable_keys(budget, f);
    if (run_len == 0) throw ConfigError("memory budget below one key");
    if (keys.size() <= run_len) {
        sort_keys(keys);
        return {};
    }
    auto less = [](const SortKey& a, const SortKey& b) { return compare_keys(a, b) < 0; };
    auto encode = [](const SortKey& k, std::string& out) { encode_key(k, out); };
    auto decode = [f](ByteReader& in) { return decode_key_prefix(in, f); };
    return external_sort<SortKey>(keys, run_len, max_item, spill, less, encode, decode);
}

} // namespace pagebench
