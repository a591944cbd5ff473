// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pagebench/strategies.hpp"
#include "pagebench/table.hpp"

namespace pagebench {

// Wire format: every frame is "PGW1" + opcode(u8) + payload_len(u32 LE) +
// payload. A page request is answered by zero or more RowBatch frames
// followed by one Stats frame; any failure is a single Error frame.

inline constexpr char kWireMagic[4] = {'P', 'G', 'W', '1'};
inline constexpr size_t kFrameHeaderSize = 9;
inline constexpr uint32_t kMaxPayload = 64u << 20;
inline constexpr uint32_t kMaxRowsPerBatch = 4096;

enum class Opcode : uint8_t {
    scan_all = 1,
    seek_page = 2,
    two_phase_page = 3,
    row_batch = 4,
    error = 5,
    stats = 6,
};

enum class WireErrorCode : uint16_t {
    protocol = 1,
    config = 2,
    internal = 3,
    io = 4,
};

struct WireStats {
    uint64_t rows_fetched = 0;
    uint64_t bytes_spilled = 0;
    uint64_t elapsed_ns = 0;
    uint32_t runs_written = 0;
    bool spilled = false;
};

struct Frame {
    Opcode op;
    std::string payload;
};

void append_frame(std::string& out, Opcode op, std::string_view payload);
std::string encode_frame(Opcode op, std::string_view payload);

std::string encode_page_request(const PageRequest& req);
PageRequest decode_page_request(std::string_view payload);
std::string encode_stats(const WireStats& s);
WireStats decode_stats(std::string_view payload);
std::string encode_error(WireErrorCode code, std::string_view message);
std::pair<WireErrorCode, std::string> decode_error(std::string_view payload);
std::string encode_row_batch(const Row* rows, size_t count);
void decode_row_batch(std::string_view payload, std::vector<Row>& out);

// Connected stream socket with byte counters on both directions.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket();
    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    static Socket connect_to(const std::string& host, uint16_t port);

    bool valid() const { return fd_ >= 0; }
    void close();

    void write_all(const char* data, size_t n);
    void write_all(std::string_view data) { write_all(data.data(), data.size()); }
    // Throws IoError if the peer closes mid-message.
    void read_full(char* data, size_t n);
    // False on clean EOF before any byte, throws on partial reads.
    bool try_read_full(char* data, size_t n);

    Frame read_frame();
    // nullopt on clean EOF between frames.
    std::optional<Frame> try_read_frame();
    void write_frame(Opcode op, std::string_view payload);

    uint64_t bytes_sent() const { return bytes_sent_; }
    uint64_t bytes_received() const { return bytes_received_; }

private:
    int fd_ = -1;
    uint64_t bytes_sent_ = 0;
    uint64_t bytes_received_ = 0;
};

// Two-tier deployment: the storage tier executes index-side strategies and
// streams rows back; the app tier runs the client below.
class StoreServer {
public:
    struct Config {
        MemoryBudget budget;
        SpillConfig spill;
    };

    // Serves an immutable table. port 0 picks an ephemeral port.
    StoreServer(const Table& table, Config cfg = {}, uint16_t port = 0);
    ~StoreServer();

    uint16_t port() const { return port_; }
    void stop();

private:
    void accept_loop();
    void serve_connection(int fd);
    void handle_request(Socket& sock, const Frame& request);

    const Table& table_;
    Config cfg_;
    uint16_t port_ = 0;
    int listen_fd_ = -1;
    std::string scan_blob_;  // pre-encoded RowBatch frames for scan_all
    WireStats scan_stats_;
    std::thread accept_thread_;
    std::mutex mu_;
    std::vector<std::thread> workers_;
    std::vector<int> open_fds_;
    bool stopping_ = false;
};

// Optional modeled network between the tiers. latency is per round trip.
// With real_sleep the cost is slept inside the call; otherwise it is added
// to the reported elapsed time.
struct LinkModel {
    std::chrono::nanoseconds latency{0};
    uint64_t bandwidth_bytes_per_sec = 0;  // 0 skips the transfer term
    bool real_sleep = false;

    std::chrono::nanoseconds cost(uint64_t bytes) const;
};

class StoreClient {
public:
    StoreClient(const std::string& host, uint16_t port, LinkModel link = {});

    // Remote execution: the storage tier runs the strategy, only page rows
    // cross the wire.
    std::vector<Row> seek_page(const PageRequest& req, CostReport& cost);
    std::vector<Row> two_phase_page(const PageRequest& req, CostReport& cost);

    // Fetch-all across the wire; sorting happens on this side under ctx.
    std::vector<Row> scan_all(CostReport& cost);
    std::vector<Row> adb_page(const PageRequest& req, const StrategyContext& ctx, CostReport& cost);

    std::vector<Row> run(Strategy s, const PageRequest& req, const StrategyContext& ctx,
                         CostReport& cost);

    // Socket counter delta for the most recent call, for checking the
    // arithmetic byte accounting against what actually moved.
    uint64_t last_wire_bytes() const { return last_wire_bytes_; }
    const WireStats& last_server_stats() const { return server_stats_; }

private:
    struct Exchange {
        std::vector<Row> rows;
        WireStats stats;
        uint64_t wire_bytes = 0;
    };
    Exchange exchange(Opcode op, std::string_view payload);

    Socket sock_;
    LinkModel link_;
    uint64_t last_wire_bytes_ = 0;
    WireStats server_stats_;
};

} // namespace pagebench
