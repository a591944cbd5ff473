// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <iterator>
#include <system_error>
#include <thread>

#include "pagebench/bytes.hpp"
#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text(const char* op) {
    return std::string(op) + ": " + std::system_category().message(errno);
}

void set_nodelay(int fd) {
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

} // namespace

void append_frame(std::string& out, Opcode op, std::string_view payload) {
    out.append(kWireMagic, sizeof(kWireMagic));
    put_u8(out, static_cast<uint8_t>(op));
    put_u32(out, static_cast<uint32_t>(payload.size()));
    out.append(payload);
}

std::string encode_frame(Opcode op, std::string_view payload) {
    std::string out;
    out.reserve(kFrameHeaderSize + payload.size());
    append_frame(out, op, payload);
    return out;
}

std::string encode_page_request(const PageRequest& req) {
    std::string out;
    put_u8(out, static_cast<uint8_t>(req.sort_field));
    put_u8(out, static_cast<uint8_t>(req.skip_mode));
    put_u32(out, req.page_number);
    put_u32(out, req.page_size);
    return out;
}

PageRequest decode_page_request(std::string_view payload) {
    ByteReader in(payload);
    PageRequest req;
    req.sort_field = field_from_byte(in.u8());
    uint8_t mode = in.u8();
    if (mode > 1) throw ProtocolError("bad skip mode byte");
    req.skip_mode = static_cast<SkipMode>(mode);
    req.page_number = in.u32();
    req.page_size = in.u32();
    if (!in.done()) throw ProtocolError("trailing bytes in page request");
    return req;
}

std::string encode_stats(const WireStats& s) {
    std::string out;
    put_u64(out, s.rows_fetched);
    put_u64(out, s.bytes_spilled);
    put_u64(out, s.elapsed_ns);
    put_u32(out, s.runs_written);
    put_u8(out, s.spilled ? 1 : 0);
    return out;
}

WireStats decode_stats(std::string_view payload) {
    ByteReader in(payload);
    WireStats s;
    s.rows_fetched = in.u64();
    s.bytes_spilled = in.u64();
    s.elapsed_ns = in.u64();
    s.runs_written = in.u32();
    uint8_t b = in.u8();
    if (b > 1) throw ProtocolError("bad spilled byte");
    s.spilled = b == 1;
    if (!in.done()) throw ProtocolError("trailing bytes in stats");
    return s;
}

std::string encode_error(WireErrorCode code, std::string_view message) {
    std::string out;
    put_u16(out, static_cast<uint16_t>(code));
    out.append(message);
    return out;
}

std::pair<WireErrorCode, std::string> decode_error(std::string_view payload) {
    ByteReader in(payload);
    uint16_t code = in.u16();
    if (code < 1 || code > 4) throw ProtocolError("bad error code");
    std::string msg(in.bytes(in.remaining()));
    return {static_cast<WireErrorCode>(code), std::move(msg)};
}

std::string encode_row_batch(const Row* rows, size_t count) {
    if (count > kMaxRowsPerBatch) throw ProtocolError("oversized row batch");
    std::string payload;
    payload.reserve(4 + count * kMaxEncodedRow);
    put_u32(payload, static_cast<uint32_t>(count));
    for (size_t i = 0; i < count; ++i) encode_row(rows[i], payload);
    return payload;
}

void decode_row_batch(std::string_view payload, std::vector<Row>& out) {
    ByteReader in(payload);
    uint32_t count = in.u32();
    if (count > kMaxRowsPerBatch) throw ProtocolError("oversized row batch");
    out.reserve(out.size() + count);
    for (uint32_t i = 0; i < count; ++i) out.push_back(decode_row_prefix(in));
    if (!in.done()) throw ProtocolError("trailing bytes in row batch");
}

Socket::~Socket() { close(); }

Socket::Socket(Socket&& other) noexcept
    : fd_(other.fd_), bytes_sent_(other.bytes_sent_), bytes_received_(other.bytes_received_) {
    other.fd_ = -1;
}

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        bytes_sent_ = other.bytes_sent_;
        bytes_received_ = other.bytes_received_;
        other.fd_ = -1;
    }
    return *this;
}

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Socket Socket::connect_to(const std::string& host, uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string service = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
    if (rc != 0) throw IoError("resolve " + host + ": " + gai_strerror(rc));

    int fd = -1;
    int saved_errno = 0;
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            saved_errno = errno;
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        saved_errno = errno;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        errno = saved_errno;
        throw IoError(errno_text(("connect " + host + ":" + service).c_str()));
    }
    set_nodelay(fd);
    return Socket(fd);
}

void Socket::write_all(const char* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t w = ::send(fd_, data + off, n - off, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw IoError(errno_text("send"));
        }
        off += static_cast<size_t>(w);
        bytes_sent_ += static_cast<uint64_t>(w);
    }
}

bool Socket::try_read_full(char* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t r = ::recv(fd_, data + off, n - off, 0);
        if (r < 0) {
            if (errno == EINTR) continue;
            throw IoError(errno_text("recv"));
        }
        if (r == 0) {
            if (off == 0) return false;
            throw IoError("peer closed mid-message");
        }
        off += static_cast<size_t>(r);
        bytes_received_ += static_cast<uint64_t>(r);
    }
    return true;
}

void Socket::read_full(char* data, size_t n) {
    if (!try_read_full(data, n)) throw IoError("connection closed");
}

std::optional<Frame> Socket::try_read_frame() {
    char header[kFrameHeaderSize];
    if (!try_read_full(header, sizeof header)) return std::nullopt;
    if (std::memcmp(header, kWireMagic, sizeof(kWireMagic)) != 0) {
        throw ProtocolError("bad frame magic");
    }
    uint8_t op = static_cast<uint8_t>(header[4]);
    if (op < static_cast<uint8_t>(Opcode::scan_all) || op > static_cast<uint8_t>(Opcode::stats)) {
        throw ProtocolError("unknown opcode");
    }
    ByteReader len_in(header + 5, 4);
    uint32_t len = len_in.u32();
    if (len > kMaxPayload) throw ProtocolError("oversized frame");
    Frame f{static_cast<Opcode>(op), std::string(len, '\0')};
    if (len > 0) read_full(f.payload.data(), len);
    return f;
}

Frame Socket::read_frame() {
    std::optional<Frame> f = try_read_frame();
    if (!f) throw IoError("connection closed");
    return std::move(*f);
}

void Socket::write_frame(Opcode op, std::string_view payload) {
    write_all(encode_frame(op, payload));
}

StoreServer::StoreServer(const Table& table, Config cfg, uint16_t port)
    : table_(table), cfg_(std::move(cfg)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw IoError(errno_text("socket"));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        std::string err = errno_text("bind");
        ::close(listen_fd_);
        throw IoError(err);
    }
    if (::listen(listen_fd_, 128) < 0) {
        std::string err = errno_text("listen");
        ::close(listen_fd_);
        throw IoError(err);
    }
    socklen_t alen = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &alen);
    port_ = ntohs(addr.sin_port);

    const std::vector<Row>& rows = table_.rows();
    for (size_t i = 0; i < rows.size(); i += kMaxRowsPerBatch) {
        size_t count = std::min<size_t>(kMaxRowsPerBatch, rows.size() - i);
        append_frame(scan_blob_, Opcode::row_batch, encode_row_batch(rows.data() + i, count));
    }
    scan_stats_.rows_fetched = rows.size();

    accept_thread_ = std::thread(&StoreServer::accept_loop, this);
}

StoreServer::~StoreServer() { stop(); }

void StoreServer::stop() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopping_) return;
        stopping_ = true;
        if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
        for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(mu_);
        workers = std::move(workers_);
    }
    for (std::thread& t : workers) {
        if (t.joinable()) t.join();
    }
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
}

void StoreServer::accept_loop() {
    while (true) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) continue;
            break;
        }
        set_nodelay(fd);
        std::lock_guard<std::mutex> lock(mu_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        open_fds_.push_back(fd);
        workers_.emplace_back(&StoreServer::serve_connection, this, fd);
    }
}

void StoreServer::serve_connection(int fd) {
    Socket sock(fd);
    while (true) {
        std::optional<Frame> frame;
        try {
            frame = sock.try_read_frame();
            if (!frame) break;
            handle_request(sock, *frame);
        } catch (const ProtocolError& e) {
            try {
                sock.write_frame(Opcode::error, encode_error(WireErrorCode::protocol, e.what()));
            } catch (const IoError&) {
            }
            break;
        } catch (const ConfigError& e) {
            try {
                sock.write_frame(Opcode::error, encode_error(WireErrorCode::config, e.what()));
            } catch (const IoError&) {
                break;
            }
        } catch (const IoError&) {
            break;
        } catch (const std::exception& e) {
            try {
                sock.write_frame(Opcode::error, encode_error(WireErrorCode::internal, e.what()));
            } catch (const IoError&) {
            }
            break;
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    std::erase(open_fds_, fd);
    // sock closes the fd after it is out of the shutdown list
}

void StoreServer::handle_request(Socket& sock, const Frame& request) {
    switch (request.op) {
        case Opcode::scan_all: {
            if (!request.payload.empty()) throw ProtocolError("scan_all carries no payload");
            Clock::time_point t0 = Clock::now();
            sock.write_all(scan_blob_);
            WireStats stats = scan_stats_;
            stats.elapsed_ns =
                static_cast<uint64_t>(std::chrono::nanoseconds(Clock::now() - t0).count());
            sock.write_frame(Opcode::stats, encode_stats(stats));
            return;
        }
        case Opcode::seek_page:
        case Opcode::two_phase_page: {
            PageRequest req = decode_page_request(request.payload);
            StrategyContext ctx{cfg_.budget, cfg_.spill};
            CostReport cost;
            std::vector<Row> rows = request.op == Opcode::seek_page
                                        ? seek_page(table_, req, ctx, cost)
                                        : two_phase_page(table_, req, ctx, cost);
            for (size_t i = 0; i < rows.size(); i += kMaxRowsPerBatch) {
                size_t count = std::min<size_t>(kMaxRowsPerBatch, rows.size() - i);
                sock.write_frame(Opcode::row_batch, encode_row_batch(rows.data() + i, count));
            }
            WireStats stats;
            stats.rows_fetched = cost.rows_fetched_from_store;
            stats.bytes_spilled = cost.spill.bytes_spilled;
            stats.elapsed_ns = static_cast<uint64_t>(cost.elapsed.count());
            stats.runs_written = cost.spill.runs_written;
            stats.spilled = cost.spill.spilled;
            sock.write_frame(Opcode::stats, encode_stats(stats));
            return;
        }
        default:
            throw ProtocolError("unexpected request opcode");
    }
}

std::chrono::nanoseconds LinkModel::cost(uint64_t bytes) const {
    std::chrono::nanoseconds total = latency;
    if (bandwidth_bytes_per_sec > 0) {
        total += std::chrono::nanoseconds(bytes * 1000000000ull / bandwidth_bytes_per_sec);
    }
    return total;
}

StoreClient::StoreClient(const std::string& host, uint16_t port, LinkModel link)
    : sock_(Socket::connect_to(host, port)), link_(link) {}

StoreClient::Exchange StoreClient::exchange(Opcode op, std::string_view payload) {
    uint64_t sent0 = sock_.bytes_sent();
    uint64_t recv0 = sock_.bytes_received();
    sock_.write_frame(op, payload);

    Exchange ex;
    uint64_t framed = kFrameHeaderSize + payload.size();
    while (true) {
        Frame f = sock_.read_frame();
        framed += kFrameHeaderSize + f.payload.size();
        if (f.op == Opcode::row_batch) {
            decode_row_batch(f.payload, ex.rows);
        } else if (f.op == Opcode::stats) {
            ex.stats = decode_stats(f.payload);
            break;
        } else if (f.op == Opcode::error) {
            auto [code, msg] = decode_error(f.payload);
            last_wire_bytes_ = (sock_.bytes_sent() - sent0) + (sock_.bytes_received() - recv0);
            if (code == WireErrorCode::config) throw ConfigError(msg);
            if (code == WireErrorCode::protocol) throw ProtocolError(msg);
            throw IoError(msg);
        } else {
            throw ProtocolError("unexpected response opcode");
        }
    }
    // Frame arithmetic and socket counters measure the same stream two ways.
    ex.wire_bytes = framed;
    last_wire_bytes_ = (sock_.bytes_sent() - sent0) + (sock_.bytes_received() - recv0);
    server_stats_ = ex.stats;
    return ex;
}

std::vector<Row> StoreClient::seek_page(const PageRequest& req, CostReport& cost) {
    validate_page_request(req);
    cost = {};
    Clock::time_point t0 = Clock::now();
    Exchange ex = exchange(Opcode::seek_page, encode_page_request(req));
    std::chrono::nanoseconds link_cost = link_.cost(ex.wire_bytes);
    if (link_.real_sleep && link_cost.count() > 0) std::this_thread::sleep_for(link_cost);
    cost.rows_fetched_from_store = ex.stats.rows_fetched;
    cost.bytes_crossing_tiers = ex.wire_bytes;
    cost.spill.spilled = ex.stats.spilled;
    cost.spill.runs_written = ex.stats.runs_written;
    cost.spill.bytes_spilled = ex.stats.bytes_spilled;
    cost.elapsed = Clock::now() - t0;
    if (!link_.real_sleep) cost.elapsed += link_cost;
    return std::move(ex.rows);
}

std::vector<Row> StoreClient::two_phase_page(const PageRequest& req, CostReport& cost) {
    validate_page_request(req);
    cost = {};
    Clock::time_point t0 = Clock::now();
    Exchange ex = exchange(Opcode::two_phase_page, encode_page_request(req));
    std::chrono::nanoseconds link_cost = link_.cost(ex.wire_bytes);
    if (link_.real_sleep && link_cost.count() > 0) std::this_thread::sleep_for(link_cost);
    cost.rows_fetched_from_store = ex.stats.rows_fetched;
    cost.bytes_crossing_tiers = ex.wire_bytes;
    cost.spill.spilled = ex.stats.spilled;
    cost.spill.runs_written = ex.stats.runs_written;
    cost.spill.bytes_spilled = ex.stats.bytes_spilled;
    cost.elapsed = Clock::now() - t0;
    if (!link_.real_sleep) cost.elapsed += link_cost;
    return std::move(ex.rows);
}

std::vector<Row> StoreClient::scan_all(CostReport& cost) {
    cost = {};
    Clock::time_point t0 = Clock::now();
    Exchange ex = exchange(Opcode::scan_all, {});
    std::chrono::nanoseconds link_cost = link_.cost(ex.wire_bytes);
    if (link_.real_sleep && link_cost.count() > 0) std::this_thread::sleep_for(link_cost);
    cost.rows_fetched_from_store = ex.stats.rows_fetched;
    cost.bytes_crossing_tiers = ex.wire_bytes;
    cost.elapsed = Clock::now() - t0;
    if (!link_.real_sleep) cost.elapsed += link_cost;
    return std::move(ex.rows);
}

std::vector<Row> StoreClient::adb_page(const PageRequest& req, const StrategyContext& ctx,
                                       CostReport& cost) {
    validate_page_request(req);
    cost = {};
    Clock::time_point t0 = Clock::now();
    Exchange ex = exchange(Opcode::scan_all, {});
    std::chrono::nanoseconds link_cost = link_.cost(ex.wire_bytes);
    if (link_.real_sleep && link_cost.count() > 0) std::this_thread::sleep_for(link_cost);

    std::vector<Row> all = std::move(ex.rows);
    cost.spill = budgeted_sort(all, req.sort_field, ctx.budget, ctx.spill);
    uint64_t offset = static_cast<uint64_t>(req.page_number - 1) * req.page_size;
    std::vector<Row> page;
    if (offset < all.size()) {
        size_t end = std::min<uint64_t>(all.size(), offset + req.page_size);
        page.assign(std::make_move_iterator(all.begin() + static_cast<ptrdiff_t>(offset)),
                    std::make_move_iterator(all.begin() + static_cast<ptrdiff_t>(end)));
    }

    cost.rows_fetched_from_store = ex.stats.rows_fetched;
    cost.bytes_crossing_tiers = ex.wire_bytes;
    cost.elapsed = Clock::now() - t0;
    if (!link_.real_sleep) cost.elapsed += link_cost;
    return page;
}

std::vector<Row> StoreClient::run(Strategy s, const PageRequest& req, const StrategyContext& ctx,
                                  CostReport& cost) {
    switch (s) {
        case Strategy::adb: return adb_page(req, ctx, cost);
        case Strategy::seek: return seek_page(req, cost);
        case Strategy::two_phase: return two_phase_page(req, cost);
    }
    throw ConfigError("unknown strategy");
}

} // namespace pagebench
