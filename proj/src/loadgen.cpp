// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "pagebench/loadgen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "pagebench/errors.hpp"

namespace pagebench {
namespace {

using Clock = std::chrono::steady_clock;

// 8 sub-buckets per power of two: quantiles come back within one eighth of
// the true value, and histograms merge across workers with plain adds.
constexpr size_t kLogBuckets = 512;

size_t bucket_of(uint64_t v) {
    if (v < 8) return static_cast<size_t>(v);
    int b = 63 - std::countl_zero(v);
    return 8 * static_cast<size_t>(b - 2) + ((v >> (b - 3)) & 7);
}

uint64_t bucket_upper(size_t idx) {
    if (idx < 8) return idx;
    int b = static_cast<int>(idx / 8) + 2;
    uint64_t sub = idx % 8;
    uint64_t lo = (8 + sub) << (b - 3);
    return lo + ((1ull << (b - 3)) - 1);
}

struct LogHist {
    std::array<uint32_t, kLogBuckets> buckets{};
    uint64_t total = 0;

    void add(uint64_t v) {
        size_t idx = bucket_of(v);
        if (idx >= kLogBuckets) idx = kLogBuckets - 1;
        ++buckets[idx];
        ++total;
    }

    void merge(const LogHist& other) {
        for (size_t i = 0; i < kLogBuckets; ++i) buckets[i] += other.buckets[i];
        total += other.total;
    }

    uint64_t quantile(double q) const {
        if (total == 0) return 0;
        auto rank = static_cast<uint64_t>(std::ceil(q * static_cast<double>(total)));
        if (rank < 1) rank = 1;
        uint64_t seen = 0;
        for (size_t i = 0; i < kLogBuckets; ++i) {
            seen += buckets[i];
            if (seen >= rank) return bucket_upper(i);
        }
        return bucket_upper(kLogBuckets - 1);
    }
};

struct IntervalAccum {
    uint64_t requests = 0;
    uint64_t errors = 0;
    double sum_ns = 0;
    LogHist hist;
};

} // namespace

uint32_t LoadProfile::interval_count() const {
    if (step_interval.count() <= 0) return 0;
    auto k = (ramp_duration.count() + step_interval.count() - 1) / step_interval.count();
    return static_cast<uint32_t>(k);
}

uint32_t LoadProfile::users_at(uint32_t interval) const {
    return initial_users + step_users * interval;
}

uint32_t LoadProfile::max_users() const {
    uint32_t k = interval_count();
    return k == 0 ? initial_users : users_at(k - 1);
}

std::chrono::nanoseconds LoadProfile::scaled(std::chrono::seconds d) const {
    double ns = static_cast<double>(d.count()) * 1e9 / time_scale;
    return std::chrono::nanoseconds(static_cast<int64_t>(ns));
}

LoadReport run_load(const LoadProfile& profile, const std::function<void(uint32_t)>& target) {
    LoadReport report;
    report.profile = profile;
    if (profile.initial_users < 1) {
        throw ConfigError("load profile needs at least one initial user");
    }
    if (profile.step_interval.count() <= 0 || profile.ramp_duration.count() <= 0) {
        throw ConfigError("load profile durations must be positive");
    }
    if (!(profile.time_scale > 0)) throw ConfigError("time_scale must be positive");
    if (!target) throw ConfigError("load target is empty");

    // One probe before committing max_users() threads to a broken target.
    try {
        target(0);
    } catch (const std::exception& e) {
        report.valid = false;
        report.error = std::string("probe request failed: ") + e.what();
        return report;
    }

    uint32_t k = profile.interval_count();
    uint32_t users = profile.max_users();
    std::chrono::nanoseconds step = profile.scaled(profile.step_interval);
    if (step.count() <= 0) throw ConfigError("scaled step interval is zero");

    std::vector<std::vector<IntervalAccum>> accums(users);
    for (auto& a : accums) a.resize(k);

    Clock::time_point t0 = Clock::now() + std::chrono::milliseconds(5);
    Clock::time_point ramp_end = t0 + profile.scaled(profile.ramp_duration);

    auto start_interval = [&](uint32_t w) -> uint32_t {
        if (w < profile.initial_users) return 0;
        return (w - profile.initial_users) / profile.step_users + 1;
    };

    std::vector<std::thread> threads;
    threads.reserve(users);
    for (uint32_t w = 0; w < users; ++w) {
        threads.emplace_back([&, w]() {
            std::vector<IntervalAccum>& mine = accums[w];
            std::this_thread::sleep_until(t0 + start_interval(w) * step);
            while (true) {
                Clock::time_point begin = Clock::now();
                if (begin >= ramp_end) break;
                auto idx = static_cast<uint64_t>((begin - t0) / step);
                if (idx >= k) idx = k - 1;
                IntervalAccum& acc = mine[idx];
                ++acc.requests;
                try {
                    target(w);
                    auto ns = static_cast<uint64_t>(
                        std::chrono::nanoseconds(Clock::now() - begin).count());
                    acc.sum_ns += static_cast<double>(ns);
                    acc.hist.add(ns);
                } catch (const std::exception&) {
                    ++acc.errors;
                }
            }
        });
    }
    for (std::thread& t : threads) t.join();
    Clock::time_point joined = Clock::now();
    report.drain_elapsed = joined > ramp_end ? joined - ramp_end : Clock::duration::zero();

    report.intervals.resize(k);
    for (uint32_t i = 0; i < k; ++i) {
        IntervalStats& s = report.intervals[i];
        s.interval = i;
        s.users = profile.users_at(i);
        double sum = 0;
        LogHist merged;
        for (uint32_t w = 0; w < users; ++w) {
            const IntervalAccum& acc = accums[w][i];
            s.requests += acc.requests;
            s.errors += acc.errors;
            sum += acc.sum_ns;
            merged.merge(acc.hist);
        }
        uint64_t ok = s.requests - s.errors;
        s.mean_ns = ok > 0 ? sum / static_cast<double>(ok) : 0.0;
        s.median_ns = merged.quantile(0.50);
        s.p95_ns = merged.quantile(0.95);
        report.total_requests += s.requests;
        report.total_errors += s.errors;
    }
    return report;
}

LoadComparison compare_reports(const LoadReport& a, const LoadReport& b) {
    if (!a.valid || !b.valid) throw ConfigError("cannot compare invalid load reports");
    if (a.intervals.empty() || b.intervals.empty()) throw ConfigError("empty load report");
    if (a.intervals.size() != b.intervals.size()) throw ConfigError("mismatched load profiles");
    for (size_t i = 0; i < a.intervals.size(); ++i) {
        if (a.intervals[i].users != b.intervals[i].users) {
            throw ConfigError("mismatched load profiles");
        }
    }
    LoadComparison cmp;
    for (size_t i = 0; i < a.intervals.size(); ++i) {
        const IntervalStats& ia = a.intervals[i];
        const IntervalStats& ib = b.intervals[i];
        if (ia.requests - ia.errors == 0 || ib.requests - ib.errors == 0) {
            cmp.mean_sign.push_back(0);
            continue;
        }
        ++cmp.intervals_total;
        int sign = ia.mean_ns < ib.mean_ns ? -1 : (ia.mean_ns > ib.mean_ns ? 1 : 0);
        cmp.mean_sign.push_back(sign);
        if (sign < 0) ++cmp.intervals_a_faster;
    }
    if (cmp.intervals_total > 0) {
        cmp.fraction_a_faster =
            static_cast<double>(cmp.intervals_a_faster) / static_cast<double>(cmp.intervals_total);
    }
    return cmp;
}

void write_load_csv(std::ostream& out, const LoadReport& report) {
    out << "interval,users,requests,mean_ns,median_ns,p95_ns,errors\n";
    char buf[64];
    for (const IntervalStats& s : report.intervals) {
        std::snprintf(buf, sizeof buf, "%.1f", s.mean_ns);
        out << s.interval << ',' << s.users << ',' << s.requests << ',' << buf << ','
            << s.median_ns << ',' << s.p95_ns << ',' << s.errors << '\n';
    }
}

} // namespace pagebench
