// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace pagebench {

// Closed-loop ramp: start with initial_users concurrent workers, add
// step_users more at every step_interval until ramp_duration ends, then let
// in-flight work drain. Workers have zero think time. time_scale divides all
// durations, so 60 turns the ten-minute profile into a ten-second run.
struct LoadProfile {
    uint32_t initial_users = 5;
    uint32_t step_users = 15;
    std::chrono::seconds step_interval{60};
    std::chrono::seconds ramp_duration{600};
    std::chrono::seconds cooldown{120};
    double time_scale = 60.0;

    uint32_t interval_count() const;
    uint32_t users_at(uint32_t interval) const;
    uint32_t max_users() const;
    std::chrono::nanoseconds scaled(std::chrono::seconds d) const;
};

struct IntervalStats {
    uint32_t interval = 0;
    uint32_t users = 0;
    uint64_t requests = 0;
    uint64_t errors = 0;
    double mean_ns = 0;
    uint64_t median_ns = 0;  // log-bucket approximation
    uint64_t p95_ns = 0;     // log-bucket approximation
};

struct LoadReport {
    LoadProfile profile;
    bool valid = true;
    std::string error;
    std::vector<IntervalStats> intervals;
    std::chrono::nanoseconds drain_elapsed{0};
    uint64_t total_requests = 0;
    uint64_t total_errors = 0;
};

// target is called concurrently with the worker id; a throw counts as one
// errored request. A probe request runs first, and a failing probe
// invalidates the whole run instead of producing 140 threads of noise.
LoadReport run_load(const LoadProfile& profile, const std::function<void(uint32_t)>& target);

struct LoadComparison {
    uint32_t intervals_total = 0;
    uint32_t intervals_a_faster = 0;
    double fraction_a_faster = 0;
    std::vector<int> mean_sign;  // -1 a faster, +1 b faster, 0 tie
};

// Throws ConfigError when the reports are invalid, empty, or ran different
// user schedules.
LoadComparison compare_reports(const LoadReport& a, const LoadReport& b);

void write_load_csv(std::ostream& out, const LoadReport& report);

} // namespace pagebench
