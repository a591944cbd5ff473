// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>

namespace pagebench {

// Sebastiano Vigna's splitmix64. Deterministic across platforms, which is all
// the data generator and page picker need.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased enough for benchmark data; bound must be nonzero.
    uint64_t next_below(uint64_t bound) { return next() % bound; }

private:
    uint64_t state_;
};

} // namespace pagebench
