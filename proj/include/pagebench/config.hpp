// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "pagebench/bench.hpp"

namespace pagebench {

// Scenario matrix files: `key = value` lines, `#` comments, `[name]` section
// headers. Keys before the first section set defaults for every scenario.
// rows, strategy, field and page accept space-separated lists and expand to
// the cartesian product, suffixing the scenario name per expanded value.
// Integers may use `_` separators.
std::vector<ScenarioConfig> parse_matrix_text(std::string_view text,
                                              const ScenarioConfig& defaults = {});
std::vector<ScenarioConfig> parse_matrix_file(const std::filesystem::path& path,
                                              const ScenarioConfig& defaults = {});

} // namespace pagebench
