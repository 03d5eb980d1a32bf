// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dmm/pipeline/workload.hpp"

namespace dmm::pipeline {

/// Small randomized network: at least 3 schemas x 3 versions x 5 attributes
/// with random duplication and entity fan-out.
WorkloadConfig random_fixture_config(std::uint64_t seed, std::size_t messages = 10);

struct VerifyOptions {
    std::size_t fixtures = 100;
    std::size_t messages_per_fixture = 10;
    std::uint64_t seed = 1;
};

struct VerifyCheck {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;
    bool ok() const { return failures == 0; }
};

/// Compaction round trips, store round trip and sparse-vs-dense mapping.
std::vector<VerifyCheck> verify(const VerifyOptions& options = {});

}  // namespace dmm::pipeline
