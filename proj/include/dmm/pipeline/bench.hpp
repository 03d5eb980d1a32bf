// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dmm/pipeline/run_map.hpp"
#include "dmm/pipeline/workload.hpp"

namespace dmm::pipeline {

/// Microseconds.
struct LatencySummary {
    std::size_t samples = 0;
    double min = 0;
    double median = 0;
    double mean = 0;
    double p95 = 0;
    double max = 0;
};

LatencySummary summarize(std::vector<double> samples);

struct BenchOptions {
    std::size_t workers = 1;
    std::size_t warmup_rounds = 1;
    /// Timed passes over the message stream.
    std::size_t rounds = 3;
};

struct BenchReport {
    WorkloadConfig config;
    std::size_t count = 0;
    RunStats run;
    LatencySummary latency;
    std::size_t matrix_elements = 0;
    std::size_t dpm_elements = 0;
    std::size_t dusb_ones = 0;
    std::size_t dusb_nulls = 0;
    /// 1 - stored / (m x n)
    double dpm_compaction = 0;
    double dusb_compaction = 0;
    /// Cached column-index entries.
    std::size_t cache_columns = 0;
    double setup_seconds = 0;

    Json to_json() const;
    std::string table() const;
};

/// Generates the workload, initializes an engine from it, streams the
/// messages through run_map and times map_dense per message on a warm
/// snapshot.
BenchReport bench(const WorkloadConfig& config, const BenchOptions& options = {});

}  // namespace dmm::pipeline
