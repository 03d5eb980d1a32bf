// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "dmm/compaction.hpp"
#include "dmm/mapping_engine.hpp"
#include "dmm/pipeline/io.hpp"

namespace dmm::pipeline {

enum class MapMode {
    Dense,
    /// Sparsifies each message and runs the full-matrix baseline. Slow.
    SparseOracle,
};

struct RunOptions {
    std::size_t workers = 1;
    MapMode mode = MapMode::Dense;
    /// Lines handed to the pool before results are written out.
    std::size_t batch = 512;
};

/// inputs == mapped_sources + errors + suppressed.
struct RunStats {
    std::size_t inputs = 0;
    std::size_t mapped_sources = 0;
    std::size_t outputs = 0;
    std::size_t errors = 0;
    /// Valid inputs that mapped to nothing.
    std::size_t suppressed = 0;

    Json to_json() const;
};

/// Maps one JSON-lines stream of messages or CDC envelopes. Outputs follow
/// input order whatever the worker count. Lines that fail to parse or map
/// are reported on `errors` as `{"line","error","reason","input"}`.
RunStats run_map(std::istream& in, std::ostream& out, std::ostream& errors, const Registry& registry,
                 const DenseSetDPM& dpm, const RunOptions& options = {});

/// Deterministic rendering of dense outputs: one JSON document per line.
std::string render_outputs(const std::vector<Message>& outputs);

}  // namespace dmm::pipeline
