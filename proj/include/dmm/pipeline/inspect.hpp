// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "dmm/compaction.hpp"
#include "dmm/pipeline/io.hpp"
#include "dmm/schema_model.hpp"

namespace dmm::pipeline {

/// Extraction-schema versions whose messages feed (entity, version), in
/// schema registration order. Throws UnknownVersion for an unregistered
/// entity version.
std::vector<VersionKey> inspect_reverse(const DenseSetDPM& dpm, const Registry& registry, const std::string& entity,
                                        int entity_version);

struct ProgressionTarget {
    std::string entity;
    int entity_version = 0;
    std::size_t elements = 0;
};

struct ProgressionRow {
    int version = 0;
    std::vector<ProgressionTarget> targets;
};

/// One row per registered version of the schema. Throws UnknownSchema.
std::vector<ProgressionRow> inspect_progression(const DenseSetDPM& dpm, const Registry& registry,
                                                const std::string& schema_id);

Json reverse_to_json(const std::vector<VersionKey>& sources);
Json progression_to_json(const std::string& schema_id, const std::vector<ProgressionRow>& rows);

}  // namespace dmm::pipeline
