// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dmm/matrix_core.hpp"
#include "dmm/pipeline/io.hpp"

namespace dmm::pipeline {

/// Synthetic mapping network. Counts are >= 1.
struct WorkloadConfig {
    std::size_t schemas = 100;
    std::size_t versions_per_schema = 10;
    std::size_t attrs_per_version = 10;
    std::size_t cdm_entities = 10;
    std::size_t cdm_attrs = 10;
    /// Share of an entity's attributes mapped by each block.
    double mapped_fraction = 0.5;
    std::size_t messages = 1000;
    std::uint64_t seed = 1;

    /// Business entities each extraction schema maps into.
    std::size_t entities_per_schema = 1;
    /// Share of a version's attributes carried into the next version.
    double duplication = 0.8;
    /// Chance that a version after the first maps nothing.
    double null_version_fraction = 0.1;
    /// Chance that a message attribute carries no value.
    double null_value_fraction = 0.1;

    /// Ones per block.
    std::size_t mapped_per_block() const;
    /// Throws InfeasibleConfig.
    void validate() const;
    bool operator==(const WorkloadConfig&) const = default;
};

/// Unknown keys are rejected; missing keys keep their defaults.
WorkloadConfig workload_config_from_json(const Json& j);
Json to_json(const WorkloadConfig& config);

struct Workload {
    std::vector<SchemaDefinition> schemas;
    std::vector<MappingEntry> mappings;
    /// One incoming message per line, without a state tag.
    std::vector<Json> messages;
};

/// Same config, same bytes.
Workload generate_workload(const WorkloadConfig& config);

/// Writes schemas.jsonl, mappings.csv and messages.jsonl into `dir`.
void write_workload(const Workload& workload, const std::filesystem::path& dir);

}  // namespace dmm::pipeline
