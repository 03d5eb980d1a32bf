// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <set>
#include <string>

#include "dmm/compaction.hpp"
#include "dmm/pipeline/verify.hpp"
#include "dmm/update_engine.hpp"
#include "support/oracles.hpp"

namespace dmm::testing {

struct OracleRun {
    std::size_t events = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

/// Drives `events` random changes through a random fixture, comparing each
/// set-based update with the full-matrix oracle.
inline OracleRun run_update_oracle(std::uint64_t seed, std::size_t events) {
    OracleRun run;
    const auto w = pipeline::generate_workload(pipeline::random_fixture_config(seed, 1));
    Registry registry;
    pipeline::register_all(registry, w.schemas);
    registry.drain_events();
    auto dpm = compact_to_dpm(build_matrix(registry, w.mappings));
    std::mt19937_64 rng(seed * 7919);

    for (std::size_t i = 0; i < events; ++i) {
        const auto full = FullMatrix::from(decompact_dpm(dpm, registry));
        const auto change = random_change(registry, rng, static_cast<int>(i));
        std::optional<int> previous;
        const VersionedSchema* added = nullptr;
        ChangeEvent event;
        if (change.addition) {
            previous = registry.tree(change.side).latest_version(change.schema);
            added = &registry.register_schema_version(change.side, change.schema, change.version, change.attributes,
                                                      change.equivalences);
            event = registry.drain_events().back();
        } else {
            event = registry.delete_schema_version(change.side, change.schema, change.version);
            registry.drain_events();
        }
        const auto expected = full_matrix_update(full, event, added, previous);
        const auto result = apply_change(dpm, event, registry);
        const auto got = one_entries(decompact_dpm(result.dpm, registry));
        ++run.events;
        if (got != expected && run.mismatches++ == 0)
            run.first_mismatch = "seed " + std::to_string(seed) + " event " + std::to_string(i) + " case " +
                                 std::to_string(static_cast<int>(event.change)) + " " + event.schema_id + ".v" +
                                 std::to_string(event.version);
        dpm = result.dpm;
        if (event.change == ChangeCase::AddedRangeVersion && previous) {
            registry.delete_schema_version(Side::Range, event.schema_id, *previous);
            registry.drain_events();
            dpm.registry_revision = registry.revision();
        }
    }
    return run;
}

}  // namespace dmm::testing
