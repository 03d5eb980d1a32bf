// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dmm/compaction.hpp"
#include "dmm/schema_model.hpp"

namespace dmm {

enum class NotificationKind { ShrunkenPermutation, NewNullBlock };

const char* to_string(NotificationKind kind);

/// Raised when a block copied into a new version lost some of its ones and
/// needs a human to double-check it.
struct UpdateNotification {
    BlockKey block;
    /// Block the values were copied from.
    BlockKey source;
    NotificationKind kind = NotificationKind::ShrunkenPermutation;
    std::size_t old_k = 0;
    std::size_t new_k = 0;

    bool operator==(const UpdateNotification&) const = default;
};

struct UpdateStats {
    std::size_t copied = 0;
    std::size_t deleted = 0;
};

struct UpdateResult {
    DenseSetDPM dpm;
    std::vector<UpdateNotification> notifications;
    UpdateStats stats;
};

enum class Axis { Row, Column };

/// Images of the block's elements in `to_version` along one axis; elements
/// whose attribute has no equivalent there are dropped.
DenseBlockElements copy_block_via_equivalence(const DenseBlockElements& block, const std::string& schema,
                                              int from_version, int to_version, const Registry& registry,
                                              Axis axis);

/// Moves the dense set from state i to i+1 after one registry change. The
/// registry must already reflect the change and be exactly one revision
/// ahead of `dpm`; otherwise StateMismatch.
///
/// Additions copy the previous version's blocks through attribute lineage.
/// Adding a business-entity version also drops every block of the version it
/// supersedes.
UpdateResult apply_change(const DenseSetDPM& dpm, const ChangeEvent& event, const Registry& registry);

/// Replaces one block by user-supplied elements after 1:1 validation and
/// advances the state. An empty element set removes the block.
DenseSetDPM replace_block(const DenseSetDPM& dpm, const BlockKey& key, const DenseBlockElements& elements,
                          const Registry& registry);

}  // namespace dmm
