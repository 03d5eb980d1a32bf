// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dmm/matrix_core.hpp"
#include "dmm/schema_model.hpp"

namespace dmm {

/// A stored mapping element with value 1, addressed by attribute names so it
/// stays meaningful across states.
struct DenseElement {
    std::string cdm_attribute;
    std::string attribute;

    auto operator<=>(const DenseElement&) const = default;
};

using DenseBlockElements = std::set<DenseElement>;

/// Per-block dense permutation-matrix elements. The compute-side
/// representation; never holds an empty block.
struct DenseSetDPM {
    std::uint64_t state = 0;
    /// Registry revision this set mirrors; not part of equality.
    std::uint64_t registry_revision = 0;
    std::map<BlockKey, DenseBlockElements> blocks;

    std::size_t element_count() const;
    std::set<std::pair<BlockKey, DenseElement>> element_set() const;
    ColumnSuperSet column_superset() const;
    RowSuperSet row_superset() const;

    bool operator==(const DenseSetDPM& o) const { return state == o.state && blocks == o.blocks; }
};

enum class SquareKind { PermutationMatrix, SpecialNull };

struct DusbEntry {
    int version = 0;
    SquareKind kind = SquareKind::PermutationMatrix;
    DenseBlockElements ones;

    bool is_null() const { return kind == SquareKind::SpecialNull; }
    bool operator==(const DusbEntry&) const = default;
};

/// Unique square blocks per version super-block. The storage-side
/// representation.
struct DenseSetDUSB {
    std::uint64_t state = 0;
    std::map<SuperBlockKey, std::vector<DusbEntry>> superblocks;

    std::size_t one_element_count() const;
    std::size_t special_null_count() const;

    bool operator==(const DenseSetDUSB&) const = default;
};

enum class EquivalenceMode {
    Lineage,
    /// Compares attribute positions inside their versions. Debug aid only.
    Positional,
};

DenseSetDPM compact_to_dpm(const MappingMatrix& matrix);

DenseSetDUSB compact_to_dusb(const MappingMatrix& matrix, const Registry& registry,
                             EquivalenceMode mode = EquivalenceMode::Lineage);

/// Two square blocks of the same (o, r, w) super-block are equivalent when
/// both are null, or both are permutation matrices over identical rows whose
/// columns correspond by attribute lineage.
bool block_equivalent(const std::string& schema, const DusbEntry& a, const DusbEntry& b,
                      const Registry& registry, EquivalenceMode mode = EquivalenceMode::Lineage);

MappingMatrix decompact_dpm(const DenseSetDPM& dpm, const Registry& registry);

/// Replays every stored square block into each registered version from its
/// own up to the next stored one, re-indexing columns through lineage.
MappingMatrix decompact_dusb(const DenseSetDUSB& dusb, const Registry& registry);

DenseSetDPM rebuild_dpm_from_dusb(const DenseSetDUSB& dusb, const Registry& registry);

/// 1 - stored / (m x n); 1 for an empty matrix.
double compaction_ratio(std::size_t stored, std::size_t total_elements);

}  // namespace dmm
