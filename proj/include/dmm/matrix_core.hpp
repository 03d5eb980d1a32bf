// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dmm/schema_model.hpp"

namespace dmm {

/// Block coordinates (o, v, r, w): one extraction-schema version against one
/// business-entity version.
struct BlockKey {
    std::string schema;
    int version = 0;
    std::string entity;
    int entity_version = 0;

    auto operator<=>(const BlockKey&) const = default;

    VersionKey column() const { return {schema, version}; }
    VersionKey row() const { return {entity, entity_version}; }
    std::string to_string() const;
};

/// Version super-block coordinates (o, r, w).
struct SuperBlockKey {
    std::string schema;
    std::string entity;
    int entity_version = 0;

    auto operator<=>(const SuperBlockKey&) const = default;
};

/// Matrix coordinate: q indexes the range (rows), p the domain (columns).
struct Cell {
    std::size_t q = 0;
    std::size_t p = 0;

    auto operator<=>(const Cell&) const = default;
};

/// One mapping element with value 1 as declared in an ingestion file.
struct MappingEntry {
    std::string schema;
    int schema_version = 0;
    std::string attribute;
    std::string entity;
    int entity_version = 0;
    std::string cdm_attribute;

    auto operator<=>(const MappingEntry&) const = default;
};

/// The sparse mapping matrix of one state, stored as its one-set. Rows are
/// range (CDM) attributes, columns are domain attributes.
class MappingMatrix {
public:
    MappingMatrix() = default;
    MappingMatrix(std::uint64_t state, AttributeIndex domain, AttributeIndex range, std::set<Cell> ones);

    std::uint64_t state() const { return state_; }
    std::uint64_t registry_revision() const { return registry_revision_; }
    void set_registry_revision(std::uint64_t r) { registry_revision_ = r; }
    std::size_t rows() const { return range_.size(); }
    std::size_t cols() const { return domain_.size(); }
    std::size_t element_count() const { return rows() * cols(); }

    const std::set<Cell>& ones() const { return ones_; }
    bool at(std::size_t q, std::size_t p) const { return ones_.count({q, p}) > 0; }

    const AttributeIndex& domain() const { return domain_; }
    const AttributeIndex& range() const { return range_; }

    BlockKey block_of(const Cell& cell) const;
    /// The ones as named entries, in ascending cell order.
    std::vector<MappingEntry> entries() const;

    /// Dense 0/1 rendering with headers.
    std::string render() const;

private:
    std::uint64_t state_ = 0;
    std::uint64_t registry_revision_ = 0;
    AttributeIndex domain_;
    AttributeIndex range_;
    std::set<Cell> ones_;
};

struct MappingBlock {
    BlockKey key;
    AttributeIndex::Range rows;
    AttributeIndex::Range cols;
    std::vector<Cell> ones;

    bool is_null() const { return ones.empty(); }
    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return cols.size(); }
};

struct SquareBlock {
    enum class Kind { PermutationMatrix, NullBlock };

    Kind kind = Kind::NullBlock;
    BlockKey key;
    std::size_t k = 1;
    /// Induced rows and columns (empty for a null block).
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::vector<Cell> ones;

    bool is_null() const { return kind == Kind::NullBlock; }
};

struct VersionSuperBlock {
    SuperBlockKey key;
    /// Ascending schema version.
    std::vector<MappingBlock> blocks;
};

using ColumnSuperSet = std::map<VersionKey, std::vector<BlockKey>>;
using RowSuperSet = std::map<VersionKey, std::vector<BlockKey>>;

struct SuperSets {
    ColumnSuperSet columns;
    RowSuperSet rows;
};

/// Builds the matrix of the registry's current state from mapping entries.
/// Throws UnresolvableCoordinate or ValidityViolation.
MappingMatrix build_matrix(const Registry& registry, std::span<const MappingEntry> entries,
                           std::uint64_t state = 0);

/// Throws ValidityViolation naming the first block that holds two ones in a
/// row or a column.
void check_validity(const MappingMatrix& matrix);

/// One block per (o,v) x (r,w); ordered by column group, then row group.
std::vector<MappingBlock> partition_blocks(const MappingMatrix& matrix);

SquareBlock largest_permutation_submatrix(const MappingBlock& block);

/// Blocks grouped by (o, r, w), each group ordered by ascending v.
std::vector<VersionSuperBlock> partition_version_superblocks(const MappingMatrix& matrix);

/// Column super-sets keyed by (o,v), row super-sets keyed by (r,w), over
/// every block of the matrix.
SuperSets row_column_supersets(const MappingMatrix& matrix);

}  // namespace dmm
