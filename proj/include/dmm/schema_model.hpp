// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dmm {

enum class Side { Domain, Range };

const char* to_string(Side side);

/// (schema, version) on either side: (o, v) for extraction schemas,
/// (r, w) for business entities.
struct VersionKey {
    std::string schema;
    int version = 0;

    auto operator<=>(const VersionKey&) const = default;
};

struct VersionKeyHash {
    std::size_t operator()(const VersionKey& k) const noexcept {
        return std::hash<std::string>{}(k.schema) * 31u + static_cast<std::size_t>(k.version);
    }
};

/// One schema version: an ordered block of attributes plus links to the
/// attributes they duplicate in the previous registered version.
struct VersionedSchema {
    std::string schema_id;
    int version = 0;
    std::vector<std::string> attributes;
    /// new attribute -> predecessor attribute in the previous version
    std::map<std::string, std::string> equivalences;

    std::optional<std::size_t> position(const std::string& attribute) const;
    bool contains(const std::string& attribute) const { return position(attribute).has_value(); }
};

enum class ChangeCase : int {
    DeletedDomainVersion = 1,
    DeletedRangeVersion = 2,
    AddedDomainVersion = 3,
    AddedRangeVersion = 4,
};

struct ChangeEvent {
    ChangeCase change = ChangeCase::AddedDomainVersion;
    std::string schema_id;
    int version = 0;

    Side side() const;
    bool is_addition() const;
    bool operator==(const ChangeEvent&) const = default;
};

ChangeEvent make_event(Side side, bool addition, std::string schema_id, int version);

struct AttributeEntry {
    std::string schema;
    int version = 0;
    std::string attribute;
};

/// Dense ordinals over every registered attribute of one side. Entries are
/// grouped by schema (first-registration order), then ascending version,
/// then attribute position, so each (schema, version) owns a contiguous range.
class AttributeIndex {
public:
    struct Range {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::size_t size() const { return end - begin; }
    };

    AttributeIndex() = default;

    std::size_t size() const { return entries_.size(); }
    const AttributeEntry& at(std::size_t ordinal) const { return entries_.at(ordinal); }
    const std::vector<AttributeEntry>& entries() const { return entries_; }

    std::optional<std::size_t> ordinal(const VersionKey& key, const std::string& attribute) const;
    std::optional<Range> range(const VersionKey& key) const;
    /// (schema, version) groups in ordinal order.
    const std::vector<VersionKey>& groups() const { return groups_; }
    /// Index into groups() of the group owning `ordinal`.
    std::size_t group_of(std::size_t ordinal) const { return group_of_.at(ordinal); }
    std::optional<std::size_t> group_index(const VersionKey& key) const;

private:
    friend class SchemaTree;

    std::vector<AttributeEntry> entries_;
    std::vector<VersionKey> groups_;
    std::vector<std::size_t> group_of_;
    std::unordered_map<VersionKey, Range, VersionKeyHash> ranges_;
    std::unordered_map<VersionKey, std::size_t, VersionKeyHash> group_index_;
};

/// One side of the mapping network: every versioned schema below the root.
class SchemaTree {
public:
    explicit SchemaTree(Side side) : side_(side) {}
    SchemaTree(const SchemaTree& other);
    SchemaTree& operator=(const SchemaTree& other);
    SchemaTree(SchemaTree&& other) noexcept;
    SchemaTree& operator=(SchemaTree&& other) noexcept;

    Side side() const { return side_; }

    /// Registers the next version of `schema_id`. When `equivalences` is
    /// nullopt, attributes whose names also occur in the previous version are
    /// linked to them.
    const VersionedSchema& register_version(const std::string& schema_id, int version,
                                            std::vector<std::string> attributes,
                                            std::optional<std::map<std::string, std::string>> equivalences);

    /// Reinstates a stored version without the contiguity rule (versions must
    /// still ascend). Used when loading a persisted registry.
    const VersionedSchema& restore_version(VersionedSchema schema);

    /// Removes a version. Successor links into it are rewired to its own
    /// predecessors so lineage survives the gap.
    void delete_version(const std::string& schema_id, int version);

    bool has_schema(const std::string& schema_id) const;
    bool has_version(const std::string& schema_id, int version) const;
    const VersionedSchema* find(const std::string& schema_id, int version) const;
    const VersionedSchema& at(const std::string& schema_id, int version) const;

    /// Schema ids in first-registration order.
    const std::vector<std::string>& schema_ids() const { return order_; }
    /// Registered versions of a schema, ascending. Empty for an unknown schema.
    std::vector<int> versions(const std::string& schema_id) const;
    const std::vector<VersionedSchema>& schema_versions(const std::string& schema_id) const;
    std::optional<int> previous_version(const std::string& schema_id, int version) const;
    std::optional<int> next_version(const std::string& schema_id, int version) const;
    std::optional<int> latest_version(const std::string& schema_id) const;
    /// Position of the schema in registration order; used for ordering output.
    std::optional<std::size_t> schema_rank(const std::string& schema_id) const;

    /// Attribute of `to_version` that shares the lineage root of `attribute`
    /// in `from_version`, or nullopt.
    std::optional<std::string> resolve_equivalent(const std::string& schema_id,
                                                  const std::string& attribute, int from_version,
                                                  int to_version) const;

    /// Rebuilt lazily after mutations.
    const AttributeIndex& index() const;

private:
    void validate_attributes(const VersionedSchema& schema) const;
    void validate_equivalences(const VersionedSchema& schema) const;
    void rebuild_index() const;

    Side side_;
    std::vector<std::string> order_;
    std::unordered_map<std::string, std::vector<VersionedSchema>> schemas_;
    mutable std::mutex index_mutex_;
    mutable bool index_dirty_ = false;
    mutable AttributeIndex index_;
};

/// Both schema trees plus the change events their mutations emit. The
/// revision counts mutations and lets dense sets prove which registry
/// contents they mirror.
class Registry {
public:
    Registry() : domain_(Side::Domain), range_(Side::Range) {}

    SchemaTree& tree(Side side) { return side == Side::Domain ? domain_ : range_; }
    const SchemaTree& tree(Side side) const { return side == Side::Domain ? domain_ : range_; }
    const SchemaTree& domain() const { return domain_; }
    const SchemaTree& range() const { return range_; }

    const VersionedSchema& register_schema_version(
        Side side, const std::string& schema_id, int version, std::vector<std::string> attributes,
        std::optional<std::map<std::string, std::string>> equivalences = std::nullopt);
    ChangeEvent delete_schema_version(Side side, const std::string& schema_id, int version);
    void restore(Side side, VersionedSchema schema);

    std::optional<std::string> resolve_equivalent(Side side, const std::string& schema_id,
                                                  const std::string& attribute, int from_version,
                                                  int to_version) const {
        return tree(side).resolve_equivalent(schema_id, attribute, from_version, to_version);
    }

    std::uint64_t revision() const { return revision_; }
    /// Pins the revision, e.g. after restoring a persisted registry.
    void set_revision(std::uint64_t revision) { revision_ = revision; }

    const std::vector<ChangeEvent>& pending_events() const { return events_; }
    std::vector<ChangeEvent> drain_events();

private:
    SchemaTree domain_;
    SchemaTree range_;
    std::uint64_t revision_ = 0;
    std::vector<ChangeEvent> events_;
};

}  // namespace dmm
