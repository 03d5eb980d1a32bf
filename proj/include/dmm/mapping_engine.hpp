// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dmm/compaction.hpp"
#include "dmm/matrix_core.hpp"
#include "dmm/schema_model.hpp"
#include "dmm/thread_pool.hpp"

namespace dmm {

/// Data objects travel verbatim; the engine never inspects or converts them.
using DataObject = nlohmann::ordered_json;

enum class MessageSide { Incoming, Outgoing };

struct Field {
    std::string attribute;
    DataObject value;

    bool operator==(const Field&) const = default;
};

/// Schema-tagged payload. Incoming messages name an extraction schema
/// version (o, v), outgoing ones a business-entity version (r, w).
struct Message {
    MessageSide side = MessageSide::Incoming;
    std::string schema_id;
    int version = 0;
    std::uint64_t state = 0;
    std::vector<Field> payload;

    const DataObject* find(const std::string& attribute) const;
    bool operator==(const Message&) const = default;
};

/// Strips null values.
Message densify(const Message& msg);
/// Strips null values and drops messages left with an empty payload.
std::vector<Message> densify(const std::vector<Message>& msgs);
/// Adds explicit nulls for every schema attribute missing from the payload,
/// in schema order. Throws PayloadMismatch on attributes foreign to the schema.
Message sparsify(const Message& msg, const SchemaTree& tree);

/// Sequential baseline over the full matrix. Emits one outgoing message per
/// block of the column (o, v), including all-null ones.
std::vector<Message> map_sparse(const Message& msg, const MappingMatrix& matrix);

struct SnapshotElement {
    std::string attribute;
    std::string cdm_attribute;
};

struct SnapshotBlock {
    std::string entity;
    int entity_version = 0;
    /// Ordered by the CDM attribute's position in its schema.
    std::vector<SnapshotElement> elements;
};

struct SnapshotColumn {
    /// Ordered by entity registration rank, then entity version.
    std::vector<SnapshotBlock> blocks;
};

/// Immutable compute-side view of one state: the dense column super-sets
/// behind a hash map for constant-time lookup by (o, v).
class EngineSnapshot {
public:
    EngineSnapshot(std::uint64_t state, std::unordered_map<VersionKey, SnapshotColumn, VersionKeyHash> columns,
                   std::size_t element_count);

    std::uint64_t state() const { return state_; }
    /// nullptr when (o, v) is not registered in this state.
    const SnapshotColumn* column(const VersionKey& key) const;
    /// Registered domain versions that carry at least one block.
    std::vector<VersionKey> mapped_columns() const;
    std::size_t column_count() const { return columns_.size(); }
    std::size_t element_count() const { return element_count_; }

private:
    std::uint64_t state_;
    std::unordered_map<VersionKey, SnapshotColumn, VersionKeyHash> columns_;
    std::size_t element_count_;
};

EngineSnapshot build_snapshot(const DenseSetDPM& dpm, const Registry& registry);

/// Dense production path: emits (c_q, ad_p) for every stored element whose
/// attribute is present, and suppresses outputs with an empty payload.
std::vector<Message> map_dense(const Message& msg, const EngineSnapshot& snapshot);

/// Same result as map_dense with the blocks of the column mapped
/// concurrently on `pool`. Must not be called from a task of `pool`.
std::vector<Message> map_dense_parallel(const Message& msg, const EngineSnapshot& snapshot, ThreadPool& pool);

/// Holds the current snapshot and swaps it atomically. Readers keep the
/// snapshot they acquired until they drop it.
class SnapshotPublisher {
public:
    std::shared_ptr<const EngineSnapshot> publish(const DenseSetDPM& dpm, const Registry& registry);
    std::shared_ptr<const EngineSnapshot> current() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const EngineSnapshot> current_;
};

}  // namespace dmm
