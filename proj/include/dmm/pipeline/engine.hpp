// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dmm/compaction.hpp"
#include "dmm/mapping_engine.hpp"
#include "dmm/pipeline/io.hpp"
#include "dmm/schema_model.hpp"
#include "dmm/update_engine.hpp"

namespace dmm::pipeline {

struct PendingNotification {
    std::uint64_t id = 0;
    std::uint64_t state = 0;
    UpdateNotification notification;
};

/// Owns one state of the mapping system: registry, compute-side DPM,
/// storage-side DUSB, the published snapshot and unacknowledged notifications.
/// Single writer; readers go through snapshot().
class Engine {
public:
    struct UpdateOutcome {
        std::uint64_t state = 0;
        std::vector<UpdateNotification> notifications;
        UpdateStats stats;
    };

    static Engine initialize(std::span<const SchemaDefinition> schemas, std::span<const MappingEntry> mappings);
    /// Startup path: restores the registry, loads the DUSB store and
    /// rebuilds the DPM from it.
    static Engine load(const std::filesystem::path& store_dir);
    void save(const std::filesystem::path& store_dir) const;

    static std::filesystem::path schemas_path(const std::filesystem::path& dir) { return dir / "schemas.jsonl"; }
    static std::filesystem::path dusb_path(const std::filesystem::path& dir) { return dir / "store.json"; }
    static std::filesystem::path notifications_path(const std::filesystem::path& dir) {
        return dir / "notifications.json";
    }

    std::uint64_t state() const { return dpm_.state; }
    const Registry& registry() const { return registry_; }
    const DenseSetDPM& dpm() const { return dpm_; }
    const DenseSetDUSB& dusb() const { return dusb_; }
    std::shared_ptr<const EngineSnapshot> snapshot() const { return publisher_->current(); }

    /// Cases 3 and 4.
    UpdateOutcome add_version(const SchemaDefinition& def);
    /// Cases 1 and 2.
    UpdateOutcome delete_version(Side side, const std::string& schema_id, int version);
    void replace_block(const BlockKey& key, const DenseBlockElements& elements);
    /// Discards the DPM and recomputes it from the persisted DUSB.
    void rebuild_from_store();

    const std::vector<PendingNotification>& notifications() const { return pending_; }
    /// False when no pending notification has that id.
    bool acknowledge(std::uint64_t id);
    void acknowledge_all() { pending_.clear(); }

private:
    Engine();

    UpdateOutcome finish(UpdateResult result);
    void commit(DenseSetDPM next);

    Registry registry_;
    DenseSetDPM dpm_;
    DenseSetDUSB dusb_;
    std::unique_ptr<SnapshotPublisher> publisher_;
    std::vector<PendingNotification> pending_;
    std::uint64_t next_notification_id_ = 1;
};

}  // namespace dmm::pipeline
