// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/pipeline/engine.hpp"

#include <algorithm>

#include "dmm/error.hpp"

namespace dmm::pipeline {

Engine::Engine() : publisher_(std::make_unique<SnapshotPublisher>()) {}

Engine Engine::initialize(std::span<const SchemaDefinition> schemas, std::span<const MappingEntry> mappings) {
    Engine e;
    register_all(e.registry_, schemas);
    e.registry_.drain_events();
    auto matrix = build_matrix(e.registry_, mappings, 0);
    e.dpm_ = compact_to_dpm(matrix);
    e.dusb_ = compact_to_dusb(matrix, e.registry_);
    e.publisher_->publish(e.dpm_, e.registry_);
    return e;
}

Engine Engine::load(const std::filesystem::path& store_dir) {
    if (!std::filesystem::is_directory(store_dir))
        throw Error(ErrorCode::CorruptStore, store_dir.string() + " is not a store directory");
    Engine e;
    std::vector<SchemaDefinition> defs;
    try {
        defs = read_schema_file(schemas_path(store_dir));
    } catch (const Error& err) {
        throw Error(ErrorCode::CorruptStore, err.what());
    }
    e.registry_ = restore_registry(defs);
    e.dusb_ = load_store(dusb_path(store_dir));
    e.dpm_ = rebuild_dpm_from_dusb(e.dusb_, e.registry_);

    const auto npath = notifications_path(store_dir);
    if (std::filesystem::exists(npath)) {
        Json j;
        try {
            j = Json::parse(read_text(npath));
            e.next_notification_id_ = j.at("next_id").get<std::uint64_t>();
            for (const auto& p : j.at("pending"))
                e.pending_.push_back(
                    {p.at("id").get<std::uint64_t>(), p.at("state").get<std::uint64_t>(),
                     notification_from_json(p.at("notification"))});
        } catch (const Json::exception& ex) {
            throw Error(ErrorCode::CorruptStore, npath.string() + ": " + ex.what());
        }
    }
    e.publisher_->publish(e.dpm_, e.registry_);
    return e;
}

void Engine::save(const std::filesystem::path& store_dir) const {
    std::filesystem::create_directories(store_dir);
    std::ostringstream schemas;
    write_schema_lines(schemas, export_registry(registry_));
    write_text(schemas_path(store_dir), schemas.str());
    save_store(dusb_, dusb_path(store_dir));

    Json j;
    j["next_id"] = next_notification_id_;
    Json list = Json::array();
    for (const auto& p : pending_) {
        Json item;
        item["id"] = p.id;
        item["state"] = p.state;
        item["notification"] = to_json(p.notification);
        list.push_back(std::move(item));
    }
    j["pending"] = std::move(list);
    write_text(notifications_path(store_dir), j.dump(2) + "\n");
}

void Engine::commit(DenseSetDPM next) {
    auto dusb = compact_to_dusb(decompact_dpm(next, registry_), registry_);
    publisher_->publish(next, registry_);
    dpm_ = std::move(next);
    dusb_ = std::move(dusb);
}

Engine::UpdateOutcome Engine::finish(UpdateResult result) {
    UpdateOutcome out{result.dpm.state, result.notifications, result.stats};
    for (const auto& n : result.notifications) pending_.push_back({next_notification_id_++, out.state, n});
    commit(std::move(result.dpm));
    return out;
}

Engine::UpdateOutcome Engine::add_version(const SchemaDefinition& def) {
    const auto previous = registry_.tree(def.side).latest_version(def.schema);
    auto before = registry_;
    registry_.register_schema_version(def.side, def.schema, def.version, def.attributes, def.equivalences);
    try {
        auto event = registry_.drain_events().back();
        auto result = apply_change(dpm_, event, registry_);
        if (def.side == Side::Range && previous) {
            // outdated business-entity versions leave the registry too; their
            // blocks are already gone
            registry_.delete_schema_version(Side::Range, def.schema, *previous);
            registry_.drain_events();
            result.dpm.registry_revision = registry_.revision();
        }
        return finish(std::move(result));
    } catch (...) {
        registry_ = std::move(before);
        throw;
    }
}

Engine::UpdateOutcome Engine::delete_version(Side side, const std::string& schema_id, int version) {
    auto before = registry_;
    auto event = registry_.delete_schema_version(side, schema_id, version);
    registry_.drain_events();
    try {
        return finish(apply_change(dpm_, event, registry_));
    } catch (...) {
        registry_ = std::move(before);
        throw;
    }
}

void Engine::replace_block(const BlockKey& key, const DenseBlockElements& elements) {
    commit(dmm::replace_block(dpm_, key, elements, registry_));
}

void Engine::rebuild_from_store() {
    auto dpm = rebuild_dpm_from_dusb(dusb_, registry_);
    auto publisher = std::make_unique<SnapshotPublisher>();
    publisher->publish(dpm, registry_);
    dpm_ = std::move(dpm);
    publisher_ = std::move(publisher);
}

bool Engine::acknowledge(std::uint64_t id) {
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const PendingNotification& p) { return p.id == id; });
    if (it == pending_.end()) return false;
    pending_.erase(it);
    return true;
}

}  // namespace dmm::pipeline
