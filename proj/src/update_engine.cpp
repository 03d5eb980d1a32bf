// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/update_engine.hpp"

#include "dmm/error.hpp"

namespace dmm {

const char* to_string(NotificationKind kind) {
    return kind == NotificationKind::ShrunkenPermutation ? "shrunken-permutation" : "new-null-block";
}

DenseBlockElements copy_block_via_equivalence(const DenseBlockElements& block, const std::string& schema,
                                              int from_version, int to_version, const Registry& registry,
                                              Axis axis) {
    const auto& tree = registry.tree(axis == Axis::Column ? Side::Domain : Side::Range);
    DenseBlockElements out;
    for (const auto& e : block) {
        const auto& moved = axis == Axis::Column ? e.attribute : e.cdm_attribute;
        auto image = tree.resolve_equivalent(schema, moved, from_version, to_version);
        if (!image) continue;
        if (axis == Axis::Column)
            out.insert({e.cdm_attribute, *image});
        else
            out.insert({*image, e.attribute});
    }
    return out;
}

namespace {

void require_in_sync(const DenseSetDPM& dpm, const Registry& registry) {
    if (registry.revision() != dpm.registry_revision + 1)
        throw Error(ErrorCode::StateMismatch,
                    "dense set mirrors registry revision " + std::to_string(dpm.registry_revision) +
                        ", registry is at " + std::to_string(registry.revision()) +
                        "; exactly one pending change expected");
}

void erase_where(DenseSetDPM& dpm, UpdateStats& stats, auto&& pred) {
    for (auto it = dpm.blocks.begin(); it != dpm.blocks.end();) {
        if (pred(it->first)) {
            stats.deleted += it->second.size();
            it = dpm.blocks.erase(it);
        } else {
            ++it;
        }
    }
}

int require_added(const SchemaTree& tree, const ChangeEvent& event) {
    if (!tree.has_version(event.schema_id, event.version))
        throw Error(ErrorCode::UnknownVersion, std::string(to_string(tree.side())) + " " + event.schema_id +
                                                   ".v" + std::to_string(event.version) +
                                                   " is not registered");
    if (tree.latest_version(event.schema_id) != event.version)
        throw Error(ErrorCode::StateMismatch,
                    event.schema_id + ".v" + std::to_string(event.version) + " is not the latest version");
    return event.version;
}

/// Shared body of cases 3 and 4: copy every block of `prev` along `axis`.
void copy_version(const DenseSetDPM& source, DenseSetDPM& next, UpdateResult& result, const ChangeEvent& event,
                  int prev, const Registry& registry, Axis axis) {
    for (const auto& [key, elements] : source.blocks) {
        const bool match = axis == Axis::Column
                               ? (key.schema == event.schema_id && key.version == prev)
                               : (key.entity == event.schema_id && key.entity_version == prev);
        if (!match) continue;

        BlockKey target = key;
        if (axis == Axis::Column)
            target.version = event.version;
        else
            target.entity_version = event.version;

        auto candidate = copy_block_via_equivalence(elements, event.schema_id, prev, event.version, registry, axis);
        if (candidate.size() < elements.size()) {
            result.notifications.push_back(
                {target, key,
                 candidate.empty() ? NotificationKind::NewNullBlock : NotificationKind::ShrunkenPermutation,
                 elements.size(), candidate.size()});
        }
        if (candidate.empty()) continue;
        result.stats.copied += candidate.size();
        next.blocks.emplace(std::move(target), std::move(candidate));
    }
}

}  // namespace

UpdateResult apply_change(const DenseSetDPM& dpm, const ChangeEvent& event, const Registry& registry) {
    require_in_sync(dpm, registry);

    UpdateResult result;
    result.dpm = dpm;
    auto& next = result.dpm;

    switch (event.change) {
        case ChangeCase::DeletedDomainVersion:
        case ChangeCase::DeletedRangeVersion: {
            const auto& tree = registry.tree(event.side());
            if (tree.has_version(event.schema_id, event.version))
                throw Error(ErrorCode::StateMismatch, event.schema_id + ".v" + std::to_string(event.version) +
                                                          " is still registered");
            const bool column = event.change == ChangeCase::DeletedDomainVersion;
            erase_where(next, result.stats, [&](const BlockKey& k) {
                return column ? (k.schema == event.schema_id && k.version == event.version)
                              : (k.entity == event.schema_id && k.entity_version == event.version);
            });
            break;
        }
        case ChangeCase::AddedDomainVersion:
        case ChangeCase::AddedRangeVersion: {
            const bool column = event.change == ChangeCase::AddedDomainVersion;
            const auto& tree = registry.tree(event.side());
            require_added(tree, event);
            for (const auto& [key, els] : dpm.blocks) {
                if (column ? (key.schema == event.schema_id && key.version == event.version)
                           : (key.entity == event.schema_id && key.entity_version == event.version))
                    throw Error(ErrorCode::StateMismatch, "blocks for " + key.to_string() + " already exist");
            }
            const auto prev = tree.previous_version(event.schema_id, event.version);
            if (!prev) break;  // first version: values come from the user
            copy_version(dpm, next, result, event, *prev, registry, column ? Axis::Column : Axis::Row);
            if (!column) {
                erase_where(next, result.stats, [&](const BlockKey& k) {
                    return k.entity == event.schema_id && k.entity_version == *prev;
                });
            }
            break;
        }
    }

    next.state = dpm.state + 1;
    next.registry_revision = registry.revision();
    return result;
}

DenseSetDPM replace_block(const DenseSetDPM& dpm, const BlockKey& key, const DenseBlockElements& elements,
                          const Registry& registry) {
    const auto& column = registry.domain().at(key.schema, key.version);
    const auto& row = registry.range().at(key.entity, key.entity_version);
    std::set<std::string> rows_used;
    std::set<std::string> cols_used;
    for (const auto& e : elements) {
        if (!column.contains(e.attribute) || !row.contains(e.cdm_attribute))
            throw Error(ErrorCode::UnresolvableCoordinate,
                        "(" + e.cdm_attribute + "," + e.attribute + ") is not in block " + key.to_string());
        if (!rows_used.insert(e.cdm_attribute).second || !cols_used.insert(e.attribute).second)
            throw Error(ErrorCode::ValidityViolation, "block " + key.to_string() + " is not 1:1");
    }
    DenseSetDPM next = dpm;
    if (elements.empty())
        next.blocks.erase(key);
    else
        next.blocks[key] = elements;
    next.state = dpm.state + 1;
    return next;
}

}  // namespace dmm
