// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/pipeline/inspect.hpp"

#include <algorithm>

#include "dmm/error.hpp"

namespace dmm::pipeline {

std::vector<VersionKey> inspect_reverse(const DenseSetDPM& dpm, const Registry& registry, const std::string& entity,
                                        int entity_version) {
    if (!registry.range().has_version(entity, entity_version))
        throw Error(ErrorCode::UnknownVersion, entity + ".v" + std::to_string(entity_version) + " is not registered");
    const auto rows = dpm.row_superset();
    std::vector<VersionKey> out;
    auto it = rows.find({entity, entity_version});
    if (it == rows.end()) return out;
    for (const auto& key : it->second) out.push_back(key.column());
    const auto& domain = registry.domain();
    std::sort(out.begin(), out.end(), [&](const VersionKey& a, const VersionKey& b) {
        const auto ra = domain.schema_rank(a.schema).value_or(SIZE_MAX);
        const auto rb = domain.schema_rank(b.schema).value_or(SIZE_MAX);
        return std::tie(ra, a.version) < std::tie(rb, b.version);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ProgressionRow> inspect_progression(const DenseSetDPM& dpm, const Registry& registry,
                                                const std::string& schema_id) {
    const auto& domain = registry.domain();
    if (!domain.has_schema(schema_id)) throw Error(ErrorCode::UnknownSchema, schema_id + " is not registered");
    const auto columns = dpm.column_superset();
    const auto& range = registry.range();
    std::vector<ProgressionRow> out;
    for (int v : domain.versions(schema_id)) {
        ProgressionRow row{v, {}};
        if (auto it = columns.find({schema_id, v}); it != columns.end())
            for (const auto& key : it->second)
                row.targets.push_back({key.entity, key.entity_version, dpm.blocks.at(key).size()});
        std::sort(row.targets.begin(), row.targets.end(), [&](const auto& a, const auto& b) {
            const auto ra = range.schema_rank(a.entity).value_or(SIZE_MAX);
            const auto rb = range.schema_rank(b.entity).value_or(SIZE_MAX);
            return std::tie(ra, a.entity_version) < std::tie(rb, b.entity_version);
        });
        out.push_back(std::move(row));
    }
    return out;
}

Json reverse_to_json(const std::vector<VersionKey>& sources) {
    Json list = Json::array();
    for (const auto& k : sources) list.push_back({{"schema", k.schema}, {"version", k.version}});
    return list;
}

Json progression_to_json(const std::string& schema_id, const std::vector<ProgressionRow>& rows) {
    Json j;
    j["schema"] = schema_id;
    Json list = Json::array();
    for (const auto& r : rows) {
        Json targets = Json::array();
        for (const auto& t : r.targets)
            targets.push_back({{"entity", t.entity}, {"entity_version", t.entity_version}, {"elements", t.elements}});
        list.push_back({{"version", r.version}, {"blocks", r.targets.size()}, {"targets", std::move(targets)}});
    }
    j["versions"] = std::move(list);
    return j;
}

}  // namespace dmm::pipeline
