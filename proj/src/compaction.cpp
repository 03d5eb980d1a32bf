// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/compaction.hpp"

#include <climits>
#include <unordered_map>

#include "dmm/error.hpp"

namespace dmm {

std::size_t DenseSetDPM::element_count() const {
    std::size_t n = 0;
    for (const auto& [key, els] : blocks) n += els.size();
    return n;
}

std::set<std::pair<BlockKey, DenseElement>> DenseSetDPM::element_set() const {
    std::set<std::pair<BlockKey, DenseElement>> out;
    for (const auto& [key, els] : blocks)
        for (const auto& e : els) out.emplace(key, e);
    return out;
}

ColumnSuperSet DenseSetDPM::column_superset() const {
    ColumnSuperSet out;
    for (const auto& [key, els] : blocks) out[key.column()].push_back(key);
    return out;
}

RowSuperSet DenseSetDPM::row_superset() const {
    RowSuperSet out;
    for (const auto& [key, els] : blocks) out[key.row()].push_back(key);
    return out;
}

std::size_t DenseSetDUSB::one_element_count() const {
    std::size_t n = 0;
    for (const auto& [key, entries] : superblocks)
        for (const auto& e : entries) n += e.ones.size();
    return n;
}

std::size_t DenseSetDUSB::special_null_count() const {
    std::size_t n = 0;
    for (const auto& [key, entries] : superblocks)
        for (const auto& e : entries) n += e.is_null() ? 1 : 0;
    return n;
}

namespace {

DenseBlockElements to_dense(const MappingMatrix& matrix, const std::vector<Cell>& ones) {
    DenseBlockElements out;
    for (const auto& c : ones) out.insert({matrix.range().at(c.q).attribute, matrix.domain().at(c.p).attribute});
    return out;
}

}  // namespace

DenseSetDPM compact_to_dpm(const MappingMatrix& matrix) {
    DenseSetDPM dpm;
    dpm.state = matrix.state();
    dpm.registry_revision = matrix.registry_revision();
    for (const auto& block : partition_blocks(matrix)) {
        if (block.is_null()) continue;
        auto pm = largest_permutation_submatrix(block);
        dpm.blocks.emplace(block.key, to_dense(matrix, pm.ones));
    }
    return dpm;
}

bool block_equivalent(const std::string& schema, const DusbEntry& a, const DusbEntry& b,
                      const Registry& registry, EquivalenceMode mode) {
    if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
    if (a.ones.size() != b.ones.size()) return false;

    std::map<std::string, std::string> b_by_row;
    for (const auto& e : b.ones) b_by_row.emplace(e.cdm_attribute, e.attribute);

    const auto& tree = registry.domain();
    for (const auto& e : a.ones) {
        auto it = b_by_row.find(e.cdm_attribute);
        if (it == b_by_row.end()) return false;
        if (mode == EquivalenceMode::Positional) {
            auto pa = tree.at(schema, a.version).position(e.attribute);
            auto pb = tree.at(schema, b.version).position(it->second);
            if (!pa || !pb || *pa != *pb) return false;
        } else {
            auto image = tree.resolve_equivalent(schema, e.attribute, a.version, b.version);
            if (!image || *image != it->second) return false;
        }
    }
    return true;
}

DenseSetDUSB compact_to_dusb(const MappingMatrix& matrix, const Registry& registry, EquivalenceMode mode) {
    DenseSetDUSB dusb;
    dusb.state = matrix.state();
    for (const auto& super : partition_version_superblocks(matrix)) {
        std::vector<DusbEntry> unique;
        for (const auto& block : super.blocks) {
            auto sb = largest_permutation_submatrix(block);
            DusbEntry entry{block.key.version,
                            sb.is_null() ? SquareKind::SpecialNull : SquareKind::PermutationMatrix,
                            to_dense(matrix, sb.ones)};
            if (!entry.is_null()) {
                if (unique.empty() || !block_equivalent(super.key.schema, unique.back(), entry, registry, mode))
                    unique.push_back(std::move(entry));
            } else if (!unique.empty() && !unique.back().is_null()) {
                unique.push_back(std::move(entry));
            }
        }
        if (!unique.empty()) dusb.superblocks.emplace(super.key, std::move(unique));
    }
    return dusb;
}

MappingMatrix decompact_dpm(const DenseSetDPM& dpm, const Registry& registry) {
    const auto& domain = registry.domain().index();
    const auto& range = registry.range().index();
    std::set<Cell> ones;
    for (const auto& [key, els] : dpm.blocks) {
        for (const auto& e : els) {
            auto p = domain.ordinal(key.column(), e.attribute);
            auto q = range.ordinal(key.row(), e.cdm_attribute);
            if (!p || !q)
                throw Error(ErrorCode::StateMismatch, "element (" + e.cdm_attribute + "," + e.attribute +
                                                          ") of block " + key.to_string() +
                                                          " is outside the current index");
            ones.insert({*q, *p});
        }
    }
    MappingMatrix m(dpm.state, domain, range, std::move(ones));
    m.set_registry_revision(registry.revision());
    check_validity(m);
    return m;
}

MappingMatrix decompact_dusb(const DenseSetDUSB& dusb, const Registry& registry) {
    const auto& dtree = registry.domain();
    const auto& domain = dtree.index();
    const auto& range = registry.range().index();
    std::set<Cell> ones;

    for (const auto& [key, entries] : dusb.superblocks) {
        if (!registry.range().has_version(key.entity, key.entity_version))
            throw Error(ErrorCode::UnknownVersion,
                        "range " + key.entity + ".v" + std::to_string(key.entity_version));
        const auto versions = dtree.versions(key.schema);
        if (versions.empty()) throw Error(ErrorCode::UnknownVersion, "domain schema " + key.schema);

        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& entry = entries[i];
            if (!dtree.has_version(key.schema, entry.version))
                throw Error(ErrorCode::UnknownVersion,
                            "domain " + key.schema + ".v" + std::to_string(entry.version));
            const int stop = i + 1 < entries.size() ? entries[i + 1].version : INT_MAX;
            if (stop <= entry.version)
                throw Error(ErrorCode::InconsistentStore, "super-block versions of " + key.schema + " -> " +
                                                              key.entity + " do not ascend");
            if (entry.is_null()) continue;

            for (int target : versions) {
                if (target < entry.version || target >= stop) continue;
                for (const auto& e : entry.ones) {
                    auto attr = dtree.resolve_equivalent(key.schema, e.attribute, entry.version, target);
                    if (!attr)
                        throw Error(ErrorCode::InconsistentStore,
                                    key.schema + ".v" + std::to_string(entry.version) + "." + e.attribute +
                                        " has no equivalent in v" + std::to_string(target));
                    auto p = domain.ordinal({key.schema, target}, *attr);
                    auto q = range.ordinal({key.entity, key.entity_version}, e.cdm_attribute);
                    if (!p || !q)
                        throw Error(ErrorCode::InconsistentStore,
                                    "element (" + e.cdm_attribute + "," + *attr + ") does not resolve");
                    ones.insert({*q, *p});
                }
            }
        }
    }
    MappingMatrix m(dusb.state, domain, range, std::move(ones));
    m.set_registry_revision(registry.revision());
    check_validity(m);
    return m;
}

DenseSetDPM rebuild_dpm_from_dusb(const DenseSetDUSB& dusb, const Registry& registry) {
    return compact_to_dpm(decompact_dusb(dusb, registry));
}

double compaction_ratio(std::size_t stored, std::size_t total_elements) {
    if (total_elements == 0) return 1.0;
    return 1.0 - static_cast<double>(stored) / static_cast<double>(total_elements);
}

}  // namespace dmm
