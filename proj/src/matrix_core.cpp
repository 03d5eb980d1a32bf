// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/matrix_core.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "dmm/error.hpp"

namespace dmm {

std::string BlockKey::to_string() const {
    return schema + ".v" + std::to_string(version) + "->" + entity + ".v" + std::to_string(entity_version);
}

MappingMatrix::MappingMatrix(std::uint64_t state, AttributeIndex domain, AttributeIndex range,
                             std::set<Cell> ones)
    : state_(state), domain_(std::move(domain)), range_(std::move(range)), ones_(std::move(ones)) {
    for (const auto& c : ones_)
        if (c.q >= range_.size() || c.p >= domain_.size())
            throw Error(ErrorCode::UnresolvableCoordinate,
                        "cell (" + std::to_string(c.q) + "," + std::to_string(c.p) + ") outside matrix");
}

BlockKey MappingMatrix::block_of(const Cell& cell) const {
    const auto& d = domain_.at(cell.p);
    const auto& r = range_.at(cell.q);
    return {d.schema, d.version, r.schema, r.version};
}

std::vector<MappingEntry> MappingMatrix::entries() const {
    std::vector<MappingEntry> out;
    out.reserve(ones_.size());
    for (const auto& c : ones_) {
        const auto& d = domain_.at(c.p);
        const auto& r = range_.at(c.q);
        out.push_back({d.schema, d.version, d.attribute, r.schema, r.version, r.attribute});
    }
    return out;
}

std::string MappingMatrix::render() const {
    std::ostringstream os;
    os << "state " << state_ << " (" << rows() << "x" << cols() << ")\n";
    os << "\t";
    for (const auto& d : domain_.entries()) os << d.schema << ".v" << d.version << "." << d.attribute << "\t";
    os << "\n";
    for (std::size_t q = 0; q < rows(); ++q) {
        const auto& r = range_.at(q);
        os << r.schema << ".v" << r.version << "." << r.attribute << "\t";
        for (std::size_t p = 0; p < cols(); ++p) os << (at(q, p) ? '1' : '0') << "\t";
        os << "\n";
    }
    return os.str();
}

MappingMatrix build_matrix(const Registry& registry, std::span<const MappingEntry> entries,
                           std::uint64_t state) {
    const auto& domain = registry.domain().index();
    const auto& range = registry.range().index();
    std::set<Cell> ones;
    for (const auto& e : entries) {
        auto p = domain.ordinal({e.schema, e.schema_version}, e.attribute);
        auto q = range.ordinal({e.entity, e.entity_version}, e.cdm_attribute);
        if (!p || !q)
            throw Error(ErrorCode::UnresolvableCoordinate,
                        e.schema + ".v" + std::to_string(e.schema_version) + "." + e.attribute + " -> " +
                            e.entity + ".v" + std::to_string(e.entity_version) + "." + e.cdm_attribute);
        ones.insert({*q, *p});
    }
    MappingMatrix m(state, domain, range, std::move(ones));
    m.set_registry_revision(registry.revision());
    check_validity(m);
    return m;
}

void check_validity(const MappingMatrix& matrix) {
    // a row (or column) belongs to exactly one row (column) group, so a
    // repeat of (q, column group) is two ones in one block row
    std::set<std::pair<std::size_t, std::size_t>> row_use;
    std::set<std::pair<std::size_t, std::size_t>> col_use;
    for (const auto& c : matrix.ones()) {
        const auto gd = matrix.domain().group_of(c.p);
        const auto gr = matrix.range().group_of(c.q);
        if (!row_use.insert({c.q, gd}).second)
            throw Error(ErrorCode::ValidityViolation, "block " + matrix.block_of(c).to_string() +
                                                          ": two ones in row " +
                                                          matrix.range().at(c.q).attribute);
        if (!col_use.insert({c.p, gr}).second)
            throw Error(ErrorCode::ValidityViolation, "block " + matrix.block_of(c).to_string() +
                                                          ": two ones in column " +
                                                          matrix.domain().at(c.p).attribute);
    }
}

std::vector<MappingBlock> partition_blocks(const MappingMatrix& matrix) {
    const auto& dg = matrix.domain().groups();
    const auto& rg = matrix.range().groups();
    std::vector<MappingBlock> blocks;
    blocks.reserve(dg.size() * rg.size());
    for (const auto& d : dg)
        for (const auto& r : rg)
            blocks.push_back({{d.schema, d.version, r.schema, r.version},
                              *matrix.range().range(r),
                              *matrix.domain().range(d),
                              {}});
    for (const auto& c : matrix.ones()) {
        const auto gd = matrix.domain().group_of(c.p);
        const auto gr = matrix.range().group_of(c.q);
        blocks[gd * rg.size() + gr].ones.push_back(c);
    }
    return blocks;
}

SquareBlock largest_permutation_submatrix(const MappingBlock& block) {
    SquareBlock sb;
    sb.key = block.key;
    if (block.is_null()) return sb;

    for (const auto& c : block.ones) {
        sb.rows.push_back(c.q);
        sb.cols.push_back(c.p);
    }
    std::sort(sb.rows.begin(), sb.rows.end());
    std::sort(sb.cols.begin(), sb.cols.end());
    if (std::adjacent_find(sb.rows.begin(), sb.rows.end()) != sb.rows.end() ||
        std::adjacent_find(sb.cols.begin(), sb.cols.end()) != sb.cols.end())
        throw Error(ErrorCode::ValidityViolation, "block " + block.key.to_string() + " is not 1:1");

    sb.kind = SquareBlock::Kind::PermutationMatrix;
    sb.k = block.ones.size();
    sb.ones = block.ones;
    std::sort(sb.ones.begin(), sb.ones.end());
    return sb;
}

std::vector<VersionSuperBlock> partition_version_superblocks(const MappingMatrix& matrix) {
    auto blocks = partition_blocks(matrix);
    std::vector<VersionSuperBlock> out;
    std::map<SuperBlockKey, std::size_t> slot;
    for (auto& b : blocks) {
        SuperBlockKey key{b.key.schema, b.key.entity, b.key.entity_version};
        auto [it, fresh] = slot.emplace(key, out.size());
        if (fresh) out.push_back({key, {}});
        out[it->second].blocks.push_back(std::move(b));
    }
    // groups are emitted per schema in ascending version already; sort to be explicit
    for (auto& sb : out)
        std::stable_sort(sb.blocks.begin(), sb.blocks.end(),
                         [](const MappingBlock& a, const MappingBlock& b) { return a.key.version < b.key.version; });
    return out;
}

SuperSets row_column_supersets(const MappingMatrix& matrix) {
    SuperSets sets;
    for (const auto& b : partition_blocks(matrix)) {
        sets.columns[b.key.column()].push_back(b.key);
        sets.rows[b.key.row()].push_back(b.key);
    }
    return sets;
}

}  // namespace dmm
