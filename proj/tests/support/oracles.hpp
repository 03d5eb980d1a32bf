// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent brute-force references used by the property tests. None of
// these call into the code they check beyond plain accessors.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dmm/matrix_core.hpp"
#include "dmm/schema_model.hpp"

namespace dmm::testing {

using Grid = std::vector<std::vector<int>>;

/// Largest k such that some k rows and k columns induce a permutation
/// matrix, found by enumerating every row and column subset. Returns the
/// ones of that sub-matrix in grid coordinates.
inline std::set<std::pair<std::size_t, std::size_t>> brute_force_largest_pm(const Grid& g) {
    const std::size_t rows = g.size(), cols = rows ? g[0].size() : 0;
    std::set<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_k = 0;
    for (std::uint32_t rm = 1; rm < (1u << rows); ++rm)
        for (std::uint32_t cm = 1; cm < (1u << cols); ++cm) {
            const auto k = static_cast<std::size_t>(__builtin_popcount(rm));
            if (k != static_cast<std::size_t>(__builtin_popcount(cm)) || k <= best_k) continue;
            std::set<std::pair<std::size_t, std::size_t>> ones;
            bool perm = true;
            for (std::size_t r = 0; r < rows && perm; ++r) {
                if (!(rm >> r & 1)) continue;
                int in_row = 0;
                for (std::size_t c = 0; c < cols; ++c)
                    if (cm >> c & 1 && g[r][c]) {
                        ++in_row;
                        ones.insert({r, c});
                    }
                perm = in_row == 1;
            }
            for (std::size_t c = 0; c < cols && perm; ++c) {
                if (!(cm >> c & 1)) continue;
                int in_col = 0;
                for (std::size_t r = 0; r < rows; ++r)
                    if (rm >> r & 1 && g[r][c]) ++in_col;
                perm = in_col == 1;
            }
            if (perm) {
                best_k = k;
                best = std::move(ones);
            }
        }
    return best;
}

/// Named full matrix: rows and columns are (schema, version, attribute)
/// triples in index order, cells are 0/1.
struct FullMatrix {
    std::vector<AttributeEntry> rows;
    std::vector<AttributeEntry> cols;
    Grid cells;

    static FullMatrix from(const MappingMatrix& m) {
        FullMatrix f{m.range().entries(), m.domain().entries(), Grid(m.rows(), std::vector<int>(m.cols(), 0))};
        for (const auto& c : m.ones()) f.cells[c.q][c.p] = 1;
        return f;
    }

    std::set<MappingEntry> ones() const {
        std::set<MappingEntry> out;
        for (std::size_t q = 0; q < rows.size(); ++q)
            for (std::size_t p = 0; p < cols.size(); ++p)
                if (cells[q][p])
                    out.insert({cols[p].schema, cols[p].version, cols[p].attribute, rows[q].schema,
                                rows[q].version, rows[q].attribute});
        return out;
    }
};

inline std::set<MappingEntry> one_entries(const MappingMatrix& m) { return FullMatrix::from(m).ones(); }

/// Applies one schema change directly on the full matrix: columns or rows of
/// a deleted version are dropped, columns or rows of an added version are
/// inserted as zeros and filled by copying every 1 of the equivalent
/// predecessor line. For an added entity version the rows of the superseded
/// version are dropped afterwards.
///
/// `before` is the registry of the old state; `added` is the new version's
/// definition, read only through its own equivalence map.
inline std::set<MappingEntry> full_matrix_update(const FullMatrix& m, const ChangeEvent& event,
                                                 const VersionedSchema* added, std::optional<int> previous) {
    FullMatrix next = m;
    auto drop = [](std::vector<AttributeEntry>& axis, const std::string& id, int v) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < axis.size(); ++i)
            if (!(axis[i].schema == id && axis[i].version == v)) keep.push_back(i);
        return keep;
    };
    switch (event.change) {
        case ChangeCase::DeletedDomainVersion: {
            const auto keep = drop(next.cols, event.schema_id, event.version);
            FullMatrix out{m.rows, {}, Grid(m.rows.size())};
            for (auto p : keep) out.cols.push_back(m.cols[p]);
            for (std::size_t q = 0; q < m.rows.size(); ++q)
                for (auto p : keep) out.cells[q].push_back(m.cells[q][p]);
            return out.ones();
        }
        case ChangeCase::DeletedRangeVersion: {
            const auto keep = drop(next.rows, event.schema_id, event.version);
            FullMatrix out{{}, m.cols, {}};
            for (auto q : keep) {
                out.rows.push_back(m.rows[q]);
                out.cells.push_back(m.cells[q]);
            }
            return out.ones();
        }
        case ChangeCase::AddedDomainVersion: {
            for (const auto& a : added->attributes) {
                next.cols.push_back({event.schema_id, event.version, a});
                for (auto& row : next.cells) row.push_back(0);
                const auto p_new = next.cols.size() - 1;
                auto it = added->equivalences.find(a);
                if (it == added->equivalences.end() || !previous) continue;
                for (std::size_t p = 0; p < m.cols.size(); ++p)
                    if (m.cols[p].schema == event.schema_id && m.cols[p].version == *previous &&
                        m.cols[p].attribute == it->second)
                        for (std::size_t q = 0; q < m.rows.size(); ++q)
                            if (m.cells[q][p]) next.cells[q][p_new] = 1;
            }
            return next.ones();
        }
        case ChangeCase::AddedRangeVersion: {
            for (const auto& c : added->attributes) {
                next.rows.push_back({event.schema_id, event.version, c});
                next.cells.emplace_back(next.cols.size(), 0);
                const auto q_new = next.rows.size() - 1;
                auto it = added->equivalences.find(c);
                if (it == added->equivalences.end() || !previous) continue;
                for (std::size_t q = 0; q < m.rows.size(); ++q)
                    if (m.rows[q].schema == event.schema_id && m.rows[q].version == *previous &&
                        m.rows[q].attribute == it->second)
                        next.cells[q_new] = m.cells[q];
            }
            if (!previous) return next.ones();
            const auto keep = drop(next.rows, event.schema_id, *previous);
            FullMatrix out{{}, next.cols, {}};
            for (auto q : keep) {
                out.rows.push_back(next.rows[q]);
                out.cells.push_back(next.cells[q]);
            }
            return out.ones();
        }
    }
    return {};
}

/// A random change that is legal for `registry`: deletes an existing version
/// or adds the next version of an existing schema with a random subset of
/// the latest version's attributes duplicated.
struct RandomChange {
    Side side = Side::Domain;
    bool addition = true;
    std::string schema;
    int version = 0;
    std::vector<std::string> attributes;
    std::map<std::string, std::string> equivalences;
};

inline RandomChange random_change(const Registry& registry, std::mt19937_64& rng, int serial) {
    RandomChange c;
    const int kind = static_cast<int>(rng() % 4) + 1;
    c.side = kind == 1 || kind == 3 ? Side::Domain : Side::Range;
    c.addition = kind >= 3;
    const auto& tree = registry.tree(c.side);
    // deletions keep at least one version per schema so every schema stays
    // addressable
    std::vector<std::string> ids;
    for (const auto& id : tree.schema_ids())
        if (tree.versions(id).size() >= (c.addition ? 1u : 2u)) ids.push_back(id);
    if (ids.empty()) {
        c.addition = true;
        for (const auto& id : tree.schema_ids())
            if (!tree.versions(id).empty()) ids.push_back(id);
    }
    c.schema = ids[rng() % ids.size()];
    if (!c.addition) {
        const auto vs = tree.versions(c.schema);
        c.version = vs[rng() % vs.size()];
        return c;
    }
    const auto latest = *tree.latest_version(c.schema);
    c.version = latest + 1;
    const auto& prev = tree.at(c.schema, latest);
    for (const auto& a : prev.attributes) {
        if (rng() % 3 == 0) continue;
        const auto name = a + "_" + std::to_string(serial);
        c.attributes.push_back(name);
        c.equivalences[name] = a;
    }
    const auto fresh = rng() % 3;
    for (std::size_t i = 0; i < fresh; ++i) c.attributes.push_back(c.schema + "_n" + std::to_string(serial) + "_" + std::to_string(i));
    if (c.attributes.empty()) c.attributes.push_back(c.schema + "_n" + std::to_string(serial));
    for (std::size_t i = c.attributes.size(); i > 1; --i) std::swap(c.attributes[i - 1], c.attributes[rng() % i]);
    return c;
}

}  // namespace dmm::testing
