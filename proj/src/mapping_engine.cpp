// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/mapping_engine.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "dmm/error.hpp"

namespace dmm {

const DataObject* Message::find(const std::string& attribute) const {
    for (const auto& f : payload)
        if (f.attribute == attribute) return &f.value;
    return nullptr;
}

Message densify(const Message& msg) {
    Message out = msg;
    std::erase_if(out.payload, [](const Field& f) { return f.value.is_null(); });
    return out;
}

std::vector<Message> densify(const std::vector<Message>& msgs) {
    std::vector<Message> out;
    for (const auto& m : msgs) {
        auto d = densify(m);
        if (!d.payload.empty()) out.push_back(std::move(d));
    }
    return out;
}

Message sparsify(const Message& msg, const SchemaTree& tree) {
    const auto& schema = tree.at(msg.schema_id, msg.version);
    for (const auto& f : msg.payload)
        if (!schema.contains(f.attribute))
            throw Error(ErrorCode::PayloadMismatch, f.attribute + " is not an attribute of " + msg.schema_id +
                                                        ".v" + std::to_string(msg.version));
    Message out = msg;
    out.payload.clear();
    for (const auto& a : schema.attributes) {
        const auto* v = msg.find(a);
        out.payload.push_back({a, v ? *v : DataObject(nullptr)});
    }
    return out;
}

std::vector<Message> map_sparse(const Message& msg, const MappingMatrix& matrix) {
    if (msg.state != matrix.state())
        throw Error(ErrorCode::StateMismatch, "message state " + std::to_string(msg.state) +
                                                  " != engine state " + std::to_string(matrix.state()));
    const auto cols = matrix.domain().range({msg.schema_id, msg.version});
    if (!cols)
        throw Error(ErrorCode::UnknownVersion, msg.schema_id + ".v" + std::to_string(msg.version));

    // payload keys must be exactly the schema's attributes
    std::vector<const DataObject*> by_column(cols->size(), nullptr);
    for (const auto& f : msg.payload) {
        auto p = matrix.domain().ordinal({msg.schema_id, msg.version}, f.attribute);
        if (!p)
            throw Error(ErrorCode::PayloadMismatch, f.attribute + " is not an attribute of " + msg.schema_id);
        auto& slot = by_column[*p - cols->begin];
        if (slot != nullptr) throw Error(ErrorCode::PayloadMismatch, f.attribute + " repeated in payload");
        slot = &f.value;
    }
    if (std::find(by_column.begin(), by_column.end(), nullptr) != by_column.end())
        throw Error(ErrorCode::PayloadMismatch, "sparse message omits schema attributes");

    const auto& range = matrix.range();
    std::vector<Message> out;
    out.reserve(range.groups().size());
    for (const auto& g : range.groups()) {
        Message m{MessageSide::Outgoing, g.schema, g.version, msg.state, {}};
        const auto rows = *range.range(g);
        for (std::size_t q = rows.begin; q < rows.end; ++q) m.payload.push_back({range.at(q).attribute, nullptr});
        out.push_back(std::move(m));
    }

    for (const auto& c : matrix.ones()) {
        if (c.p < cols->begin || c.p >= cols->end) continue;
        const DataObject& ad = *by_column[c.p - cols->begin];
        const int nad = ad.is_null() ? 0 : 1;
        const int m_qp = 1;
        const int ncd = m_qp * nad;
        if (ncd == 1) {
            const auto gr = range.group_of(c.q);
            const auto rows = *range.range(range.groups()[gr]);
            out[gr].payload[c.q - rows.begin].value = ad;
        }
    }
    return out;
}

// Snapshot -------------------------------------------------------------------

EngineSnapshot::EngineSnapshot(std::uint64_t state,
                               std::unordered_map<VersionKey, SnapshotColumn, VersionKeyHash> columns,
                               std::size_t element_count)
    : state_(state), columns_(std::move(columns)), element_count_(element_count) {}

const SnapshotColumn* EngineSnapshot::column(const VersionKey& key) const {
    auto it = columns_.find(key);
    return it == columns_.end() ? nullptr : &it->second;
}

std::vector<VersionKey> EngineSnapshot::mapped_columns() const {
    std::vector<VersionKey> out;
    for (const auto& [k, c] : columns_)
        if (!c.blocks.empty()) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

EngineSnapshot build_snapshot(const DenseSetDPM& dpm, const Registry& registry) {
    std::unordered_map<VersionKey, SnapshotColumn, VersionKeyHash> columns;
    for (const auto& key : registry.domain().index().groups()) columns.emplace(key, SnapshotColumn{});

    std::unordered_map<std::string, std::size_t> entity_rank;
    for (const auto& id : registry.range().schema_ids()) entity_rank.emplace(id, entity_rank.size());

    struct Sortable {
        std::size_t rank;
        SnapshotBlock block;
    };
    std::unordered_map<VersionKey, std::vector<Sortable>, VersionKeyHash> staged;
    for (const auto& [key, elements] : dpm.blocks) {
        if (!columns.count(key.column()))
            throw Error(ErrorCode::StateMismatch, "block " + key.to_string() + " has an unregistered column");
        const auto& row = registry.range().find(key.entity, key.entity_version);
        if (row == nullptr)
            throw Error(ErrorCode::StateMismatch, "block " + key.to_string() + " has an unregistered row");

        std::vector<std::pair<std::size_t, SnapshotElement>> ordered;
        for (const auto& e : elements) {
            auto pos = row->position(e.cdm_attribute);
            if (!pos) throw Error(ErrorCode::StateMismatch, e.cdm_attribute + " not in " + key.to_string());
            ordered.emplace_back(*pos, SnapshotElement{e.attribute, e.cdm_attribute});
        }
        std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SnapshotBlock block{key.entity, key.entity_version, {}};
        for (auto& [pos, el] : ordered) block.elements.push_back(std::move(el));
        staged[key.column()].push_back({entity_rank.at(key.entity), std::move(block)});
    }
    for (auto& [col, blocks] : staged) {
        std::sort(blocks.begin(), blocks.end(), [](const Sortable& a, const Sortable& b) {
            return std::tie(a.rank, a.block.entity_version) < std::tie(b.rank, b.block.entity_version);
        });
        auto& target = columns[col].blocks;
        for (auto& s : blocks) target.push_back(std::move(s.block));
    }
    return EngineSnapshot(dpm.state, std::move(columns), dpm.element_count());
}

// Dense mapping --------------------------------------------------------------

namespace {

const SnapshotColumn& lookup_column(const Message& msg, const EngineSnapshot& snapshot) {
    if (msg.state != snapshot.state())
        throw Error(ErrorCode::StateMismatch, "message state " + std::to_string(msg.state) +
                                                  " != engine state " + std::to_string(snapshot.state()));
    const auto* column = snapshot.column({msg.schema_id, msg.version});
    if (column == nullptr)
        throw Error(ErrorCode::UnknownVersion, msg.schema_id + ".v" + std::to_string(msg.version) +
                                                   " is unknown in state " + std::to_string(snapshot.state()));
    return *column;
}

Message map_block(const Message& msg, const SnapshotBlock& block) {
    Message out{MessageSide::Outgoing, block.entity, block.entity_version, msg.state, {}};
    for (const auto& el : block.elements) {
        const auto* ad = msg.find(el.attribute);
        if (ad != nullptr && !ad->is_null()) out.payload.push_back({el.cdm_attribute, *ad});
    }
    return out;
}

}  // namespace

std::vector<Message> map_dense(const Message& msg, const EngineSnapshot& snapshot) {
    const auto& column = lookup_column(msg, snapshot);
    std::vector<Message> out;
    for (const auto& block : column.blocks) {
        auto m = map_block(msg, block);
        if (!m.payload.empty()) out.push_back(std::move(m));
    }
    return out;
}

std::vector<Message> map_dense_parallel(const Message& msg, const EngineSnapshot& snapshot, ThreadPool& pool) {
    const auto& column = lookup_column(msg, snapshot);
    std::vector<std::future<Message>> pending;
    pending.reserve(column.blocks.size());
    for (const auto& block : column.blocks)
        pending.push_back(pool.submit([&msg, &block] { return map_block(msg, block); }));
    std::vector<Message> out;
    for (auto& f : pending) {
        auto m = f.get();
        if (!m.payload.empty()) out.push_back(std::move(m));
    }
    return out;
}

// Publisher ------------------------------------------------------------------

std::shared_ptr<const EngineSnapshot> SnapshotPublisher::publish(const DenseSetDPM& dpm, const Registry& registry) {
    if (dpm.registry_revision != registry.revision())
        throw Error(ErrorCode::StateMismatch, "dense set and registry disagree on the current state");
    auto next = std::make_shared<const EngineSnapshot>(build_snapshot(dpm, registry));
    std::lock_guard lock(mutex_);
    if (current_ && next->state() <= current_->state())
        throw Error(ErrorCode::StateMismatch,
                    "state " + std::to_string(next->state()) + " is already published");
    current_ = next;
    return next;
}

std::shared_ptr<const EngineSnapshot> SnapshotPublisher::current() const {
    std::lock_guard lock(mutex_);
    return current_;
}

}  // namespace dmm
