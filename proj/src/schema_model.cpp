// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/schema_model.hpp"

#include <algorithm>
#include <set>

#include "dmm/error.hpp"

namespace dmm {

const char* to_string(Side side) { return side == Side::Domain ? "domain" : "range"; }

std::optional<std::size_t> VersionedSchema::position(const std::string& attribute) const {
    auto it = std::find(attributes.begin(), attributes.end(), attribute);
    if (it == attributes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - attributes.begin());
}

Side ChangeEvent::side() const {
    return (change == ChangeCase::DeletedDomainVersion || change == ChangeCase::AddedDomainVersion)
               ? Side::Domain
               : Side::Range;
}

bool ChangeEvent::is_addition() const {
    return change == ChangeCase::AddedDomainVersion || change == ChangeCase::AddedRangeVersion;
}

ChangeEvent make_event(Side side, bool addition, std::string schema_id, int version) {
    ChangeCase c;
    if (side == Side::Domain)
        c = addition ? ChangeCase::AddedDomainVersion : ChangeCase::DeletedDomainVersion;
    else
        c = addition ? ChangeCase::AddedRangeVersion : ChangeCase::DeletedRangeVersion;
    return ChangeEvent{c, std::move(schema_id), version};
}

// AttributeIndex -------------------------------------------------------------

std::optional<std::size_t> AttributeIndex::ordinal(const VersionKey& key,
                                                   const std::string& attribute) const {
    auto it = ranges_.find(key);
    if (it == ranges_.end()) return std::nullopt;
    for (std::size_t o = it->second.begin; o < it->second.end; ++o)
        if (entries_[o].attribute == attribute) return o;
    return std::nullopt;
}

std::optional<AttributeIndex::Range> AttributeIndex::range(const VersionKey& key) const {
    auto it = ranges_.find(key);
    if (it == ranges_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> AttributeIndex::group_index(const VersionKey& key) const {
    auto it = group_index_.find(key);
    if (it == group_index_.end()) return std::nullopt;
    return it->second;
}

// SchemaTree -----------------------------------------------------------------

void SchemaTree::validate_attributes(const VersionedSchema& schema) const {
    std::set<std::string> seen;
    for (const auto& a : schema.attributes) {
        if (a.empty())
            throw Error(ErrorCode::DuplicateAttribute, "empty attribute name in " + schema.schema_id);
        if (!seen.insert(a).second)
            throw Error(ErrorCode::DuplicateAttribute,
                        "attribute '" + a + "' repeated in " + schema.schema_id + ".v" +
                            std::to_string(schema.version));
    }
}

void SchemaTree::validate_equivalences(const VersionedSchema& schema) const {
    const auto prev = previous_version(schema.schema_id, schema.version);
    const VersionedSchema* before = prev ? find(schema.schema_id, *prev) : nullptr;
    std::set<std::string> targets;
    for (const auto& [attr, pred] : schema.equivalences) {
        if (!schema.contains(attr))
            throw Error(ErrorCode::DanglingEquivalence,
                        "equivalence source '" + attr + "' is not an attribute of " + schema.schema_id +
                            ".v" + std::to_string(schema.version));
        if (before == nullptr || !before->contains(pred))
            throw Error(ErrorCode::DanglingEquivalence,
                        "equivalence target '" + pred + "' of '" + attr +
                            "' does not exist in the previous version of " + schema.schema_id);
        if (!targets.insert(pred).second)
            throw Error(ErrorCode::DanglingEquivalence,
                        "predecessor '" + pred + "' claimed by two attributes in " + schema.schema_id);
    }
}

const VersionedSchema& SchemaTree::register_version(
    const std::string& schema_id, int version, std::vector<std::string> attributes,
    std::optional<std::map<std::string, std::string>> equivalences) {
    if (schema_id.empty()) throw Error(ErrorCode::UnknownSchema, "empty schema id");
    const auto latest = latest_version(schema_id);
    if (latest && version <= *latest)
        throw Error(ErrorCode::DuplicateVersion,
                    schema_id + ".v" + std::to_string(version) + " already registered or superseded");
    const int expected = latest ? *latest + 1 : 1;
    if (version != expected)
        throw Error(ErrorCode::NonContiguousVersion, schema_id + ": expected version " +
                                                         std::to_string(expected) + ", got " +
                                                         std::to_string(version));

    VersionedSchema schema{schema_id, version, std::move(attributes), {}};
    validate_attributes(schema);
    if (equivalences) {
        schema.equivalences = std::move(*equivalences);
    } else if (latest) {
        const auto& before = at(schema_id, *latest);
        for (const auto& a : schema.attributes)
            if (before.contains(a)) schema.equivalences.emplace(a, a);
    }
    validate_equivalences(schema);

    if (!latest) order_.push_back(schema_id);
    auto& list = schemas_[schema_id];
    list.push_back(std::move(schema));
    index_dirty_ = true;
    return list.back();
}

const VersionedSchema& SchemaTree::restore_version(VersionedSchema schema) {
    validate_attributes(schema);
    const auto latest = latest_version(schema.schema_id);
    if (schema.version <= 0 || (latest && schema.version <= *latest))
        throw Error(ErrorCode::DuplicateVersion,
                    schema.schema_id + ".v" + std::to_string(schema.version) + " out of order");
    auto& list = schemas_[schema.schema_id];
    if (list.empty()) order_.push_back(schema.schema_id);
    const auto id = schema.schema_id;
    list.push_back(std::move(schema));
    try {
        validate_equivalences(list.back());
    } catch (...) {
        list.pop_back();
        if (list.empty()) {
            schemas_.erase(id);
            order_.pop_back();
        }
        throw;
    }
    index_dirty_ = true;
    return schemas_[id].back();
}

void SchemaTree::delete_version(const std::string& schema_id, int version) {
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end()) throw Error(ErrorCode::UnknownVersion, "unknown schema " + schema_id);
    auto& list = it->second;
    auto pos = std::find_if(list.begin(), list.end(),
                            [&](const VersionedSchema& s) { return s.version == version; });
    if (pos == list.end())
        throw Error(ErrorCode::UnknownVersion, schema_id + ".v" + std::to_string(version));

    auto next = pos + 1;
    if (next != list.end()) {
        std::map<std::string, std::string> rewired;
        for (const auto& [attr, pred] : next->equivalences) {
            auto up = pos->equivalences.find(pred);
            if (up != pos->equivalences.end()) rewired.emplace(attr, up->second);
        }
        next->equivalences = std::move(rewired);
    }
    list.erase(pos);
    if (list.empty()) {
        schemas_.erase(it);
        order_.erase(std::find(order_.begin(), order_.end(), schema_id));
    }
    index_dirty_ = true;
}

bool SchemaTree::has_schema(const std::string& schema_id) const { return schemas_.count(schema_id) > 0; }

bool SchemaTree::has_version(const std::string& schema_id, int version) const {
    return find(schema_id, version) != nullptr;
}

const VersionedSchema* SchemaTree::find(const std::string& schema_id, int version) const {
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end()) return nullptr;
    for (const auto& s : it->second)
        if (s.version == version) return &s;
    return nullptr;
}

const VersionedSchema& SchemaTree::at(const std::string& schema_id, int version) const {
    const auto* s = find(schema_id, version);
    if (s == nullptr)
        throw Error(ErrorCode::UnknownVersion,
                    std::string(to_string(side_)) + " " + schema_id + ".v" + std::to_string(version));
    return *s;
}

std::vector<int> SchemaTree::versions(const std::string& schema_id) const {
    std::vector<int> out;
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end()) return out;
    for (const auto& s : it->second) out.push_back(s.version);
    return out;
}

const std::vector<VersionedSchema>& SchemaTree::schema_versions(const std::string& schema_id) const {
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end()) throw Error(ErrorCode::UnknownSchema, schema_id);
    return it->second;
}

std::optional<int> SchemaTree::previous_version(const std::string& schema_id, int version) const {
    std::optional<int> best;
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end()) return best;
    for (const auto& s : it->second)
        if (s.version < version) best = s.version;
    return best;
}

std::optional<int> SchemaTree::next_version(const std::string& schema_id, int version) const {
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end()) return std::nullopt;
    for (const auto& s : it->second)
        if (s.version > version) return s.version;
    return std::nullopt;
}

std::optional<int> SchemaTree::latest_version(const std::string& schema_id) const {
    auto it = schemas_.find(schema_id);
    if (it == schemas_.end() || it->second.empty()) return std::nullopt;
    return it->second.back().version;
}

std::optional<std::size_t> SchemaTree::schema_rank(const std::string& schema_id) const {
    auto it = std::find(order_.begin(), order_.end(), schema_id);
    if (it == order_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - order_.begin());
}

std::optional<std::string> SchemaTree::resolve_equivalent(const std::string& schema_id,
                                                          const std::string& attribute,
                                                          int from_version, int to_version) const {
    const auto& from = at(schema_id, from_version);
    at(schema_id, to_version);
    if (!from.contains(attribute))
        throw Error(ErrorCode::UnknownAttribute,
                    attribute + " in " + schema_id + ".v" + std::to_string(from_version));
    if (from_version == to_version) return attribute;

    const auto& list = schemas_.at(schema_id);
    std::string current = attribute;
    if (to_version > from_version) {
        for (const auto& s : list) {
            if (s.version <= from_version) continue;
            if (s.version > to_version) break;
            const std::string* successor = nullptr;
            for (const auto& [attr, pred] : s.equivalences)
                if (pred == current) {
                    successor = &attr;
                    break;
                }
            if (successor == nullptr) return std::nullopt;
            current = *successor;
        }
        return current;
    }
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
        if (it->version > from_version) continue;
        if (it->version <= to_version) break;
        auto link = it->equivalences.find(current);
        if (link == it->equivalences.end()) return std::nullopt;
        current = link->second;
    }
    return current;
}

SchemaTree::SchemaTree(const SchemaTree& other)
    : side_(other.side_), order_(other.order_), schemas_(other.schemas_), index_dirty_(true) {}

SchemaTree& SchemaTree::operator=(const SchemaTree& other) {
    if (this != &other) {
        side_ = other.side_;
        order_ = other.order_;
        schemas_ = other.schemas_;
        index_dirty_ = true;
    }
    return *this;
}

SchemaTree::SchemaTree(SchemaTree&& other) noexcept
    : side_(other.side_),
      order_(std::move(other.order_)),
      schemas_(std::move(other.schemas_)),
      index_dirty_(true) {}

SchemaTree& SchemaTree::operator=(SchemaTree&& other) noexcept {
    side_ = other.side_;
    order_ = std::move(other.order_);
    schemas_ = std::move(other.schemas_);
    index_dirty_ = true;
    return *this;
}

const AttributeIndex& SchemaTree::index() const {
    std::lock_guard lock(index_mutex_);
    if (index_dirty_) {
        rebuild_index();
        index_dirty_ = false;
    }
    return index_;
}

void SchemaTree::rebuild_index() const {
    AttributeIndex idx;
    for (const auto& id : order_) {
        for (const auto& s : schemas_.at(id)) {
            VersionKey key{id, s.version};
            AttributeIndex::Range r{idx.entries_.size(), idx.entries_.size() + s.attributes.size()};
            for (const auto& a : s.attributes) {
                idx.entries_.push_back({id, s.version, a});
                idx.group_of_.push_back(idx.groups_.size());
            }
            idx.group_index_.emplace(key, idx.groups_.size());
            idx.groups_.push_back(key);
            idx.ranges_.emplace(std::move(key), r);
        }
    }
    index_ = std::move(idx);
}

// Registry -------------------------------------------------------------------

const VersionedSchema& Registry::register_schema_version(
    Side side, const std::string& schema_id, int version, std::vector<std::string> attributes,
    std::optional<std::map<std::string, std::string>> equivalences) {
    const auto& s = tree(side).register_version(schema_id, version, std::move(attributes),
                                                std::move(equivalences));
    ++revision_;
    events_.push_back(make_event(side, true, schema_id, version));
    return s;
}

ChangeEvent Registry::delete_schema_version(Side side, const std::string& schema_id, int version) {
    tree(side).delete_version(schema_id, version);
    ++revision_;
    auto ev = make_event(side, false, schema_id, version);
    events_.push_back(ev);
    return ev;
}

void Registry::restore(Side side, VersionedSchema schema) { tree(side).restore_version(std::move(schema)); }

std::vector<ChangeEvent> Registry::drain_events() {
    std::vector<ChangeEvent> out;
    out.swap(events_);
    return out;
}

}  // namespace dmm
