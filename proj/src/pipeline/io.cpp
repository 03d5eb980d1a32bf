// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/pipeline/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dmm/error.hpp"

namespace dmm::pipeline {

namespace {

const Json& require(const Json& j, const char* key, ErrorCode code) {
    if (!j.is_object() || !j.contains(key)) throw Error(code, std::string("missing field '") + key + "'");
    return j.at(key);
}

int require_int(const Json& j, const char* key, ErrorCode code) {
    const auto& v = require(j, key, code);
    if (!v.is_number_integer()) throw Error(code, std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

std::string require_string(const Json& j, const char* key, ErrorCode code) {
    const auto& v = require(j, key, code);
    if (!v.is_string()) throw Error(code, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<Field> payload_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "payload must be an object");
    std::vector<Field> out;
    out.reserve(j.size());
    for (auto it = j.begin(); it != j.end(); ++it) out.push_back({it.key(), it.value()});
    return out;
}

Json payload_to_json(const std::vector<Field>& payload) {
    Json j = Json::object();
    for (const auto& f : payload) j[f.attribute] = f.value;
    return j;
}

std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

// Schemas ---------------------------------------------------------------------

SchemaDefinition schema_definition_from_json(const Json& j) {
    SchemaDefinition def;
    const auto side = require_string(j, "side", ErrorCode::Parse);
    if (side == "domain")
        def.side = Side::Domain;
    else if (side == "range")
        def.side = Side::Range;
    else
        throw Error(ErrorCode::Parse, "side must be 'domain' or 'range', got '" + side + "'");
    def.schema = require_string(j, "schema", ErrorCode::Parse);
    def.version = require_int(j, "version", ErrorCode::Parse);
    const auto& attrs = require(j, "attributes", ErrorCode::Parse);
    if (!attrs.is_array()) throw Error(ErrorCode::Parse, "attributes must be an array");
    for (const auto& a : attrs) {
        if (!a.is_string()) throw Error(ErrorCode::Parse, "attribute names must be strings");
        def.attributes.push_back(a.get<std::string>());
    }
    if (j.contains("equivalences")) {
        const auto& eq = j.at("equivalences");
        if (!eq.is_object()) throw Error(ErrorCode::Parse, "equivalences must be an object");
        std::map<std::string, std::string> m;
        for (auto it = eq.begin(); it != eq.end(); ++it) {
            if (!it.value().is_string()) throw Error(ErrorCode::Parse, "equivalence targets must be strings");
            m.emplace(it.key(), it.value().get<std::string>());
        }
        def.equivalences = std::move(m);
    }
    return def;
}

Json to_json(const SchemaDefinition& def) {
    Json j;
    j["side"] = to_string(def.side);
    j["schema"] = def.schema;
    j["version"] = def.version;
    j["attributes"] = def.attributes;
    if (def.equivalences) {
        Json eq = Json::object();
        for (const auto& [k, v] : *def.equivalences) eq[k] = v;
        j["equivalences"] = std::move(eq);
    }
    return j;
}

std::vector<SchemaDefinition> read_schema_lines(std::istream& in) {
    std::vector<SchemaDefinition> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::Parse, "schema line " + std::to_string(n) + ": " + e.what());
        }
        out.push_back(schema_definition_from_json(j));
    }
    return out;
}

std::vector<SchemaDefinition> read_schema_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_schema_lines(in);
}

void write_schema_lines(std::ostream& out, std::span<const SchemaDefinition> defs) {
    for (const auto& d : defs) out << to_json(d).dump() << '\n';
}

void register_all(Registry& registry, std::span<const SchemaDefinition> defs) {
    for (const auto& d : defs)
        registry.register_schema_version(d.side, d.schema, d.version, d.attributes, d.equivalences);
}

std::vector<SchemaDefinition> export_registry(const Registry& registry) {
    std::vector<SchemaDefinition> out;
    for (Side side : {Side::Domain, Side::Range}) {
        const auto& tree = registry.tree(side);
        for (const auto& id : tree.schema_ids())
            for (const auto& s : tree.schema_versions(id))
                out.push_back({side, s.schema_id, s.version, s.attributes, s.equivalences});
    }
    return out;
}

Registry restore_registry(std::span<const SchemaDefinition> defs) {
    Registry r;
    for (const auto& d : defs)
        r.restore(d.side, VersionedSchema{d.schema, d.version, d.attributes,
                                          d.equivalences.value_or(std::map<std::string, std::string>{})});
    return r;
}

// CSV -------------------------------------------------------------------------

std::vector<MappingEntry> read_mapping_csv(std::istream& in) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!trim(line).empty()) break;
    }
    if (trim(line) != kMappingCsvHeader)
        throw Error(ErrorCode::Parse, std::string("mapping csv must start with header '") + kMappingCsvHeader + "'");

    std::vector<MappingEntry> out;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 6) throw Error(ErrorCode::Parse, "csv line " + std::to_string(n) + ": expected 6 cells");
        MappingEntry e;
        try {
            e = {cells[0], std::stoi(cells[1]), cells[2], cells[3], std::stoi(cells[4]), cells[5]};
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, "csv line " + std::to_string(n) + ": bad version number");
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<MappingEntry> read_mapping_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_mapping_csv(in);
}

void write_mapping_csv(std::ostream& out, std::span<const MappingEntry> entries) {
    out << kMappingCsvHeader << '\n';
    for (const auto& e : entries)
        out << e.schema << ',' << e.schema_version << ',' << e.attribute << ',' << e.entity << ','
            << e.entity_version << ',' << e.cdm_attribute << '\n';
}

// Messages --------------------------------------------------------------------

Message incoming_from_json(const Json& j, std::uint64_t default_state) {
    Message m;
    m.side = MessageSide::Incoming;
    m.schema_id = require_string(j, "schema", ErrorCode::Parse);
    m.version = require_int(j, "version", ErrorCode::Parse);
    m.state = default_state;
    if (j.contains("state")) {
        if (!j.at("state").is_number_unsigned()) throw Error(ErrorCode::Parse, "state must be a non-negative integer");
        m.state = j.at("state").get<std::uint64_t>();
    }
    m.payload = payload_from_json(require(j, "payload", ErrorCode::Parse));
    return m;
}

Json to_json(const Message& msg) {
    Json j;
    if (msg.side == MessageSide::Incoming) {
        j["schema"] = msg.schema_id;
        j["version"] = msg.version;
    } else {
        j["entity"] = msg.schema_id;
        j["entity_version"] = msg.version;
    }
    j["state"] = msg.state;
    j["payload"] = payload_to_json(msg.payload);
    return j;
}

const char* to_string(CdcOp op) {
    switch (op) {
        case CdcOp::Create: return "create";
        case CdcOp::Update: return "update";
        case CdcOp::Delete: return "delete";
    }
    return "?";
}

CdcOp cdc_op_from_string(const std::string& s) {
    if (s == "create" || s == "c") return CdcOp::Create;
    if (s == "update" || s == "u") return CdcOp::Update;
    if (s == "delete" || s == "d") return CdcOp::Delete;
    throw Error(ErrorCode::Parse, "unknown cdc op '" + s + "'");
}

bool is_envelope(const Json& j) { return j.is_object() && j.contains("op"); }

CdcEnvelope envelope_from_json(const Json& j, std::uint64_t default_state) {
    CdcEnvelope env;
    env.schema_id = require_string(j, "schema", ErrorCode::Parse);
    env.version = require_int(j, "version", ErrorCode::Parse);
    env.state = default_state;
    if (j.contains("state")) {
        if (!j.at("state").is_number_unsigned()) throw Error(ErrorCode::Parse, "state must be a non-negative integer");
        env.state = j.at("state").get<std::uint64_t>();
    }
    env.op = cdc_op_from_string(require_string(j, "op", ErrorCode::Parse));
    auto image = [&](const char* key) -> std::optional<std::vector<Field>> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return payload_from_json(j.at(key));
    };
    env.before = image("before");
    env.after = image("after");
    if (env.op == CdcOp::Create && env.before) throw Error(ErrorCode::Parse, "create envelope carries a before image");
    if (env.op == CdcOp::Delete && env.after) throw Error(ErrorCode::Parse, "delete envelope carries an after image");
    if (!env.before && !env.after) throw Error(ErrorCode::Parse, "envelope carries neither before nor after");
    return env;
}

Json to_json(const OutgoingEnvelope& env) {
    Json j;
    j["entity"] = env.entity;
    j["entity_version"] = env.entity_version;
    j["state"] = env.state;
    j["op"] = to_string(env.op);
    j["before"] = env.before ? payload_to_json(*env.before) : Json(nullptr);
    j["after"] = env.after ? payload_to_json(*env.after) : Json(nullptr);
    return j;
}

// Store -----------------------------------------------------------------------

Json dusb_to_json(const DenseSetDUSB& dusb) {
    Json j;
    j["state"] = dusb.state;
    Json supers = Json::array();
    for (const auto& [key, entries] : dusb.superblocks) {
        Json sb;
        sb["schema"] = key.schema;
        sb["entity"] = key.entity;
        sb["entity_version"] = key.entity_version;
        Json list = Json::array();
        for (const auto& e : entries) {
            Json je;
            je["version"] = e.version;
            je["kind"] = e.is_null() ? "null" : "pm";
            if (!e.is_null()) {
                Json ones = Json::array();
                for (const auto& el : e.ones) ones.push_back(Json::array({el.cdm_attribute, el.attribute}));
                je["ones"] = std::move(ones);
            }
            list.push_back(std::move(je));
        }
        sb["entries"] = std::move(list);
        supers.push_back(std::move(sb));
    }
    j["superblocks"] = std::move(supers);
    return j;
}

DenseSetDUSB dusb_from_json(const Json& j) {
    constexpr auto bad = ErrorCode::CorruptStore;
    DenseSetDUSB dusb;
    const auto& state = require(j, "state", bad);
    if (!state.is_number_unsigned()) throw Error(bad, "state must be a non-negative integer");
    dusb.state = state.get<std::uint64_t>();
    const auto& supers = require(j, "superblocks", bad);
    if (!supers.is_array()) throw Error(bad, "superblocks must be an array");
    for (const auto& sb : supers) {
        SuperBlockKey key{require_string(sb, "schema", bad), require_string(sb, "entity", bad),
                          require_int(sb, "entity_version", bad)};
        const auto& entries = require(sb, "entries", bad);
        if (!entries.is_array() || entries.empty()) throw Error(bad, "super-block without entries");
        std::vector<DusbEntry> list;
        for (const auto& je : entries) {
            DusbEntry e;
            e.version = require_int(je, "version", bad);
            const auto kind = require_string(je, "kind", bad);
            if (kind == "null") {
                e.kind = SquareKind::SpecialNull;
                if (je.contains("ones") && !je.at("ones").empty()) throw Error(bad, "null block with elements");
            } else if (kind == "pm") {
                e.kind = SquareKind::PermutationMatrix;
                const auto& ones = require(je, "ones", bad);
                if (!ones.is_array() || ones.empty()) throw Error(bad, "permutation block without elements");
                for (const auto& pair : ones) {
                    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
                        throw Error(bad, "element must be [cdm_attribute, attribute]");
                    e.ones.insert({pair[0].get<std::string>(), pair[1].get<std::string>()});
                }
            } else {
                throw Error(bad, "unknown block kind '" + kind + "'");
            }
            if (!list.empty() && e.version <= list.back().version) throw Error(bad, "entry versions must ascend");
            list.push_back(std::move(e));
        }
        if (list.front().is_null()) throw Error(bad, "super-block starts with a null block");
        if (!dusb.superblocks.emplace(std::move(key), std::move(list)).second)
            throw Error(bad, "duplicate super-block");
    }
    return dusb;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out << text;
        if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void save_store(const DenseSetDUSB& dusb, const std::filesystem::path& path) {
    write_text(path, dusb_to_json(dusb).dump(2) + "\n");
}

DenseSetDUSB load_store(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const Error& e) {
        throw Error(ErrorCode::CorruptStore, e.what());
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::CorruptStore, path.string() + ": " + e.what());
    }
    return dusb_from_json(j);
}

Json to_json(const UpdateNotification& n) {
    auto key = [](const BlockKey& k) {
        Json j;
        j["schema"] = k.schema;
        j["version"] = k.version;
        j["entity"] = k.entity;
        j["entity_version"] = k.entity_version;
        return j;
    };
    Json j;
    j["kind"] = to_string(n.kind);
    j["block"] = key(n.block);
    j["source"] = key(n.source);
    j["old_k"] = n.old_k;
    j["new_k"] = n.new_k;
    return j;
}

UpdateNotification notification_from_json(const Json& j) {
    constexpr auto bad = ErrorCode::CorruptStore;
    auto key = [&](const Json& k) {
        return BlockKey{require_string(k, "schema", bad), require_int(k, "version", bad),
                        require_string(k, "entity", bad), require_int(k, "entity_version", bad)};
    };
    UpdateNotification n;
    const auto kind = require_string(j, "kind", bad);
    if (kind == "shrunken-permutation")
        n.kind = NotificationKind::ShrunkenPermutation;
    else if (kind == "new-null-block")
        n.kind = NotificationKind::NewNullBlock;
    else
        throw Error(bad, "unknown notification kind " + kind);
    n.block = key(require(j, "block", bad));
    n.source = key(require(j, "source", bad));
    n.old_k = require(j, "old_k", bad).get<std::size_t>();
    n.new_k = require(j, "new_k", bad).get<std::size_t>();
    return n;
}

}  // namespace dmm::pipeline
