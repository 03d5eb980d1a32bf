// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmm/compaction.hpp"
#include "dmm/mapping_engine.hpp"
#include "dmm/matrix_core.hpp"
#include "dmm/schema_model.hpp"
#include "dmm/update_engine.hpp"

namespace dmm::pipeline {

using Json = nlohmann::ordered_json;

/// One line of a schema definition file.
struct SchemaDefinition {
    Side side = Side::Domain;
    std::string schema;
    int version = 1;
    std::vector<std::string> attributes;
    /// nullopt: equivalences follow identical names in the previous version.
    std::optional<std::map<std::string, std::string>> equivalences;

    bool operator==(const SchemaDefinition&) const = default;
};

SchemaDefinition schema_definition_from_json(const Json& j);
Json to_json(const SchemaDefinition& def);
std::vector<SchemaDefinition> read_schema_lines(std::istream& in);
std::vector<SchemaDefinition> read_schema_file(const std::filesystem::path& path);
void write_schema_lines(std::ostream& out, std::span<const SchemaDefinition> defs);

/// Registers the definitions in order.
void register_all(Registry& registry, std::span<const SchemaDefinition> defs);
/// Every registered version with explicit equivalences, in registration order.
std::vector<SchemaDefinition> export_registry(const Registry& registry);
/// Inverse of export_registry; skips the contiguity rule.
Registry restore_registry(std::span<const SchemaDefinition> defs);

inline constexpr const char* kMappingCsvHeader = "schema,schema_version,attribute,entity,entity_version,cdm_attribute";

std::vector<MappingEntry> read_mapping_csv(std::istream& in);
std::vector<MappingEntry> read_mapping_file(const std::filesystem::path& path);
void write_mapping_csv(std::ostream& out, std::span<const MappingEntry> entries);

// Messages --------------------------------------------------------------------

/// Parses `{"schema","version","state"?,"payload"}`; a missing state takes
/// `default_state`.
Message incoming_from_json(const Json& j, std::uint64_t default_state);
Json to_json(const Message& msg);

enum class CdcOp { Create, Update, Delete };

const char* to_string(CdcOp op);
CdcOp cdc_op_from_string(const std::string& s);

/// Row-change event carrying a before and an after image.
struct CdcEnvelope {
    std::string schema_id;
    int version = 0;
    std::uint64_t state = 0;
    CdcOp op = CdcOp::Create;
    std::optional<std::vector<Field>> before;
    std::optional<std::vector<Field>> after;
};

bool is_envelope(const Json& j);
CdcEnvelope envelope_from_json(const Json& j, std::uint64_t default_state);

/// Business-entity side of a mapped envelope.
struct OutgoingEnvelope {
    std::string entity;
    int entity_version = 0;
    std::uint64_t state = 0;
    CdcOp op = CdcOp::Create;
    std::optional<std::vector<Field>> before;
    std::optional<std::vector<Field>> after;
};

Json to_json(const OutgoingEnvelope& env);

// Store -----------------------------------------------------------------------

Json dusb_to_json(const DenseSetDUSB& dusb);
DenseSetDUSB dusb_from_json(const Json& j);
void save_store(const DenseSetDUSB& dusb, const std::filesystem::path& path);
/// Throws CorruptStore on truncated or malformed files.
DenseSetDUSB load_store(const std::filesystem::path& path);

Json to_json(const UpdateNotification& n);
UpdateNotification notification_from_json(const Json& j);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dmm::pipeline
