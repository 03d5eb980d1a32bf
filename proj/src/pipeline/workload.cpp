// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/pipeline/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dmm/error.hpp"

namespace dmm::pipeline {

std::size_t WorkloadConfig::mapped_per_block() const {
    return static_cast<std::size_t>(std::llround(mapped_fraction * static_cast<double>(cdm_attrs)));
}

void WorkloadConfig::validate() const {
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) throw Error(ErrorCode::InfeasibleConfig, std::string(name) + " must be at least 1");
    };
    positive(schemas, "schemas");
    positive(versions_per_schema, "versions_per_schema");
    positive(attrs_per_version, "attrs_per_version");
    positive(cdm_entities, "cdm_entities");
    positive(cdm_attrs, "cdm_attrs");
    positive(messages, "messages");
    positive(entities_per_schema, "entities_per_schema");
    auto fraction = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InfeasibleConfig, std::string(name) + " must lie in [0, 1]");
    };
    fraction(mapped_fraction, "mapped_fraction");
    fraction(duplication, "duplication");
    fraction(null_version_fraction, "null_version_fraction");
    fraction(null_value_fraction, "null_value_fraction");
    const auto k = mapped_per_block();
    if (k > std::min(attrs_per_version, cdm_attrs))
        throw Error(ErrorCode::InfeasibleConfig, std::to_string(k) + " mapped attributes per block exceed min(" +
                                                     std::to_string(attrs_per_version) + ", " +
                                                     std::to_string(cdm_attrs) + ")");
    if (entities_per_schema > cdm_entities)
        throw Error(ErrorCode::InfeasibleConfig, "entities_per_schema exceeds cdm_entities");
}

WorkloadConfig workload_config_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "workload config must be an object");
    WorkloadConfig c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        auto count = [&](std::size_t& field) {
            if (!v.is_number_unsigned()) throw Error(ErrorCode::Parse, k + " must be a non-negative integer");
            field = v.get<std::size_t>();
        };
        auto real = [&](double& field) {
            if (!v.is_number()) throw Error(ErrorCode::Parse, k + " must be a number");
            field = v.get<double>();
        };
        if (k == "schemas") count(c.schemas);
        else if (k == "versions_per_schema") count(c.versions_per_schema);
        else if (k == "attrs_per_version") count(c.attrs_per_version);
        else if (k == "cdm_entities") count(c.cdm_entities);
        else if (k == "cdm_attrs") count(c.cdm_attrs);
        else if (k == "messages") count(c.messages);
        else if (k == "entities_per_schema") count(c.entities_per_schema);
        else if (k == "mapped_fraction") real(c.mapped_fraction);
        else if (k == "duplication") real(c.duplication);
        else if (k == "null_version_fraction") real(c.null_version_fraction);
        else if (k == "null_value_fraction") real(c.null_value_fraction);
        else if (k == "seed") {
            if (!v.is_number_unsigned()) throw Error(ErrorCode::Parse, "seed must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        } else {
            throw Error(ErrorCode::Parse, "unknown workload key '" + k + "'");
        }
    }
    return c;
}

Json to_json(const WorkloadConfig& c) {
    Json j;
    j["schemas"] = c.schemas;
    j["versions_per_schema"] = c.versions_per_schema;
    j["attrs_per_version"] = c.attrs_per_version;
    j["cdm_entities"] = c.cdm_entities;
    j["cdm_attrs"] = c.cdm_attrs;
    j["mapped_fraction"] = c.mapped_fraction;
    j["messages"] = c.messages;
    j["seed"] = c.seed;
    j["entities_per_schema"] = c.entities_per_schema;
    j["duplication"] = c.duplication;
    j["null_version_fraction"] = c.null_version_fraction;
    j["null_value_fraction"] = c.null_value_fraction;
    return j;
}

namespace {

// Distributions from <random> differ between standard libraries; these
// keep generated bytes portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
    /// k distinct indices of [0, n), in random order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        for (std::size_t i = 0; i < k && i < n; ++i) std::swap(all[i], all[i + below(n - i)]);
        all.resize(std::min(k, n));
        return all;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace

Workload generate_workload(const WorkloadConfig& config) {
    config.validate();
    Rng rng(config.seed);
    Workload w;

    std::vector<std::vector<std::string>> cdm(config.cdm_entities);
    for (std::size_t e = 0; e < config.cdm_entities; ++e) {
        SchemaDefinition def{Side::Range, "be" + std::to_string(e + 1), 1, {}, std::map<std::string, std::string>{}};
        for (std::size_t c = 0; c < config.cdm_attrs; ++c)
            def.attributes.push_back("be" + std::to_string(e + 1) + "_c" + std::to_string(c + 1));
        cdm[e] = def.attributes;
        w.schemas.push_back(std::move(def));
    }

    const auto k = config.mapped_per_block();
    // domain schemas follow the range so schemas.jsonl reads top-down
    std::vector<SchemaDefinition> domain;
    for (std::size_t s = 0; s < config.schemas; ++s) {
        const std::string id = "s" + std::to_string(s + 1);
        std::size_t fresh = 0;
        auto new_name = [&] { return id + "_a" + std::to_string(++fresh); };
        const auto entities = rng.sample(config.cdm_entities, config.entities_per_schema);
        // per entity: cdm attribute -> domain attribute of the previous version
        std::vector<std::map<std::string, std::string>> carried(entities.size());

        std::vector<std::string> previous;
        for (std::size_t v = 1; v <= config.versions_per_schema; ++v) {
            SchemaDefinition def{Side::Domain, id, static_cast<int>(v), {}, std::map<std::string, std::string>{}};
            std::map<std::string, std::string> image;  // previous attribute -> new one
            if (!previous.empty()) {
                const auto keep = static_cast<std::size_t>(
                    std::llround(config.duplication * static_cast<double>(previous.size())));
                for (auto i : rng.sample(previous.size(), std::min(keep, config.attrs_per_version))) {
                    auto n = new_name();
                    image[previous[i]] = n;
                    (*def.equivalences)[n] = previous[i];
                    def.attributes.push_back(std::move(n));
                }
            }
            while (def.attributes.size() < config.attrs_per_version) def.attributes.push_back(new_name());
            rng.shuffle(def.attributes);

            const bool null_version = v > 1 && rng.chance(config.null_version_fraction);
            std::set<std::string> used;
            for (std::size_t e = 0; e < entities.size(); ++e) {
                const auto& entity_attrs = cdm[entities[e]];
                const std::string entity = "be" + std::to_string(entities[e] + 1);
                std::map<std::string, std::string> block;
                if (!null_version) {
                    for (const auto& [c, a] : carried[e]) {
                        auto it = image.find(a);
                        if (it != image.end() && !used.count(it->second)) block[c] = it->second;
                    }
                    // top up with fresh pairs
                    std::vector<std::string> free_c, free_a;
                    for (const auto& c : entity_attrs)
                        if (!block.count(c)) free_c.push_back(c);
                    for (const auto& a : def.attributes)
                        if (!used.count(a) && std::none_of(block.begin(), block.end(),
                                                           [&](const auto& kv) { return kv.second == a; }))
                            free_a.push_back(a);
                    rng.shuffle(free_c);
                    rng.shuffle(free_a);
                    for (std::size_t i = 0; block.size() < k && i < free_c.size() && i < free_a.size(); ++i)
                        block[free_c[i]] = free_a[i];
                }
                for (const auto& [c, a] : block) {
                    used.insert(a);
                    w.mappings.push_back({id, static_cast<int>(v), a, entity, 1, c});
                }
                // a null version cuts lineage for mapping purposes only
                carried[e] = std::move(block);
            }
            previous = def.attributes;
            domain.push_back(std::move(def));
        }
    }

    std::vector<const SchemaDefinition*> by_key;
    for (const auto& d : domain) by_key.push_back(&d);
    for (std::size_t i = 0; i < config.messages; ++i) {
        const auto& def = *by_key[rng.below(by_key.size())];
        Json j;
        j["schema"] = def.schema;
        j["version"] = def.version;
        Json payload = Json::object();
        for (const auto& a : def.attributes) {
            if (rng.chance(config.null_value_fraction)) continue;
            if (rng.chance(0.5))
                payload[a] = static_cast<std::int64_t>(rng.below(1'000'000));
            else
                payload[a] = "v" + std::to_string(rng.below(1'000'000));
        }
        j["payload"] = std::move(payload);
        w.messages.push_back(std::move(j));
    }

    for (auto& d : domain) w.schemas.push_back(std::move(d));
    return w;
}

void write_workload(const Workload& workload, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ostringstream schemas, mappings, messages;
    write_schema_lines(schemas, workload.schemas);
    write_mapping_csv(mappings, workload.mappings);
    for (const auto& m : workload.messages) messages << m.dump() << '\n';
    write_text(dir / "schemas.jsonl", schemas.str());
    write_text(dir / "mappings.csv", mappings.str());
    write_text(dir / "messages.jsonl", messages.str());
}

}  // namespace dmm::pipeline
