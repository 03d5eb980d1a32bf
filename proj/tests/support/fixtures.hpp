// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "dmm/compaction.hpp"
#include "dmm/matrix_core.hpp"
#include "dmm/schema_model.hpp"

namespace dmm::testing {

// Three-schema network: s1 in two versions, s2, and three business entities
// where be1.v1 has already been superseded by be1.v2.
inline Registry fig5_registry() {
    Registry r;
    r.register_schema_version(Side::Domain, "s1", 1, {"a1", "a2", "a3"}, std::map<std::string, std::string>{});
    r.register_schema_version(Side::Domain, "s1", 2, {"a4", "a5"},
                              std::map<std::string, std::string>{{"a4", "a1"}, {"a5", "a3"}});
    r.register_schema_version(Side::Domain, "s2", 1, {"a6"}, std::map<std::string, std::string>{});
    r.register_schema_version(Side::Range, "be1", 1, {"c1", "c2"}, std::map<std::string, std::string>{});
    r.register_schema_version(Side::Range, "be1", 2, {"c3", "c4"},
                              std::map<std::string, std::string>{{"c3", "c1"}, {"c4", "c2"}});
    r.delete_schema_version(Side::Range, "be1", 1);
    r.register_schema_version(Side::Range, "be2", 1, {"c5"}, std::map<std::string, std::string>{});
    r.register_schema_version(Side::Range, "be3", 1, {"c6", "c7"}, std::map<std::string, std::string>{});
    r.drain_events();
    return r;
}

inline std::vector<MappingEntry> fig5_entries() {
    return {
        {"s1", 1, "a1", "be1", 2, "c3"}, {"s1", 1, "a3", "be1", 2, "c4"}, {"s1", 2, "a4", "be1", 2, "c3"},
        {"s1", 2, "a5", "be1", 2, "c4"}, {"s2", 1, "a6", "be2", 1, "c5"}, {"s1", 1, "a2", "be3", 1, "c6"},
        {"s1", 1, "a1", "be3", 1, "c7"},
    };
}

// Extraction schema s1 in two versions against be1.v1 and be2.v1, before
// the two update events.
inline Registry fig6_registry() {
    Registry r;
    r.register_schema_version(Side::Domain, "s1", 1, {"a1", "a2", "a3"}, std::map<std::string, std::string>{});
    r.register_schema_version(Side::Domain, "s1", 2, {"a4", "a5", "a6"},
                              std::map<std::string, std::string>{{"a4", "a1"}, {"a6", "a2"}});
    r.register_schema_version(Side::Range, "be1", 1, {"c1", "c2"}, std::map<std::string, std::string>{});
    r.register_schema_version(Side::Range, "be2", 1, {"c6", "c7"}, std::map<std::string, std::string>{});
    r.drain_events();
    return r;
}

inline std::vector<MappingEntry> fig6_entries() {
    return {
        {"s1", 1, "a1", "be1", 1, "c1"}, {"s1", 1, "a3", "be1", 1, "c2"}, {"s1", 2, "a4", "be1", 1, "c1"},
        {"s1", 2, "a6", "be1", 1, "c2"}, {"s1", 1, "a2", "be2", 1, "c6"}, {"s1", 1, "a1", "be2", 1, "c7"},
    };
}

inline DenseBlockElements elements(std::initializer_list<std::pair<const char*, const char*>> pairs) {
    DenseBlockElements out;
    for (const auto& [c, a] : pairs) out.insert({c, a});
    return out;
}

}  // namespace dmm::testing
