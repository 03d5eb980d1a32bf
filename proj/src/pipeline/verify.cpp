// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/pipeline/verify.hpp"

#include <algorithm>
#include <random>

#include "dmm/compaction.hpp"
#include "dmm/error.hpp"
#include "dmm/mapping_engine.hpp"

namespace dmm::pipeline {

WorkloadConfig random_fixture_config(std::uint64_t seed, std::size_t messages) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); };
    WorkloadConfig c;
    c.seed = seed;
    c.schemas = pick(3, 5);
    c.versions_per_schema = pick(3, 5);
    c.attrs_per_version = pick(5, 7);
    c.cdm_entities = pick(2, 4);
    c.cdm_attrs = pick(3, 6);
    const auto k = pick(0, std::min(c.attrs_per_version, c.cdm_attrs));
    c.mapped_fraction = static_cast<double>(k) / static_cast<double>(c.cdm_attrs);
    c.entities_per_schema = pick(1, c.cdm_entities);
    c.duplication = static_cast<double>(pick(0, 10)) / 10.0;
    c.null_version_fraction = static_cast<double>(pick(0, 3)) / 10.0;
    c.null_value_fraction = static_cast<double>(pick(0, 5)) / 10.0;
    c.messages = messages;
    return c;
}

namespace {

std::vector<std::string> canonical(const std::vector<Message>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms) out.push_back(to_json(m).dump());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<VerifyCheck> verify(const VerifyOptions& options) {
    auto check = [](const char* name) {
        VerifyCheck c;
        c.name = name;
        return c;
    };
    auto dpm_trip = check("dpm round trip"), dusb_trip = check("dusb round trip"),
         rebuild = check("dpm rebuilt from dusb"), store = check("store round trip"),
         oracle = check("sparse vs dense mapping");
    auto fail = [](VerifyCheck& c, const std::string& why) {
        if (c.failures++ == 0) c.first_failure = why;
    };

    for (std::size_t f = 0; f < options.fixtures; ++f) {
        const auto seed = options.seed + f;
        const auto tag = "seed " + std::to_string(seed) + ": ";
        try {
            const auto w = generate_workload(random_fixture_config(seed, options.messages_per_fixture));
            Registry registry;
            register_all(registry, w.schemas);
            const auto matrix = build_matrix(registry, w.mappings);
            const auto dpm = compact_to_dpm(matrix);
            const auto dusb = compact_to_dusb(matrix, registry);

            ++dpm_trip.cases;
            if (decompact_dpm(dpm, registry).ones() != matrix.ones()) fail(dpm_trip, tag + "one-sets differ");
            ++dusb_trip.cases;
            if (decompact_dusb(dusb, registry).ones() != matrix.ones()) fail(dusb_trip, tag + "one-sets differ");
            ++rebuild.cases;
            if (!(rebuild_dpm_from_dusb(dusb, registry) == dpm)) fail(rebuild, tag + "dense sets differ");
            ++store.cases;
            const auto text = dusb_to_json(dusb).dump(2);
            if (dusb_to_json(dusb_from_json(Json::parse(text))).dump(2) != text) fail(store, tag + "bytes differ");

            SnapshotPublisher publisher;
            const auto snap = publisher.publish(dpm, registry);
            for (const auto& j : w.messages) {
                ++oracle.cases;
                const auto msg = incoming_from_json(j, matrix.state());
                const auto sparse = densify(map_sparse(sparsify(msg, registry.domain()), matrix));
                const auto dense = map_dense(densify(msg), *snap);
                if (canonical(sparse) != canonical(dense)) fail(oracle, tag + j.dump());
            }
        } catch (const Error& e) {
            fail(dpm_trip, tag + e.what());
        }
    }
    return {dpm_trip, dusb_trip, rebuild, store, oracle};
}

}  // namespace dmm::pipeline
