// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <thread>

#include "dmm/error.hpp"
#include "dmm/mapping_engine.hpp"
#include "dmm/pipeline/io.hpp"
#include "dmm/pipeline/verify.hpp"
#include "dmm/update_engine.hpp"
#include "support/fixtures.hpp"

using namespace dmm;
using namespace dmm::testing;

namespace {

struct Fig5 {
    Registry registry = fig5_registry();
    MappingMatrix matrix;
    DenseSetDPM dpm;
    SnapshotPublisher publisher;
    std::shared_ptr<const EngineSnapshot> snap;
    Fig5() {
        const auto e = fig5_entries();
        matrix = build_matrix(registry, e);
        dpm = compact_to_dpm(matrix);
        snap = publisher.publish(dpm, registry);
    }
};

Message in(const std::string& schema, int version, std::vector<Field> payload, std::uint64_t state = 0) {
    return {MessageSide::Incoming, schema, version, state, std::move(payload)};
}

Message out(const std::string& entity, int version, std::vector<Field> payload, std::uint64_t state = 0) {
    return {MessageSide::Outgoing, entity, version, state, std::move(payload)};
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

std::vector<std::string> canonical(const std::vector<Message>& ms) {
    std::vector<std::string> s;
    for (const auto& m : ms) s.push_back(pipeline::to_json(m).dump());
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

TEST_CASE("sparse baseline on fig5") {
    Fig5 f;
    const auto res = map_sparse(in("s1", 1, {{"a1", "X"}, {"a2", nullptr}, {"a3", "Y"}}), f.matrix);
    REQUIRE(res.size() == 3);
    CHECK(res[0] == out("be1", 2, {{"c3", "X"}, {"c4", "Y"}}));
    CHECK(res[1] == out("be2", 1, {{"c5", nullptr}}));
    CHECK(res[2] == out("be3", 1, {{"c6", nullptr}, {"c7", "X"}}));
}

TEST_CASE("sparse baseline with all nulls") {
    Fig5 f;
    const auto res = map_sparse(in("s1", 1, {{"a1", nullptr}, {"a2", nullptr}, {"a3", nullptr}}), f.matrix);
    CHECK(res.size() == 3);
    for (const auto& m : res)
        for (const auto& fd : m.payload) CHECK(fd.value.is_null());
    CHECK(densify(res).empty());
}

TEST_CASE("sparse baseline errors") {
    Fig5 f;
    CHECK(code_of([&] { map_sparse(in("s1", 9, {}), f.matrix); }) == ErrorCode::UnknownVersion);
    CHECK(code_of([&] { map_sparse(in("s1", 1, {{"a1", 1}}), f.matrix); }) == ErrorCode::PayloadMismatch);
    CHECK(code_of([&] { map_sparse(in("s1", 1, {{"a1", 1}, {"a2", 1}, {"a3", 1}}, 4), f.matrix); }) ==
          ErrorCode::StateMismatch);
    CHECK(code_of([&] { map_sparse(in("s1", 2, {{"a4", 1}, {"a5", 1}, {"zz", 1}}), f.matrix); }) ==
          ErrorCode::PayloadMismatch);
}

TEST_CASE("dense mapping on fig5") {
    Fig5 f;
    auto res = map_dense(in("s1", 1, {{"a1", "X"}, {"a3", "Y"}}), *f.snap);
    REQUIRE(res.size() == 2);
    CHECK(res[0] == out("be1", 2, {{"c3", "X"}, {"c4", "Y"}}));
    CHECK(res[1] == out("be3", 1, {{"c7", "X"}}));

    res = map_dense(in("s2", 1, {{"a6", "Z"}}), *f.snap);
    REQUIRE(res.size() == 1);
    CHECK(res[0] == out("be2", 1, {{"c5", "Z"}}));

    res = map_dense(in("s1", 2, {{"a5", "Q"}}), *f.snap);
    REQUIRE(res.size() == 1);
    CHECK(res[0] == out("be1", 2, {{"c4", "Q"}}));
}

TEST_CASE("dense mapping leaves values untouched and ignores foreign attributes") {
    Fig5 f;
    DataObject nested = {{"k", {1, 2.5, "x"}}};
    const auto res = map_dense(in("s2", 1, {{"a6", nested}, {"unrelated", 3}}), *f.snap);
    REQUIRE(res.size() == 1);
    CHECK(res[0].payload.at(0).value == nested);
}

TEST_CASE("dense mapping errors") {
    Fig5 f;
    CHECK(code_of([&] { map_dense(in("s1", 9, {{"a1", 1}}), *f.snap); }) == ErrorCode::UnknownVersion);
    CHECK(code_of([&] { map_dense(in("s1", 1, {{"a1", 1}}, 3), *f.snap); }) == ErrorCode::StateMismatch);
}

TEST_CASE("densify and sparsify") {
    Fig5 f;
    const auto sparse = in("s1", 1, {{"a1", 1}, {"a2", nullptr}, {"a3", 2}});
    CHECK(densify(sparse).payload.size() == 2);
    CHECK(sparsify(densify(sparse), f.registry.domain()) == sparse);
    CHECK(code_of([&] { sparsify(in("s1", 1, {{"zz", 1}}), f.registry.domain()); }) == ErrorCode::PayloadMismatch);
}

TEST_CASE("snapshot columns") {
    Fig5 f;
    CHECK(f.snap->state() == 0);
    CHECK(f.snap->mapped_columns() == std::vector<VersionKey>{{"s1", 1}, {"s1", 2}, {"s2", 1}});
    CHECK(f.snap->column_count() == 3);
    CHECK(f.snap->element_count() == 7);
    const auto* col = f.snap->column({"s1", 1});
    REQUIRE(col != nullptr);
    REQUIRE(col->blocks.size() == 2);
    CHECK(col->blocks[0].entity == "be1");
    CHECK(col->blocks[1].elements[0].cdm_attribute == "c6");
    CHECK(f.snap->column({"s7", 1}) == nullptr);
}

TEST_CASE("publishing follows the state") {
    Fig5 f;
    // nothing changed since the last publish
    CHECK(code_of([&] { f.publisher.publish(f.dpm, f.registry); }) == ErrorCode::StateMismatch);

    auto old = f.publisher.current();
    const auto res = apply_change(f.dpm, f.registry.delete_schema_version(Side::Domain, "s2", 1), f.registry);
    // dense set behind the registry
    CHECK(code_of([&] { f.publisher.publish(f.dpm, f.registry); }) == ErrorCode::StateMismatch);
    const auto snap = f.publisher.publish(res.dpm, f.registry);
    CHECK(snap->state() == 1);
    CHECK(f.publisher.current() == snap);
    // readers holding the old snapshot keep working on it
    CHECK(map_dense(in("s2", 1, {{"a6", "Z"}}), *old).size() == 1);
    CHECK(code_of([&] { map_dense(in("s2", 1, {{"a6", "Z"}}, 1), *snap); }) == ErrorCode::UnknownVersion);
}

TEST_CASE("concurrent readers during publishes") {
    Registry registry;
    const auto w = pipeline::generate_workload(pipeline::random_fixture_config(5, 1));
    pipeline::register_all(registry, w.schemas);
    registry.drain_events();
    auto dpm = compact_to_dpm(build_matrix(registry, w.mappings));
    SnapshotPublisher publisher;
    publisher.publish(dpm, registry);

    std::atomic<bool> stop{false};
    std::atomic<std::size_t> reads{0};
    std::vector<std::thread> readers;
    for (int t = 0; t < 3; ++t)
        readers.emplace_back([&] {
            while (!stop) {
                auto snap = publisher.current();
                for (const auto& key : snap->mapped_columns()) {
                    Message m{MessageSide::Incoming, key.schema, key.version, snap->state(),
                              {{registry.domain().at(key.schema, key.version).attributes.at(0), 1}}};
                    CHECK_FALSE(map_dense(m, *snap).size() > 4);
                    ++reads;
                }
            }
        });
    for (int i = 0; i < 20; ++i) {
        dpm.state += 1;
        publisher.publish(dpm, registry);
    }
    stop = true;
    for (auto& t : readers) t.join();
    CHECK(publisher.current()->state() == 20);
    CHECK(reads > 0);
}

TEST_CASE("sparse and dense agree on random fixtures") {
    std::size_t compared = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto w = pipeline::generate_workload(pipeline::random_fixture_config(seed, 20));
        Registry r;
        pipeline::register_all(r, w.schemas);
        const auto m = build_matrix(r, w.mappings);
        SnapshotPublisher p;
        const auto snap = p.publish(compact_to_dpm(m), r);
        for (const auto& j : w.messages) {
            const auto msg = pipeline::incoming_from_json(j, 0);
            const auto sparse = densify(map_sparse(sparsify(msg, r.domain()), m));
            const auto dense = map_dense(densify(msg), *snap);
            CHECK(canonical(sparse) == canonical(dense));
            // dense output order already matches the baseline's
            CHECK(sparse == dense);
            ++compared;
        }
    }
    CHECK(compared == 600);
}

TEST_CASE("parallel block mapping matches sequential mapping") {
    Fig5 f;
    ThreadPool pool(4);
    const auto msg = in("s1", 1, {{"a1", "X"}, {"a2", "W"}, {"a3", "Y"}});
    for (int i = 0; i < 50; ++i) CHECK(map_dense_parallel(msg, *f.snap, pool) == map_dense(msg, *f.snap));
}

TEST_CASE("duplicate messages map identically") {
    Fig5 f;
    const auto msg = in("s1", 1, {{"a1", "X"}});
    CHECK(map_dense(msg, *f.snap) == map_dense(msg, *f.snap));
}
