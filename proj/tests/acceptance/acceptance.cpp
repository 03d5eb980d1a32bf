// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "dmm/compaction.hpp"
#include "dmm/pipeline/bench.hpp"
#include "dmm/pipeline/engine.hpp"
#include "dmm/pipeline/run_map.hpp"
#include "dmm/pipeline/verify.hpp"
#include "dmm/pipeline/workload.hpp"
#include "support/fixtures.hpp"
#include "support/update_oracle.hpp"

using namespace dmm;
using namespace dmm::pipeline;
using namespace dmm::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
using Equivalences = std::map<std::string, std::string>;

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        v.pass = false;
        v.detail += " (over " + std::to_string(limit_s) + " s)";
    }
    if (!v.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", n, title.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

VerifyCheck find_check(const std::vector<VerifyCheck>& checks, const std::string& name) {
    for (const auto& c : checks)
        if (c.name == name) return c;
    return {name, 0, 1, "missing"};
}

struct Golden {
    std::string name;
    Engine engine;
};

std::vector<Golden> golden_fixtures() {
    std::vector<Golden> out;
    const fs::path dir = fs::path(DMM_SOURCE_DIR) / "tests" / "fixtures" / "fig5";
    auto f5 = Engine::initialize(read_schema_file(dir / "schemas.jsonl"), read_mapping_file(dir / "mappings.csv"));
    f5.delete_version(Side::Range, "be1", 1);
    out.push_back({"fig5", std::move(f5)});
    auto f6 = Engine::initialize(export_registry(fig6_registry()), fig6_entries());
    out.push_back({"fig6", std::move(f6)});
    auto f6b = Engine::initialize(export_registry(fig6_registry()), fig6_entries());
    f6b.add_version({Side::Domain, "s1", 3, {"a7"}, Equivalences{{"a7", "a4"}}});
    f6b.add_version({Side::Range, "be1", 2, {"c3", "c4"}, Equivalences{{"c3", "c1"}, {"c4", "c2"}}});
    out.push_back({"fig6-updated", std::move(f6b)});
    return out;
}

double min_median(const WorkloadConfig& c, int trials) {
    double best = 1e300;
    for (int i = 0; i < trials; ++i) best = std::min(best, bench(c, {1, 1, 1}).latency.median);
    return best;
}

}  // namespace

int main() {
    criterion(1, "fig5 dense permutation set", 1.0, [] {
        const auto r = fig5_registry();
        const auto m = build_matrix(r, fig5_entries());
        const auto dpm = compact_to_dpm(m);
        const auto cells = r.domain().index().size() * r.range().index().size();
        const bool ok = cells == 30 && m.ones().size() == 7 && dpm.element_count() == 7 && dpm.blocks.size() == 4;
        return Verdict{ok, fmt("%zu cells, %zu elements in %zu blocks", cells, dpm.element_count(), dpm.blocks.size())};
    });

    criterion(2, "fig5 unique square blocks", 1.0, [] {
        const auto r = fig5_registry();
        const auto dusb = compact_to_dusb(build_matrix(r, fig5_entries()), r);
        const bool ok = dusb.one_element_count() == 5 && dusb.special_null_count() == 1 && dusb.superblocks.size() == 3;
        return Verdict{ok, fmt("%zu ones, %zu null blocks, %zu super-blocks", dusb.one_element_count(),
                               dusb.special_null_count(), dusb.superblocks.size())};
    });

    criterion(3, "fig6 update", 0, [] {
        auto e = Engine::initialize(export_registry(fig6_registry()), fig6_entries());
        const auto o1 = e.add_version({Side::Domain, "s1", 3, {"a7"}, Equivalences{{"a7", "a4"}}});
        bool ok = e.dpm().blocks.at({"s1", 3, "be1", 1}) == elements({{"c1", "a7"}}) &&
                  !e.dpm().blocks.count({"s1", 3, "be2", 1}) && o1.notifications.size() == 1 &&
                  o1.notifications[0].kind == NotificationKind::ShrunkenPermutation &&
                  o1.notifications[0].old_k == 2 && o1.notifications[0].new_k == 1;
        const auto o2 =
            e.add_version({Side::Range, "be1", 2, {"c3", "c4"}, Equivalences{{"c3", "c1"}, {"c4", "c2"}}});
        ok = ok && o2.notifications.empty() && o2.stats.copied == 5 && o2.stats.deleted == 5 &&
             !e.registry().range().has_version("be1", 1);
        for (const auto& [key, els] : e.dpm().blocks) ok = ok && !(key.entity == "be1" && key.entity_version == 1);
        const auto expected = std::map<BlockKey, DenseBlockElements>{
            {{"s1", 1, "be1", 2}, elements({{"c3", "a1"}, {"c4", "a3"}})},
            {{"s1", 2, "be1", 2}, elements({{"c3", "a4"}, {"c4", "a6"}})},
            {{"s1", 3, "be1", 2}, elements({{"c3", "a7"}})},
            {{"s1", 1, "be2", 1}, elements({{"c6", "a2"}, {"c7", "a1"}})},
        };
        ok = ok && e.dpm().blocks == expected;
        return Verdict{ok, fmt("%zu notification(s), %zu copied, %zu deleted, %zu blocks", o1.notifications.size(),
                               o2.stats.copied, o2.stats.deleted, e.dpm().blocks.size())};
    });

    // one run of the random fixtures serves criteria 4 and 5; its time counts against 4
    std::vector<VerifyCheck> checks;
    criterion(4, "compaction round trips", 30.0, [&] {
        checks = verify({100, 10, 1});
        const auto a = find_check(checks, "dpm round trip");
        const auto b = find_check(checks, "dusb round trip");
        const bool ok = a.ok() && b.ok() && a.cases >= 100 && b.cases >= 100;
        auto detail = fmt("%zu fixtures, %zu + %zu failures", a.cases, a.failures, b.failures);
        if (!a.ok()) detail += "; " + a.first_failure;
        if (!b.ok()) detail += "; " + b.first_failure;
        return Verdict{ok, detail};
    });

    criterion(5, "sparse baseline equals dense mapping", 30.0, [&] {
        const auto c = find_check(checks, "sparse vs dense mapping");
        auto detail = fmt("%zu messages, %zu failures", c.cases, c.failures);
        if (!c.ok()) detail += "; " + c.first_failure;
        return Verdict{c.ok() && c.cases >= 1000, detail};
    });

    criterion(6, "updates equal the full-matrix oracle", 30.0, [] {
        std::size_t events = 0, mismatches = 0;
        std::string first;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto run = run_update_oracle(seed, 15);
            events += run.events;
            mismatches += run.mismatches;
            if (first.empty()) first = run.first_mismatch;
        }
        auto detail = fmt("%zu events, %zu mismatches", events, mismatches);
        if (mismatches) detail += "; " + first;
        return Verdict{events >= 100 && mismatches == 0, detail};
    });

    criterion(7, "compaction ratio on the scaled workload", 0, [] {
        WorkloadConfig c;
        c.messages = 1;
        const auto w = generate_workload(c);
        const auto e = Engine::initialize(w.schemas, w.mappings);
        const auto cells = e.registry().domain().index().size() * e.registry().range().index().size();
        const double stored = static_cast<double>(e.dpm().element_count()) / static_cast<double>(cells);
        return Verdict{stored <= 0.01, fmt("%zu of %zu elements stored, ratio %.5f", e.dpm().element_count(), cells,
                                           stored)};
    });

    criterion(8, "lookup latency", 120.0, [] {
        WorkloadConfig scaled;
        scaled.messages = 5000;
        const auto r = bench(scaled, {1, 1, 3});
        WorkloadConfig small = scaled, large = scaled;
        small.schemas = 10;
        large.schemas = 1000;
        const double m10 = min_median(small, 3);
        const double m1000 = min_median(large, 3);
        const double ratio = m1000 / m10;
        const bool ok = r.latency.median <= 1000.0 && ratio < 2.0;
        return Verdict{ok, fmt("median %.2f us; 10 schemas %.2f us, 1000 schemas %.2f us, ratio %.2f",
                               r.latency.median, m10, m1000, ratio)};
    });

    criterion(9, "output independent of worker count", 0, [] {
        WorkloadConfig c;
        c.messages = 10000;
        const auto w = generate_workload(c);
        const auto e = Engine::initialize(w.schemas, w.mappings);
        std::string input;
        for (const auto& m : w.messages) input += m.dump() + "\n";
        const auto workers = std::max<std::size_t>(std::thread::hardware_concurrency(), 8);
        auto run = [&](std::size_t n) {
            std::istringstream in(input);
            std::ostringstream out, err;
            const auto stats = run_map(in, out, err, e.registry(), e.dpm(), {n, MapMode::Dense, 256});
            return std::make_pair(stats, out.str());
        };
        const auto [s1, o1] = run(1);
        const auto [sn, on] = run(workers);
        const bool ok = s1.inputs == 10000 && o1 == on && s1.outputs == sn.outputs && s1.errors == 0;
        return Verdict{ok, fmt("%zu messages, %zu outputs, 1 vs %zu workers", s1.inputs, s1.outputs, workers)};
    });

    criterion(10, "store stability", 0, [] {
        bool ok = true;
        std::string detail;
        for (auto& g : golden_fixtures()) {
            const auto base = fs::temp_directory_path() / ("dmm-accept-" + std::to_string(std::random_device{}()));
            g.engine.save(base / "a");
            Engine::load(base / "a").save(base / "b");
            for (const auto* name : {"schemas.jsonl", "store.json", "notifications.json"}) {
                if (read_text(base / "a" / name) != read_text(base / "b" / name)) {
                    ok = false;
                    detail += g.name + "/" + name + " differs; ";
                }
            }
            fs::remove_all(base);
        }
        return Verdict{ok, detail.empty() ? "fig5, fig6, fig6-updated identical" : detail};
    });

    return failures == 0 ? 0 : 1;
}
