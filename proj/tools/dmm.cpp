// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
//
// dmm: command-line front end for the dynamic mapping engine.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "dmm/error.hpp"
#include "dmm/pipeline/bench.hpp"
#include "dmm/pipeline/engine.hpp"
#include "dmm/pipeline/inspect.hpp"
#include "dmm/pipeline/run_map.hpp"
#include "dmm/pipeline/verify.hpp"
#include "dmm/pipeline/workload.hpp"

using namespace dmm;
using namespace dmm::pipeline;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    return f;
}

WorkloadConfig load_config(const std::string& path) {
    try {
        return workload_config_from_json(Json::parse(read_text(path)));
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
}

SchemaDefinition load_definition(const std::string& path) {
    std::istringstream in(read_text(path));
    auto defs = read_schema_lines(in);
    if (defs.size() != 1) throw Error(ErrorCode::Parse, path + " must hold exactly one schema definition");
    return defs.front();
}

void print_outcome(const Engine::UpdateOutcome& o) {
    Json j;
    j["state"] = o.state;
    j["copied"] = o.stats.copied;
    j["deleted"] = o.stats.deleted;
    Json list = Json::array();
    for (const auto& n : o.notifications) list.push_back(to_json(n));
    j["notifications"] = std::move(list);
    std::cout << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic mapping engine for versioned extraction schemas"};
    app.require_subcommand(1);

    std::string store, schemas_file, mappings_file;

    auto* init = app.add_subcommand("init", "Build a store from schema definitions and a mapping CSV");
    init->add_option("--schemas", schemas_file, "Schema definitions, JSON lines")->required();
    init->add_option("--mappings", mappings_file, "Mapping elements, CSV")->required();
    init->add_option("--store", store, "Store directory")->required();

    std::string in_file, out_file, err_file;
    std::size_t workers = 1;
    bool dense = false, sparse = false, show_stats = false;
    auto* map = app.add_subcommand("map", "Map a JSON-lines stream of messages or CDC envelopes");
    map->add_option("--store", store)->required();
    map->add_option("--in", in_file, "Input file (default stdin)");
    map->add_option("--out", out_file, "Output file (default stdout)");
    map->add_option("--errors", err_file, "Error stream file (default stderr)");
    map->add_option("--workers", workers)->check(CLI::PositiveNumber);
    auto* dense_flag = map->add_flag("--dense", dense, "Dense set mapping (default)");
    map->add_flag("--sparse-oracle", sparse, "Full-matrix baseline")->excludes(dense_flag);
    map->add_flag("--stats", show_stats, "Print run counters to stderr");

    int change = 0, version = 0;
    std::string schema, def_file;
    auto* update = app.add_subcommand("update", "Apply one schema change");
    update->add_option("--store", store)->required();
    bool from_scratch = false;
    auto* case_opt = update->add_option("--case", change, "1 delete extraction version, 2 delete entity version, "
                                                          "3 add extraction version, 4 add entity version")
                         ->check(CLI::Range(1, 4));
    update->add_flag("--from-scratch", from_scratch, "Recompute the dense set from the stored unique blocks")
        ->excludes(case_opt);
    update->add_option("--schema", schema, "Schema id (cases 1, 2)");
    update->add_option("--version", version, "Version (cases 1, 2)");
    update->add_option("--file", def_file, "Schema definition, one JSON object (cases 3, 4)");

    std::string ack;
    auto* notes = app.add_subcommand("notifications", "List or acknowledge pending update notifications");
    notes->add_option("--store", store)->required();
    notes->add_option("--ack", ack, "Id to acknowledge, or 'all'");

    auto* inspect = app.add_subcommand("inspect", "Query the stored mappings");
    inspect->require_subcommand(1);
    std::string entity;
    int entity_version = 0;
    auto* reverse = inspect->add_subcommand("reverse", "Extraction versions feeding a business-entity version");
    reverse->add_option("--store", store)->required();
    reverse->add_option("--entity", entity)->required();
    reverse->add_option("--version", entity_version)->required();
    auto* progression = inspect->add_subcommand("progression", "Mappings of every version of one schema");
    progression->add_option("--store", store)->required();
    progression->add_option("--schema", schema)->required();

    std::string config_file, out_dir;
    std::optional<std::uint64_t> seed;
    auto* workload = app.add_subcommand("workload", "Generate a synthetic workload");
    workload->add_option("--config", config_file)->required();
    workload->add_option("--seed", seed);
    workload->add_option("--out", out_dir, "Output directory")->default_val("workload");

    std::size_t rounds = 3;
    bool json_only = false;
    std::string report_file;
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark dense mapping on a generated workload");
    bench_cmd->add_option("--config", config_file)->required();
    bench_cmd->add_option("--seed", seed);
    bench_cmd->add_option("--workers", workers)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--report", report_file, "Write the JSON report here");
    bench_cmd->add_flag("--json", json_only, "Print the JSON report instead of the table");

    VerifyOptions vopts;
    auto* verify_cmd = app.add_subcommand("verify", "Run round-trip and oracle checks on random fixtures");
    verify_cmd->add_option("--fixtures", vopts.fixtures);
    verify_cmd->add_option("--messages", vopts.messages_per_fixture);
    verify_cmd->add_option("--seed", vopts.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*init) {
            const auto defs = read_schema_file(schemas_file);
            const auto entries = read_mapping_file(mappings_file);
            auto engine = Engine::initialize(defs, entries);
            engine.save(store);
            std::cout << Json{{"state", engine.state()},
                              {"dpm_elements", engine.dpm().element_count()},
                              {"dusb_ones", engine.dusb().one_element_count()},
                              {"dusb_null_blocks", engine.dusb().special_null_count()}}
                             .dump()
                      << '\n';
        } else if (*map) {
            const auto engine = Engine::load(store);
            std::ifstream fin;
            std::ofstream fout, ferr;
            if (!in_file.empty()) {
                fin.open(in_file, std::ios::binary);
                if (!fin) throw Error(ErrorCode::Io, "cannot open " + in_file);
            }
            if (!out_file.empty()) fout = open_out(out_file);
            if (!err_file.empty()) ferr = open_out(err_file);
            RunOptions opts{workers, sparse ? MapMode::SparseOracle : MapMode::Dense, 512};
            const auto stats = run_map(in_file.empty() ? std::cin : fin, out_file.empty() ? std::cout : fout,
                                       err_file.empty() ? std::cerr : ferr, engine.registry(), engine.dpm(), opts);
            if (show_stats) std::cerr << stats.to_json().dump() << '\n';
        } else if (*update) {
            auto engine = Engine::load(store);
            if (from_scratch) {
                engine.rebuild_from_store();
                engine.save(store);
                std::cout << Json{{"state", engine.state()}, {"dpm_elements", engine.dpm().element_count()}}.dump()
                          << '\n';
                return 0;
            }
            if (change == 0) throw CLI::RequiredError("--case or --from-scratch");
            const bool addition = change >= 3;
            Engine::UpdateOutcome outcome;
            if (addition) {
                if (def_file.empty()) throw CLI::RequiredError("--file");
                auto def = load_definition(def_file);
                const Side expected = change == 3 ? Side::Domain : Side::Range;
                if (def.side != expected)
                    throw Error(ErrorCode::Parse, std::string("case ") + std::to_string(change) + " expects a " +
                                                      to_string(expected) + " schema definition");
                outcome = engine.add_version(def);
            } else {
                if (schema.empty() || version == 0) throw CLI::RequiredError("--schema and --version");
                outcome = engine.delete_version(change == 1 ? Side::Domain : Side::Range, schema, version);
            }
            engine.save(store);
            print_outcome(outcome);
        } else if (*notes) {
            auto engine = Engine::load(store);
            if (!ack.empty()) {
                if (ack == "all") {
                    engine.acknowledge_all();
                } else {
                    std::uint64_t id = 0;
                    try {
                        id = std::stoull(ack);
                    } catch (const std::exception&) {
                        throw CLI::ValidationError("--ack", "expects an id or 'all'");
                    }
                    if (!engine.acknowledge(id))
                        throw CLI::ValidationError("--ack", "no pending notification " + ack);
                }
                engine.save(store);
            }
            for (const auto& p : engine.notifications())
                std::cout << Json{{"id", p.id}, {"state", p.state}, {"notification", to_json(p.notification)}}.dump()
                          << '\n';
        } else if (*reverse) {
            const auto engine = Engine::load(store);
            std::cout << reverse_to_json(inspect_reverse(engine.dpm(), engine.registry(), entity, entity_version)).dump()
                      << '\n';
        } else if (*progression) {
            const auto engine = Engine::load(store);
            std::cout << progression_to_json(schema, inspect_progression(engine.dpm(), engine.registry(), schema))
                             .dump(2)
                      << '\n';
        } else if (*workload) {
            auto cfg = load_config(config_file);
            if (seed) cfg.seed = *seed;
            const auto w = generate_workload(cfg);
            write_workload(w, out_dir);
            std::cout << Json{{"out", out_dir},
                              {"schemas", w.schemas.size()},
                              {"mappings", w.mappings.size()},
                              {"messages", w.messages.size()}}
                             .dump()
                      << '\n';
        } else if (*bench_cmd) {
            auto cfg = load_config(config_file);
            if (seed) cfg.seed = *seed;
            const auto report = bench(cfg, {workers, 1, rounds});
            if (!report_file.empty()) write_text(report_file, report.to_json().dump(2) + "\n");
            if (json_only)
                std::cout << report.to_json().dump(2) << '\n';
            else
                std::cout << report.table();
        } else if (*verify_cmd) {
            bool ok = true;
            for (const auto& c : verify(vopts)) {
                std::cout << (c.ok() ? "PASS " : "FAIL ") << c.name << " (" << c.cases << " cases";
                if (!c.ok()) std::cout << ", " << c.failures << " failed, first: " << c.first_failure;
                std::cout << ")\n";
                ok = ok && c.ok();
            }
            return ok ? 0 : 3;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "dmm: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "dmm: " << e.what() << '\n';
        return is_validation_error(e.code()) ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "dmm: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
