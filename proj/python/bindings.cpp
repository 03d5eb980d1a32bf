// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dmm/error.hpp"
#include "dmm/pipeline/bench.hpp"
#include "dmm/pipeline/engine.hpp"
#include "dmm/pipeline/inspect.hpp"
#include "dmm/pipeline/run_map.hpp"
#include "dmm/pipeline/verify.hpp"
#include "dmm/pipeline/workload.hpp"

namespace py = pybind11;
using namespace dmm;
using namespace dmm::pipeline;

namespace {

// Values cross the boundary as JSON text; the json module does the Python side.
Json to_cpp(const py::handle& obj) {
    return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object to_py(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<SchemaDefinition> definitions(const py::iterable& items) {
    std::vector<SchemaDefinition> out;
    for (const auto& item : items) out.push_back(schema_definition_from_json(to_cpp(item)));
    return out;
}

std::vector<MappingEntry> mapping_entries(const py::iterable& rows) {
    std::vector<MappingEntry> out;
    for (const auto& row : rows) {
        const auto j = to_cpp(row);
        out.push_back({j.at("schema").get<std::string>(), j.at("schema_version").get<int>(),
                       j.at("attribute").get<std::string>(), j.at("entity").get<std::string>(),
                       j.at("entity_version").get<int>(), j.at("cdm_attribute").get<std::string>()});
    }
    return out;
}

Side side_of(const std::string& s) {
    if (s == "domain") return Side::Domain;
    if (s == "range") return Side::Range;
    throw Error(ErrorCode::Parse, "side must be domain or range, got " + s);
}

py::dict outcome(const Engine::UpdateOutcome& o) {
    py::list notes;
    for (const auto& n : o.notifications) notes.append(to_py(to_json(n)));
    py::dict d;
    d["state"] = o.state;
    d["notifications"] = notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_dmm, m) {
    m.doc() = "Dynamic mapping matrix for CDC message mapping";

    // released so nothing touches the object during interpreter shutdown
    static PyObject* dmm_error = py::exception<Error>(m, "DmmError", PyExc_RuntimeError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(dmm_error)(e.what());
            exc.attr("code") = to_string(e.code());
            PyErr_SetObject(dmm_error, exc.ptr());
        }
    });

    py::class_<Engine>(m, "Engine")
        .def_static(
            "initialize",
            [](const py::iterable& schemas, const py::iterable& mappings) {
                return Engine::initialize(definitions(schemas), mapping_entries(mappings));
            },
            py::arg("schemas"), py::arg("mappings"))
        .def_static(
            "from_files",
            [](const std::filesystem::path& schemas, const std::filesystem::path& mappings) {
                return Engine::initialize(read_schema_file(schemas), read_mapping_file(mappings));
            },
            py::arg("schemas"), py::arg("mappings"))
        .def_static("load", &Engine::load, py::arg("store"))
        .def("save", &Engine::save, py::arg("store"))
        .def_property_readonly("state", &Engine::state)
        .def_property_readonly("dpm_elements", [](const Engine& e) { return e.dpm().element_count(); })
        .def_property_readonly("dusb_ones", [](const Engine& e) { return e.dusb().one_element_count(); })
        .def_property_readonly("dusb_null_blocks", [](const Engine& e) { return e.dusb().special_null_count(); })
        .def(
            "map",
            [](const Engine& e, const py::dict& message) {
                const auto msg = incoming_from_json(to_cpp(message), e.state());
                std::vector<Message> out;
                {
                    py::gil_scoped_release release;
                    out = map_dense(msg, *e.snapshot());
                }
                py::list result;
                for (const auto& o : out) result.append(to_py(to_json(o)));
                return result;
            },
            py::arg("message"))
        .def(
            "map_lines",
            [](const Engine& e, const std::string& text, std::size_t workers, bool sparse_oracle) {
                std::istringstream in(text);
                std::ostringstream out, err;
                RunStats stats;
                {
                    py::gil_scoped_release release;
                    stats = run_map(in, out, err, e.registry(), e.dpm(),
                                    {workers, sparse_oracle ? MapMode::SparseOracle : MapMode::Dense});
                }
                return py::make_tuple(out.str(), err.str(), to_py(stats.to_json()));
            },
            py::arg("text"), py::arg("workers") = 1, py::arg("sparse_oracle") = false)
        .def(
            "add_version",
            [](Engine& e, const py::dict& def) { return outcome(e.add_version(schema_definition_from_json(to_cpp(def)))); },
            py::arg("definition"))
        .def(
            "delete_version",
            [](Engine& e, const std::string& side, const std::string& schema, int version) {
                return outcome(e.delete_version(side_of(side), schema, version));
            },
            py::arg("side"), py::arg("schema"), py::arg("version"))
        .def("rebuild_from_store", &Engine::rebuild_from_store)
        .def("notifications",
             [](const Engine& e) {
                 py::list out;
                 for (const auto& p : e.notifications()) {
                     auto j = to_json(p.notification);
                     j["id"] = p.id;
                     j["state"] = p.state;
                     out.append(to_py(j));
                 }
                 return out;
             })
        .def("acknowledge", &Engine::acknowledge, py::arg("id"))
        .def("acknowledge_all", &Engine::acknowledge_all)
        .def(
            "reverse",
            [](const Engine& e, const std::string& entity, int version) {
                return to_py(reverse_to_json(inspect_reverse(e.dpm(), e.registry(), entity, version)));
            },
            py::arg("entity"), py::arg("version"))
        .def(
            "progression",
            [](const Engine& e, const std::string& schema) {
                return to_py(progression_to_json(schema, inspect_progression(e.dpm(), e.registry(), schema)));
            },
            py::arg("schema"));

    m.def(
        "write_workload",
        [](const py::dict& config, const std::filesystem::path& out) {
            write_workload(generate_workload(workload_config_from_json(to_cpp(config))), out);
        },
        py::arg("config"), py::arg("out"));
    m.def(
        "bench",
        [](const py::dict& config, std::size_t workers, std::size_t rounds) {
            BenchReport r;
            const auto c = workload_config_from_json(to_cpp(config));
            {
                py::gil_scoped_release release;
                r = bench(c, {workers, 1, rounds});
            }
            return to_py(r.to_json());
        },
        py::arg("config"), py::arg("workers") = 1, py::arg("rounds") = 3);
    m.def(
        "verify",
        [](std::size_t fixtures, std::size_t messages, std::uint64_t seed) {
            py::list out;
            for (const auto& c : verify({fixtures, messages, seed})) {
                py::dict d;
                d["name"] = c.name;
                d["cases"] = c.cases;
                d["failures"] = c.failures;
                d["first_failure"] = c.first_failure;
                out.append(d);
            }
            return out;
        },
        py::arg("fixtures") = 100, py::arg("messages") = 10, py::arg("seed") = 1);
}
