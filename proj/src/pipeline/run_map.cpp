// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/pipeline/run_map.hpp"

#include <future>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "dmm/error.hpp"
#include "dmm/thread_pool.hpp"

namespace dmm::pipeline {

Json RunStats::to_json() const {
    Json j;
    j["inputs"] = inputs;
    j["mapped_sources"] = mapped_sources;
    j["outputs"] = outputs;
    j["errors"] = errors;
    j["suppressed"] = suppressed;
    return j;
}

std::string render_outputs(const std::vector<Message>& outputs) {
    std::string s;
    for (const auto& m : outputs) s += pipeline::to_json(m).dump() + '\n';
    return s;
}

namespace {

struct Mapper {
    MapMode mode;
    const Registry& registry;
    std::shared_ptr<const EngineSnapshot> snapshot;
    std::optional<MappingMatrix> matrix;

    std::vector<Message> map(const Message& msg) const {
        if (mode == MapMode::Dense) return map_dense(msg, *snapshot);
        if (msg.state != matrix->state())
            throw Error(ErrorCode::StateMismatch, "message state " + std::to_string(msg.state) +
                                                      " != engine state " + std::to_string(matrix->state()));
        if (!registry.domain().has_version(msg.schema_id, msg.version))
            throw Error(ErrorCode::UnknownVersion, msg.schema_id + ".v" + std::to_string(msg.version) +
                                                       " is unknown in state " + std::to_string(matrix->state()));
        return densify(map_sparse(sparsify(msg, registry.domain()), *matrix));
    }
};

struct LineResult {
    std::string out;
    std::size_t outputs = 0;
    std::optional<Json> error;
};

Json error_entry(std::size_t line, const std::string& code, const std::string& reason, const std::string& input) {
    Json e;
    e["line"] = line;
    e["error"] = code;
    e["reason"] = reason;
    e["input"] = input;
    return e;
}

std::optional<std::vector<Field>> image_for(const std::vector<Message>& mapped, const std::string& entity, int version,
                                            bool present) {
    if (!present) return std::nullopt;
    for (const auto& m : mapped)
        if (m.schema_id == entity && m.version == version) return m.payload;
    return std::vector<Field>{};
}

LineResult process_envelope(const Json& j, const Mapper& mapper, std::uint64_t state) {
    const auto env = envelope_from_json(j, state);
    auto map_image = [&](const std::optional<std::vector<Field>>& image) {
        if (!image) return std::vector<Message>{};
        return mapper.map(Message{MessageSide::Incoming, env.schema_id, env.version, env.state, *image});
    };
    const auto before = map_image(env.before);
    const auto after = map_image(env.after);

    // targets in the mapper's order; before-only targets follow
    std::vector<std::pair<std::string, int>> targets;
    auto note = [&](const std::vector<Message>& ms) {
        for (const auto& m : ms) {
            std::pair<std::string, int> t{m.schema_id, m.version};
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
    };
    note(after);
    note(before);

    LineResult r;
    for (const auto& [entity, version] : targets) {
        OutgoingEnvelope o{entity, version, env.state, env.op,
                           image_for(before, entity, version, env.before.has_value()),
                           image_for(after, entity, version, env.after.has_value())};
        r.out += to_json(o).dump() + '\n';
        ++r.outputs;
    }
    return r;
}

LineResult process_line(std::size_t line_no, const std::string& line, const Mapper& mapper, std::uint64_t state) {
    LineResult r;
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::exception& ex) {
        r.error = error_entry(line_no, "malformed-json", ex.what(), line);
        return r;
    }
    try {
        if (!j.is_object()) throw Error(ErrorCode::Parse, "line is not a JSON object");
        if (is_envelope(j)) return process_envelope(j, mapper, state);
        const auto outputs = mapper.map(incoming_from_json(j, state));
        r.out = render_outputs(outputs);
        r.outputs = outputs.size();
    } catch (const Error& err) {
        r = LineResult{};
        r.error = error_entry(line_no, to_string(err.code()), err.what(), line);
    }
    return r;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

RunStats run_map(std::istream& in, std::ostream& out, std::ostream& errors, const Registry& registry,
                 const DenseSetDPM& dpm, const RunOptions& options) {
    if (dpm.registry_revision != registry.revision())
        throw Error(ErrorCode::StateMismatch, "dense set and registry disagree on the current state");
    Mapper mapper{options.mode, registry, nullptr, std::nullopt};
    if (options.mode == MapMode::Dense) {
        SnapshotPublisher publisher;
        mapper.snapshot = publisher.publish(dpm, registry);
    } else {
        mapper.matrix = decompact_dpm(dpm, registry);
    }

    RunStats stats;
    auto account = [&](const LineResult& r) {
        ++stats.inputs;
        if (r.error) {
            ++stats.errors;
            errors << r.error->dump() << '\n';
        } else if (r.outputs == 0) {
            ++stats.suppressed;
        } else {
            ++stats.mapped_sources;
            stats.outputs += r.outputs;
            out << r.out;
        }
    };

    std::string line;
    std::size_t line_no = 0;
    if (options.workers <= 1) {
        while (std::getline(in, line)) {
            ++line_no;
            if (blank(line)) continue;
            account(process_line(line_no, line, mapper, dpm.state));
        }
        return stats;
    }

    ThreadPool pool(options.workers);
    const std::size_t batch = std::max<std::size_t>(options.batch, 1);
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::vector<std::future<LineResult>> pending;
    bool more = true;
    while (more) {
        lines.clear();
        while (lines.size() < batch && (more = static_cast<bool>(std::getline(in, line)))) {
            ++line_no;
            if (!blank(line)) lines.emplace_back(line_no, line);
        }
        pending.clear();
        for (const auto& [n, text] : lines)
            pending.push_back(pool.submit([&, n = n, &text = text] { return process_line(n, text, mapper, dpm.state); }));
        for (auto& f : pending) account(f.get());
    }
    return stats;
}

}  // namespace dmm::pipeline
