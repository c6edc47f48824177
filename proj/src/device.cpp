#include "qcs/device.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "json_util.hpp"
#include "qcs/util.hpp"

namespace qcs {

bool CouplingGraph::is_connected() const {
    if (num_vertices <= 1) return true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_vertices));
    for (const auto& [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<char> seen(static_cast<std::size_t>(num_vertices), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int next : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(next)]) {
                seen[static_cast<std::size_t>(next)] = 1;
                ++visited;
                stack.push_back(next);
            }
        }
    }
    return visited == num_vertices;
}

namespace {

double mean(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

void check_unit_interval(const std::vector<double>& values, const std::string& field,
                         std::string_view ctx) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
            throw ConfigError(std::string(ctx) + ": " + field + "[" + std::to_string(i) +
                              "] = " + format_double(values[i]) + " outside [0, 1]");
        }
    }
}

}  // namespace

double error_score(const CalibrationData& cal, const ErrorScoreWeights& w) {
    if (cal.readout_errors.empty()) {
        throw ConfigError("error_score: readout_errors is empty");
    }
    if (cal.two_qubit_errors.empty()) {
        throw ConfigError("error_score: two_qubit_errors is empty");
    }
    return w.alpha * mean(cal.readout_errors) + w.theta * cal.single_qubit_error +
           w.gamma * mean(cal.two_qubit_errors);
}

void validate_profile(const DeviceProfile& p) {
    const std::string ctx = "device '" + p.name + "'";
    if (!valid_identifier(p.name)) {
        throw ConfigError("device profile: name '" + p.name +
                          "' must be non-empty and use only [A-Za-z0-9_.-]");
    }
    if (p.capacity < 1) throw ConfigError(ctx + ": capacity must be >= 1");
    if (!(p.clops > 0)) throw ConfigError(ctx + ": clops must be positive");
    if (p.quantum_volume < 2) throw ConfigError(ctx + ": quantum_volume must be >= 2");
    if (p.coupling.num_vertices != p.capacity) {
        throw ConfigError(ctx + ": coupling graph has " +
                          std::to_string(p.coupling.num_vertices) + " vertices, capacity is " +
                          std::to_string(p.capacity));
    }
    for (std::size_t i = 0; i < p.coupling.edges.size(); ++i) {
        const auto& [a, b] = p.coupling.edges[i];
        if (a < 0 || a >= p.capacity || b < 0 || b >= p.capacity) {
            throw ConfigError(ctx + ": coupling_edges[" + std::to_string(i) + "] = (" +
                              std::to_string(a) + ", " + std::to_string(b) +
                              ") references a nonexistent vertex");
        }
    }
    if (!p.coupling.is_connected()) {
        throw ConfigError(ctx + ": coupling_edges do not form a connected graph");
    }
    if (p.calibration.readout_errors.size() != static_cast<std::size_t>(p.capacity)) {
        throw ConfigError(ctx + ": calibration.readout_errors has " +
                          std::to_string(p.calibration.readout_errors.size()) +
                          " entries, expected capacity " + std::to_string(p.capacity));
    }
    if (p.calibration.two_qubit_errors.size() != p.coupling.edges.size()) {
        throw ConfigError(ctx + ": calibration.two_qubit_errors has " +
                          std::to_string(p.calibration.two_qubit_errors.size()) +
                          " entries, expected one per edge (" +
                          std::to_string(p.coupling.edges.size()) + ")");
    }
    check_unit_interval(p.calibration.readout_errors, "calibration.readout_errors", ctx);
    check_unit_interval(p.calibration.two_qubit_errors, "calibration.two_qubit_errors", ctx);
    if (!(p.calibration.single_qubit_error >= 0.0 && p.calibration.single_qubit_error <= 1.0)) {
        throw ConfigError(ctx + ": calibration.single_qubit_error outside [0, 1]");
    }
}

namespace {

DeviceProfile profile_from_json(const jsonutil::json& doc, std::string_view source) {
    using namespace jsonutil;
    DeviceProfile p;
    p.name = string_field(doc, "name", source);
    p.capacity = static_cast<int>(int_field(doc, "capacity", source));
    p.clops = number_field(doc, "clops", source);
    p.quantum_volume = static_cast<int>(int_field(doc, "quantum_volume", source));
    p.coupling.num_vertices = p.capacity;

    const json& edges = require(doc, "coupling_edges", source);
    const std::string edges_ctx = std::string(source) + ".coupling_edges";
    if (!edges.is_array()) throw ConfigError(edges_ctx + ": expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const json& e = edges[i];
        const std::string ctx = edges_ctx + "[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2) {
            throw ConfigError(ctx + ": expected a [from, to] pair");
        }
        p.coupling.edges.emplace_back(static_cast<int>(as_int(e[0], ctx)),
                                      static_cast<int>(as_int(e[1], ctx)));
    }

    const json& cal = require(doc, "calibration", source);
    const std::string cal_ctx = std::string(source) + ".calibration";
    auto read_list = [&](const char* field) {
        const json& arr = require(cal, field, cal_ctx);
        const std::string ctx = cal_ctx + "." + field;
        if (!arr.is_array()) throw ConfigError(ctx + ": expected an array");
        std::vector<double> out;
        out.reserve(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) {
            out.push_back(as_number(arr[i], ctx + "[" + std::to_string(i) + "]"));
        }
        return out;
    };
    p.calibration.readout_errors = read_list("readout_errors");
    p.calibration.single_qubit_error = number_field(cal, "single_qubit_error", cal_ctx);
    p.calibration.two_qubit_errors = read_list("two_qubit_errors");

    validate_profile(p);
    return p;
}

}  // namespace

DeviceProfile parse_device_profile(std::string_view json_text, std::string_view source) {
    return profile_from_json(jsonutil::parse(json_text, source), source);
}

DeviceProfile load_device_profile_file(const std::filesystem::path& path) {
    return profile_from_json(jsonutil::load_file(path), path.string());
}

QDevice::QDevice(SimEnv& env, DeviceProfile profile, const ErrorScoreWeights& weights)
    : profile_(std::move(profile)),
      store_(env, (validate_profile(profile_), profile_.capacity)) {
    error_score_ = qcs::error_score(profile_.calibration, weights);
    means_.single_qubit_error = profile_.calibration.single_qubit_error;
    means_.two_qubit_error = mean(profile_.calibration.two_qubit_errors);
    means_.readout_error = mean(profile_.calibration.readout_errors);
}

}  // namespace qcs
