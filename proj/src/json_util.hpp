#pragma once

// Internal helpers shared by the JSON config loaders. Every accessor throws
// ConfigError with the source name and field path on any schema violation.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qcs/util.hpp"

namespace qcs::jsonutil {

using nlohmann::json;

inline json parse(std::string_view text, std::string_view source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
}

inline json load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

inline const json& require(const json& obj, const char* field, std::string_view ctx) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(ctx) + ": expected an object");
    }
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw ConfigError(std::string(ctx) + ": missing field '" + field + "'");
    }
    return *it;
}

inline double as_number(const json& v, std::string_view ctx) {
    if (!v.is_number()) throw ConfigError(std::string(ctx) + ": expected a number");
    return v.get<double>();
}

inline long long as_int(const json& v, std::string_view ctx) {
    if (!v.is_number_integer()) throw ConfigError(std::string(ctx) + ": expected an integer");
    return v.get<long long>();
}

inline std::string as_string(const json& v, std::string_view ctx) {
    if (!v.is_string()) throw ConfigError(std::string(ctx) + ": expected a string");
    return v.get<std::string>();
}

inline bool as_bool(const json& v, std::string_view ctx) {
    if (!v.is_boolean()) throw ConfigError(std::string(ctx) + ": expected a boolean");
    return v.get<bool>();
}

inline double number_field(const json& obj, const char* field, std::string_view ctx) {
    return as_number(require(obj, field, ctx), std::string(ctx) + "." + field);
}

inline long long int_field(const json& obj, const char* field, std::string_view ctx) {
    return as_int(require(obj, field, ctx), std::string(ctx) + "." + field);
}

inline std::string string_field(const json& obj, const char* field, std::string_view ctx) {
    return as_string(require(obj, field, ctx), std::string(ctx) + "." + field);
}

}  // namespace qcs::jsonutil
