#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

namespace ftt::detail {

using nlohmann::json;

// Keys starting with an underscore (e.g. "_comment") are ignored everywhere.
inline bool is_comment_key(const std::string& key) {
    return !key.empty() && key.front() == '_';
}

template <class E>
json parse_json(const std::string& text, const std::string& what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw E(what + ": not valid JSON");
    }
    return doc;
}

template <class E>
void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw E(path + ": expected an object");
    }
}

template <class E>
void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (is_comment_key(key)) continue;
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw E(path + "." + key + ": unknown key");
        }
    }
}

template <class E>
const json& require_key(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw E(path + "." + key + ": missing required key");
    }
    return *it;
}

template <class E>
double require_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require_key<E>(obj, key, path);
    if (!v.is_number()) {
        throw E(path + "." + key + ": expected a number");
    }
    return v.get<double>();
}

template <class E>
double number_or(const json& obj, const char* key, double fallback,
                 const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) {
        throw E(path + "." + key + ": expected a number");
    }
    return it->get<double>();
}

template <class E>
std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require_key<E>(obj, key, path);
    if (!v.is_string()) {
        throw E(path + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

template <class E>
std::string string_or(const json& obj, const char* key, const std::string& fallback,
                      const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_string()) {
        throw E(path + "." + key + ": expected a string");
    }
    return it->get<std::string>();
}

template <class E>
bool bool_or(const json& obj, const char* key, bool fallback, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) {
        throw E(path + "." + key + ": expected a boolean");
    }
    return it->get<bool>();
}

template <class E>
void check_format_version(const json& obj, int expected, const std::string& path) {
    double v = require_number<E>(obj, "format_version", path);
    if (static_cast<int>(v) != expected) {
        throw E(path + ".format_version: unsupported version " + std::to_string(v));
    }
}

std::string read_text_file(const std::string& path);  // throws DataError

}  // namespace ftt::detail
