#pragma once

#include <string>
#include <vector>

#include "arithdyn/io/serialize.hpp"

namespace arithdyn::io {

/// Validator for the JSON-Schema subset the published schemas use: type
/// (string or list), properties, required, additionalProperties (boolean or
/// schema), items, minItems, maxItems, enum, minimum, maximum, anyOf and
/// local "$ref": "#/definitions/<name>".
class SchemaValidator {
public:
    explicit SchemaValidator(Json root) : root_(std::move(root)) {}

    std::vector<std::string> errors(const Json& instance) const {
        std::vector<std::string> out;
        check(instance, root_, "$", out);
        return out;
    }
    /// Validates against root["definitions"][definition] instead of the root.
    std::vector<std::string> errors(const Json& instance, const std::string& definition) const {
        std::vector<std::string> out;
        check(instance, Json{{"$ref", "#/definitions/" + definition}}, "$", out);
        return out;
    }
    bool valid(const Json& instance) const { return errors(instance).empty(); }

private:
    static bool has_type(const Json& x, const std::string& t) {
        if (t == "object") return x.is_object();
        if (t == "array") return x.is_array();
        if (t == "string") return x.is_string();
        if (t == "integer") return x.is_number_integer();
        if (t == "number") return x.is_number();
        if (t == "boolean") return x.is_boolean();
        if (t == "null") return x.is_null();
        throw InvalidInput("schema uses unknown type '" + t + "'");
    }

    const Json& resolve(const Json& s) const {
        if (!s.is_object() || !s.contains("$ref")) return s;
        const std::string ref = s["$ref"].get<std::string>();
        const std::string prefix = "#/definitions/";
        if (ref.rfind(prefix, 0) != 0) throw InvalidInput("unsupported $ref '" + ref + "'");
        const Json& defs = root_.at("definitions");
        auto it = defs.find(ref.substr(prefix.size()));
        if (it == defs.end()) throw InvalidInput("dangling $ref '" + ref + "'");
        return resolve(*it);
    }

    void check(const Json& x, const Json& raw, const std::string& path, std::vector<std::string>& out) const {
        const Json& s = resolve(raw);
        if (s.is_boolean()) {
            if (!s.get<bool>()) out.push_back(path + ": not allowed");
            return;
        }
        if (s.contains("type")) {
            const Json& t = s["type"];
            bool ok = false;
            if (t.is_string()) ok = has_type(x, t.get<std::string>());
            else
                for (const auto& ti : t) ok = ok || has_type(x, ti.get<std::string>());
            if (!ok) {
                out.push_back(path + ": expected type " + t.dump());
                return;
            }
        }
        if (s.contains("enum")) {
            bool ok = false;
            for (const auto& v : s["enum"]) ok = ok || v == x;
            if (!ok) out.push_back(path + ": value " + x.dump() + " not in " + s["enum"].dump());
        }
        if (x.is_number()) {
            if (s.contains("minimum") && x.get<double>() < s["minimum"].get<double>())
                out.push_back(path + ": below minimum " + s["minimum"].dump());
            if (s.contains("maximum") && x.get<double>() > s["maximum"].get<double>())
                out.push_back(path + ": above maximum " + s["maximum"].dump());
        }
        if (s.contains("anyOf")) {
            bool ok = false;
            for (const auto& alt : s["anyOf"]) {
                std::vector<std::string> sub;
                check(x, alt, path, sub);
                ok = ok || sub.empty();
            }
            if (!ok) out.push_back(path + ": matches none of anyOf");
        }
        if (x.is_object()) {
            if (s.contains("required"))
                for (const auto& k : s["required"])
                    if (!x.contains(k.get<std::string>())) out.push_back(path + ": missing required key " + k.dump());
            const Json* props = s.contains("properties") ? &s["properties"] : nullptr;
            for (auto it = x.begin(); it != x.end(); ++it) {
                std::string sub = path + "." + it.key();
                if (props && props->contains(it.key())) {
                    check(it.value(), (*props)[it.key()], sub, out);
                } else if (s.contains("additionalProperties")) {
                    const Json& ap = s["additionalProperties"];
                    if (ap.is_boolean() && !ap.get<bool>()) out.push_back(sub + ": unknown key");
                    else if (ap.is_object()) check(it.value(), ap, sub, out);
                }
            }
        }
        if (x.is_array()) {
            if (s.contains("minItems") && x.size() < s["minItems"].get<std::size_t>())
                out.push_back(path + ": fewer than " + s["minItems"].dump() + " items");
            if (s.contains("maxItems") && x.size() > s["maxItems"].get<std::size_t>())
                out.push_back(path + ": more than " + s["maxItems"].dump() + " items");
            if (s.contains("items"))
                for (std::size_t i = 0; i < x.size(); ++i) check(x[i], s["items"], path + "[" + std::to_string(i) + "]", out);
        }
    }

    Json root_;
};

/// Throws InvalidInput listing every violation.
inline void validate_or_throw(const Json& instance, const Json& schema, const std::string& what) {
    auto errs = SchemaValidator(schema).errors(instance);
    if (errs.empty()) return;
    std::string msg = what + " fails schema validation:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw InvalidInput(msg);
}

} // namespace arithdyn::io
