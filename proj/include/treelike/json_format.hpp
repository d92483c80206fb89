#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace treelike {

using Json = nlohmann::ordered_json;

namespace detail {

inline void emit_json(const Json& j, std::string& out, int indent, int depth)
{
    const auto newline = [&](int level) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent * level), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += Json(it.key()).dump();
            out += ": ";
            emit_json(it.value(), out, indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            emit_json(v, out, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

} // namespace detail

/// Serialises with insertion-ordered keys and every real printed with 17
/// significant digits, so doubles survive a parse round trip bit for bit.
inline std::string dump_json(const Json& j, int indent = 2)
{
    std::string out;
    detail::emit_json(j, out, indent, 0);
    out += '\n';
    return out;
}

} // namespace treelike
