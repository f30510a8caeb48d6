#include <algorithm>
#include <charconv>
#include <nlohmann/json.hpp>

#include "chiron/bn/network.hpp"
#include "chiron/error.hpp"

namespace chiron::bn {

using nlohmann::json;

namespace {

[[noreturn]] void shape_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::Syntax, "syntax error at " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) shape_error(where, std::string("missing key '") + key + "'");
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) shape_error(where + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> require_string_array(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_array()) shape_error(where + "." + key, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) shape_error(where + "." + key + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

std::string format_probability(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string string_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += quoted(items[i]);
    }
    return out + "]";
}

}  // namespace

NetworkSpec parse_network_unchecked(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Syntax, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) shape_error("top level", "expected an object");

    NetworkSpec spec;
    spec.name = require_string(doc, "name", "top level");
    spec.version = require_string(doc, "version", "top level");
    const json& nodes = require(doc, "nodes", "top level");
    if (!nodes.is_array()) shape_error("nodes", "expected an array");

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "]";
        const json& n = nodes[i];
        if (!n.is_object()) shape_error(where, "expected an object");
        NodeSpec node;
        node.name = require_string(n, "name", where);
        node.states = require_string_array(n, "states", where);
        node.parents = require_string_array(n, "parents", where);
        const json& cpt = require(n, "cpt", where);
        if (!cpt.is_array()) shape_error(where + ".cpt", "expected an array of rows");
        for (std::size_t r = 0; r < cpt.size(); ++r) {
            const std::string row_where = where + ".cpt[" + std::to_string(r) + "]";
            if (!cpt[r].is_array()) shape_error(row_where, "expected an array of numbers");
            std::vector<double> row;
            for (const auto& v : cpt[r]) {
                if (!v.is_number()) shape_error(row_where, "expected a number");
                row.push_back(v.get<double>());
            }
            node.cpt.rows.push_back(std::move(row));
        }
        spec.nodes.push_back(std::move(node));
    }
    return spec;
}

NetworkSpec parse_network(std::string_view text) {
    NetworkSpec spec = parse_network_unchecked(text);
    ValidationReport report = validate_network(spec);
    if (report.empty()) return spec;

    auto has = [&](ViolationKind k) {
        return std::any_of(report.begin(), report.end(), [k](const Violation& v) { return v.kind == k; });
    };
    ErrorCode code = ErrorCode::InvalidNetwork;
    if (has(ViolationKind::DuplicateNode)) {
        code = ErrorCode::DuplicateNode;
    } else if (has(ViolationKind::UnknownParent)) {
        code = ErrorCode::UnknownReference;
    } else if (has(ViolationKind::RowSum)) {
        code = ErrorCode::Normalization;
    }
    std::string message;
    for (const auto& v : report) {
        if (!message.empty()) message += "; ";
        message += v.message;
    }
    throw Error(code, message);
}

std::string serialize_network(const NetworkSpec& spec) {
    std::string out;
    out += "{\n";
    out += "  \"name\": " + quoted(spec.name) + ",\n";
    out += "  \"version\": " + quoted(spec.version) + ",\n";
    out += "  \"nodes\": [";
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const auto& node = spec.nodes[i];
        out += i ? ",\n" : "\n";
        out += "    {\n";
        out += "      \"name\": " + quoted(node.name) + ",\n";
        out += "      \"states\": " + string_array(node.states) + ",\n";
        out += "      \"parents\": " + string_array(node.parents) + ",\n";
        out += "      \"cpt\": [";
        for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
            out += r ? ",\n" : "\n";
            out += "        [";
            const auto& row = node.cpt.rows[r];
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ", ";
                out += format_probability(row[c]);
            }
            out += "]";
        }
        out += node.cpt.rows.empty() ? "]\n" : "\n      ]\n";
        out += "    }";
    }
    out += spec.nodes.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

}  // namespace chiron::bn
