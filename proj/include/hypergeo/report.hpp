#pragma once

// Tabular report documents with lossless CSV/JSON serialization.
//
// CSV uses '.' decimals, no locale, and 17 significant digits so doubles
// survive a text round trip bit-for-bit. Command, parameter echo and meta
// ride in '#'-prefixed prologue lines.

#include <charconv>
#include <cstdio>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "hypergeo/common.hpp"

namespace hypergeo {

using Cell = std::variant<int64_t, double, std::string>;

struct ReportDocument {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string cell_to_string(const Cell& c) {
    if (std::holds_alternative<int64_t>(c)) return std::to_string(std::get<int64_t>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline Cell retype(const std::string& s) {
    if (s.empty()) return s;
    {
        int64_t v{};
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size()) return v;
    }
    {
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size() && end != s.c_str()) return v;
    }
    return s;
}

}  // namespace detail

inline std::string to_csv(const ReportDocument& doc) {
    std::ostringstream os;
    os << "# command: " << doc.command << "\n";
    for (const auto& [k, v] : doc.params) os << "# param " << k << ": " << v << "\n";
    for (const auto& [k, v] : doc.meta) os << "# meta " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < doc.columns.size(); ++c)
        os << (c ? "," : "") << detail::csv_escape(doc.columns[c]);
    os << "\n";
    for (const auto& row : doc.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << detail::csv_escape(cell_to_string(row[c]));
        os << "\n";
    }
    return os.str();
}

inline ReportDocument parse_csv(const std::string& text) {
    ReportDocument doc;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            while (!body.empty() && body.front() == ' ') body.erase(body.begin());
            auto colon = body.find(": ");
            if (body.rfind("command", 0) == 0 && colon != std::string::npos) {
                doc.command = body.substr(colon + 2);
            } else if (body.rfind("param ", 0) == 0 && colon != std::string::npos) {
                doc.params.push_back({body.substr(6, colon - 6), body.substr(colon + 2)});
            } else if (body.rfind("meta ", 0) == 0 && colon != std::string::npos) {
                doc.meta.push_back({body.substr(5, colon - 5), body.substr(colon + 2)});
            }
            continue;
        }
        auto cells = detail::split_csv_line(line);
        if (!header_seen) {
            doc.columns = cells;
            header_seen = true;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(cells.size());
        for (const auto& s : cells) row.push_back(detail::retype(s));
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

inline std::string to_json(const ReportDocument& doc) {
    nlohmann::ordered_json j;
    j["command"] = doc.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : doc.params) params[k] = v;
    j["params"] = params;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : doc.meta) meta[k] = v;
    j["meta"] = meta;
    j["columns"] = doc.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& c : row) {
            if (std::holds_alternative<int64_t>(c)) r.push_back(std::get<int64_t>(c));
            else if (std::holds_alternative<double>(c)) r.push_back(std::get<double>(c));
            else r.push_back(std::get<std::string>(c));
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

}  // namespace hypergeo
