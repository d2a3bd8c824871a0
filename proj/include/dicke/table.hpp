// table.hpp — tabular results with embedded metadata.  CSV output starts
// with a single `# meta:` comment carrying the resolved configuration, so
// every file is self-describing and re-runnable; JSON output carries the
// same content structurally.  Numbers are written with shortest
// round-trip formatting, making re-runs byte-comparable.

#pragma once

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace dicke::io {

using json = nlohmann::json;

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

struct ResultTable {
    std::string name;  // panel name, becomes part of the file name
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    json meta = json::object();

    void add_row(std::initializer_list<double> values) {
        if (values.size() != columns.size())
            throw std::invalid_argument("ResultTable: row width does not match columns");
        rows.emplace_back(values);
    }
    void add_row(std::vector<double> values) {
        if (values.size() != columns.size())
            throw std::invalid_argument("ResultTable: row width does not match columns");
        rows.push_back(std::move(values));
    }

    void write_csv(std::ostream& os) const {
        os << "# meta: " << meta.dump() << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << columns[c] << (c + 1 < columns.size() ? "," : "");
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
            os << "\n";
        }
    }

    void write_json(std::ostream& os) const {
        json j;
        j["meta"] = meta;
        j["columns"] = columns;
        j["rows"] = rows;
        os << j.dump(2) << "\n";
    }

    // Writes `<prefix>_<name>.<ext>` into `dir` and returns the path.
    std::string save(const std::string& dir, const std::string& prefix,
                     const std::string& format) const {
        if (format != "csv" && format != "json")
            throw std::invalid_argument("ResultTable: format must be csv or json");
        const std::string path = dir + "/" + prefix + "_" + name + "." + format;
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open output file: " + path);
        if (format == "csv") write_csv(os); else write_json(os);
        os.flush();
        if (!os) throw std::runtime_error("failed writing output file: " + path);
        return path;
    }
};

}  // namespace dicke::io
