#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qpt/errors.hpp"

// Comma-separated numeric tables: one header row naming the columns, then
// rectangular rows of finite doubles printed with 12 significant digits.
// The fixed rendering makes emitted files byte-stable across runs and lets
// them re-parse to exactly the doubles the 12-digit text denotes.

namespace qpt {

// Shortest %.12g rendering of a finite value ("." decimal point, no locale).
inline std::string format_sig12(double v) {
    if (!std::isfinite(v)) throw ValidationError("csv: values must be finite");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline void validate_table(const CsvTable& table) {
    if (table.header.empty()) throw ValidationError("csv: header must not be empty");
    for (const std::string& name : table.header) {
        if (name.empty()) throw ValidationError("csv: header names must not be empty");
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos)
            throw ValidationError("csv: header name \"" + name + "\" contains a separator");
    }
    for (const std::vector<double>& row : table.rows)
        if (row.size() != table.header.size())
            throw ValidationError("csv: every row must match the header width");
}

inline std::string to_text(const CsvTable& table) {
    validate_table(table);
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const std::vector<double>& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_sig12(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_number(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || static_cast<std::size_t>(end - begin) != field.size())
        throw ValidationError("csv: line " + std::to_string(line_no) + ": \"" + field +
                              "\" is not a number");
    if (!std::isfinite(v))
        throw ValidationError("csv: line " + std::to_string(line_no) + ": value is not finite");
    return v;
}

} // namespace detail

inline CsvTable parse_csv(const std::string& text) {
    if (text.empty()) throw ValidationError("csv: empty input");
    CsvTable table;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        std::size_t newline = text.find('\n', start);
        if (newline == std::string::npos) newline = text.size();
        const std::string line = text.substr(start, newline - start);
        start = newline + 1;
        ++line_no;
        if (line_no == 1) {
            table.header = detail::split_fields(line);
        } else {
            const std::vector<std::string> fields = detail::split_fields(line);
            std::vector<double> row(fields.size());
            for (std::size_t i = 0; i < fields.size(); ++i)
                row[i] = detail::parse_number(fields[i], line_no);
            table.rows.push_back(std::move(row));
        }
    }
    validate_table(table);
    return table;
}

inline void write_csv(const std::string& path, const CsvTable& table) {
    const std::string text = to_text(table);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("csv: cannot open " + path + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("csv: write to " + path + " failed");
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("csv: cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("csv: read from " + path + " failed");
    return parse_csv(buf.str());
}

} // namespace qpt
