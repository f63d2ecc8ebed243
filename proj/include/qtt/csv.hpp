// csv.hpp — Deterministic CSV emission (fixed columns, 17 significant digits)

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtt {

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

class CsvRow {
public:
    CsvRow& operator<<(double x) { return add(format_double(x)); }
    CsvRow& operator<<(int x) { return add(std::to_string(x)); }
    CsvRow& operator<<(std::size_t x) { return add(std::to_string(x)); }
    CsvRow& operator<<(bool x) { return add(x ? "1" : "0"); }
    CsvRow& operator<<(const std::string& s) { return add(csv_escape(s)); }
    CsvRow& operator<<(const char* s) { return add(csv_escape(s)); }

    const std::vector<std::string>& cells() const { return cells_; }

private:
    CsvRow& add(std::string s) {
        cells_.push_back(std::move(s));
        return *this;
    }
    std::vector<std::string> cells_;
};

// Writes a header immediately and rows as they arrive; every row must match the header width.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns) : out_(out), columns_(std::move(columns)) {
        write_cells(columns_);
    }

    void write(const CsvRow& row) {
        if (row.cells().size() != columns_.size())
            throw std::logic_error("csv row has " + std::to_string(row.cells().size()) + " cells, header has " +
                                   std::to_string(columns_.size()));
        write_cells(row.cells());
    }

    // Marker row: every value column "nan", last column (status) carries the message.
    void write_failure(const std::string& message) {
        std::vector<std::string> cells(columns_.size(), "nan");
        cells.back() = csv_escape("FAILED: " + message);
        write_cells(cells);
    }

    const std::vector<std::string>& columns() const { return columns_; }

private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
        out_.flush();
    }

    std::ostream& out_;
    std::vector<std::string> columns_;
};

} // namespace qtt
