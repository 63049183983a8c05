#pragma once

// CSV input/output for sample sets and experiment tables.  Numbers are
// written with 17 significant digits so round-trips are lossless; files
// are written to a temp path and renamed, so failures leave no partial
// output behind.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacreg/estimator.hpp"
#include "jacreg/matrix.hpp"
#include "jacreg/sampling.hpp"

namespace jacreg {

inline void atomic_write_text(const std::string& path,
                              const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

// Header x1,...,xd[,y]; one row per point.
inline void write_sample_csv(const SampleSet& s, const std::string& path) {
    std::ostringstream out;
    for (int j = 1; j <= s.d(); ++j) {
        if (j > 1) out << ",";
        out << "x" << j;
    }
    if (s.y) out << ",y";
    out << "\n";
    for (std::size_t i = 0; i < s.n(); ++i) {
        for (int j = 0; j < s.d(); ++j) {
            if (j > 0) out << ",";
            out << detail::format_g17(s.x(i, j));
        }
        if (s.y) out << "," << detail::format_g17((*s.y)[i]);
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

inline SampleSet read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error(path + ": empty file");

    std::vector<std::string> cols;
    {
        std::istringstream ss(header);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    bool has_y = !cols.empty() && cols.back() == "y";
    const int d = static_cast<int>(cols.size()) - (has_y ? 1 : 0);
    if (d < 1) throw std::runtime_error(path + ": no coordinate columns");
    for (int j = 0; j < d; ++j)
        if (cols[j] != "x" + std::to_string(j + 1))
            throw std::runtime_error(path + ": unexpected column '" + cols[j] +
                                     "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<double> row;
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(tok, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": bad number '" + tok + "'");
            }
            if (pos != tok.size())
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": bad number '" + tok + "'");
            row.push_back(v);
        }
        if (static_cast<int>(row.size()) != d + (has_y ? 1 : 0))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": wrong column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");

    SampleSet s;
    s.x = Matrix(rows.size(), d);
    if (has_y) s.y = std::vector<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < d; ++j) s.x(i, j) = rows[i][j];
        if (has_y) (*s.y)[i] = rows[i][d];
    }
    return s;
}

// Generic table writer: header plus rows of preformatted cells.
inline void write_table_csv(const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows,
                            const std::string& path) {
    std::ostringstream out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j > 0) out << ",";
        out << header[j];
    }
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_table_csv: ragged row");
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) out << ",";
            out << row[j];
        }
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

}  // namespace jacreg
