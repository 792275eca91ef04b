#include "csv_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "copmix/errors.hpp"

namespace copmix::cli {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw DomainError("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto end = comma == std::string::npos ? line.size() : comma;
        std::size_t b = start;
        std::size_t e = end;
        while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
        while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data() + b, line.data() + e, v);
        if (b == e || ec != std::errc() || ptr != line.data() + e) return false;
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return true;
}

} // namespace

Eigen::MatrixXd parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    std::vector<double> row;
    int lineno = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!parse_row(line, row)) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw DomainError("CSV line " + std::to_string(lineno) + ": malformed numeric row");
        }
        header_allowed = false;
        for (double v : row) {
            if (!std::isfinite(v)) throw DomainError("CSV line " + std::to_string(lineno) + ": non-finite value");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DomainError("CSV line " + std::to_string(lineno) + ": expected " +
                              std::to_string(rows.front().size()) + " columns");
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw DomainError("CSV: no data rows");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

Eigen::MatrixXd read_csv(const std::string& path) { return parse_csv(read_text(path)); }

std::string to_csv(const Eigen::MatrixXd& data, const std::vector<std::string>& header) {
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out += ',';
        out += header[j];
    }
    if (!header.empty()) out += '\n';
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            if (j) out += ',';
            out += format_double(data(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw DomainError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace copmix::cli
