#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace copmix::cli {

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

// Numeric CSV with an optional single header row (detected when the first
// line does not parse as numbers). Every row must have the same width.
Eigen::MatrixXd read_csv(const std::string& path);
Eigen::MatrixXd parse_csv(const std::string& text);

std::string to_csv(const Eigen::MatrixXd& data, const std::vector<std::string>& header);

// Writes text to path, throwing DomainError if the file cannot be written.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

} // namespace copmix::cli
