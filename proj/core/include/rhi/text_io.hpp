#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

// Helpers shared by the line-oriented text formats (streams, models, configs).
namespace rhi::text {

// Shortest representation that parses back to the identical double.
std::string format_double(double v);
double parse_double(const std::string& s);
long long parse_int(const std::string& s);

std::vector<std::string> split_ws(const std::string& line);
std::string trim(const std::string& s);

// Reads the next whitespace token or throws a data error naming `what`.
std::string expect_token(std::istream& is, const std::string& what);
void expect_keyword(std::istream& is, const std::string& keyword);
double read_double(std::istream& is, const std::string& what);
long long read_int(std::istream& is, const std::string& what);

void write_doubles(std::ostream& os, std::span<const double> values);
std::vector<double> read_doubles(std::istream& is, std::size_t count, const std::string& what);

}  // namespace rhi::text
