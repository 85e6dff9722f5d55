#include "rhi/text_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rhi/error.hpp"

namespace rhi::text {

std::string format_double(double v) {
  if (!std::isfinite(v)) ThrowInvariant("refusing to serialise a non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) ThrowData("invalid number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) ThrowData("invalid integer '" + s + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string expect_token(std::istream& is, const std::string& what) {
  std::string tok;
  if (!(is >> tok)) ThrowData("unexpected end of input while reading " + what);
  return tok;
}

void expect_keyword(std::istream& is, const std::string& keyword) {
  const std::string tok = expect_token(is, keyword);
  if (tok != keyword) ThrowData("expected '" + keyword + "' but found '" + tok + "'");
}

double read_double(std::istream& is, const std::string& what) { return parse_double(expect_token(is, what)); }

long long read_int(std::istream& is, const std::string& what) { return parse_int(expect_token(is, what)); }

void write_doubles(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ' ';
    os << format_double(values[i]);
  }
}

std::vector<double> read_doubles(std::istream& is, std::size_t count, const std::string& what) {
  std::vector<double> out(count);
  for (auto& v : out) v = read_double(is, what);
  return out;
}

}  // namespace rhi::text
