#include "ppp/io.hpp"

#include <fstream>

namespace ppp {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Instance parse_instance(std::istream& in) {
  std::vector<BigInt> entries;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (lineno == 1 && raw.rfind("\xef\xbb\xbf", 0) == 0) {
      raw.erase(0, 3);  // UTF-8 BOM
    }
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    for (char ch : line) {
      if (ch < '0' || ch > '9') {
        throw ParseError(lineno, "'" + line + "' is not a decimal integer");
      }
    }
    BigInt v(line, 10);
    if (v < 1) throw ParseError(lineno, "entry must be >= 1");
    entries.push_back(std::move(v));
  }
  if (entries.empty()) {
    throw ParseError(lineno ? lineno : 1, "instance file has no entries");
  }
  return Instance::from_entries(std::move(entries));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file: " + path);
  return parse_instance(f);
}

}  // namespace ppp
