#include "riot/harness/ini.h"

#include <set>
#include <utility>

namespace riot::harness {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

std::vector<IniEntry> parse_ini(std::istream& in, const std::string& source) {
  std::vector<IniEntry> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    IniEntry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (e.key.empty()) throw ConfigError(where + "empty key");
    if (!seen.insert({e.section, e.key}).second) {
      throw ConfigError(where + "duplicate key '" + e.section + "." + e.key + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace riot::harness
