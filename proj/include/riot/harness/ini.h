#ifndef RIOT_HARNESS_INI_H
#define RIOT_HARNESS_INI_H

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace riot::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/**
 * Sectioned key = value text. '#' or ';' start a comment line. Keys outside
 * any section land in section "". Duplicate keys are an error.
 */
std::vector<IniEntry> parse_ini(std::istream& in, const std::string& source);

}  // namespace riot::harness

#endif  // RIOT_HARNESS_INI_H
