#include "riot/harness/interaction.h"

#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "riot/harness/ini.h"

namespace riot::harness {

namespace {
double number(const std::string& s, const std::string& spec) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("bad number '" + s + "' in interaction '" + spec + "'");
  return v;
}
}  // namespace

opt::InteractionModel parse_interaction(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("interaction must be constant:, schedule: or ewma:, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "constant") return opt::InteractionModel::constant(number(rest, spec));
    if (kind == "ewma") {
      const auto c = rest.find(':');
      if (c == std::string::npos) throw ConfigError("ewma interaction needs <lambda>:<initial>");
      return opt::InteractionModel::ewma(number(rest.substr(0, c), spec), number(rest.substr(c + 1), spec));
    }
    if (kind == "schedule") {
      std::vector<opt::InteractionModel::Window> windows;
      std::istringstream in(rest);
      std::string item;
      while (std::getline(in, item, ';')) {
        const auto dash = item.find('-');
        const auto c = item.find(':');
        if (dash == std::string::npos || c == std::string::npos || c < dash)
          throw ConfigError("schedule window must be <start>-<end>:<p>, got '" + item + "'");
        windows.push_back({number(item.substr(0, dash), spec), number(item.substr(dash + 1, c - dash - 1), spec),
                           number(item.substr(c + 1), spec)});
      }
      if (windows.empty()) throw ConfigError("schedule interaction needs at least one window");
      return opt::InteractionModel::schedule(std::move(windows));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("interaction '") + spec + "': " + e.what());
  }
  throw ConfigError("unknown interaction source '" + kind + "'");
}

}  // namespace riot::harness
