#ifndef RIOT_HARNESS_INTERACTION_H
#define RIOT_HARNESS_INTERACTION_H

#include <string>

#include "riot/optimizer/predictors.h"

namespace riot::harness {

/**
 * Builds an interaction source from its config spelling:
 *   constant:<p>
 *   schedule:<start>-<end>:<p>;<start>-<end>:<p>...   (end may be "inf")
 *   ewma:<lambda>:<initial>
 * Throws ConfigError on malformed input.
 */
opt::InteractionModel parse_interaction(const std::string& spec);

}  // namespace riot::harness

#endif  // RIOT_HARNESS_INTERACTION_H
