#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "coarse/family.hpp"
#include "coarse/json_io.hpp"

namespace coarse {

// Strict TOML subset for experiment configs: flat `key = value` lines where a
// value is an integer, a "string", true/false, or an array of integers.
// Comments start with '#'. Unknown keys are rejected.
using TomlValue = std::variant<std::int64_t, std::string, bool, std::vector<std::int64_t>>;
std::map<std::string, TomlValue> parse_toml_subset(const std::string& text,
                                                   const std::string& origin);

// One metric family over one ladder:
//   space = "halfline" | "line" | "grid" | "tree" | "random"
//   levels = [16, 32, 64, 128, 256]         (strictly increasing, >= 4 levels)
//   cross = "abs(x0-y0)+min(x0,y0)+1"       (DSL rule), or
//   kind = "lambda" | "focused"  with  lambda = 1, basepoint = 0
//   space params: width, branching, seed, dim, box, scale
struct FamilyConfig {
  SpaceSpec space;
  std::vector<int> levels;
  FamilyRule rule;

  Ladder ladder() const;
};

FamilyConfig parse_family_config(const std::string& text, const std::string& origin);
FamilyConfig load_family_config(const std::string& path);
MetricFamily build_family(const FamilyConfig& cfg);

// Canonical form used for hashing and report provenance.
Json config_to_json(const FamilyConfig& cfg);

}  // namespace coarse
