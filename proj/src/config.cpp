#include "coarse/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace coarse {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": '" + text + "' is not an integer");
  }
}

TomlValue parse_value(const std::string& text, const std::string& where) {
  if (text.empty()) throw ConfigError(where + ": empty value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') {
      throw ConfigError(where + ": unterminated string");
    }
    return text.substr(1, text.size() - 2);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') throw ConfigError(where + ": unterminated array");
    std::vector<std::int64_t> items;
    std::string inner = text.substr(1, text.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      items.push_back(parse_int(item, where));
    }
    return items;
  }
  return parse_int(text, where);
}

}  // namespace

std::map<std::string, TomlValue> parse_toml_subset(const std::string& text,
                                                   const std::string& origin) {
  std::map<std::string, TomlValue> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside strings
    bool in_string = false;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (line[c] == '"') in_string = !in_string;
      if (line[c] == '#' && !in_string) {
        line = line.substr(0, c);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = parse_value(value, where);
  }
  return out;
}

namespace {

const std::set<std::string> kKnownKeys = {"space", "levels", "cross",  "kind", "lambda",
                                          "basepoint", "width", "branching", "seed",
                                          "dim", "box", "scale"};

std::int64_t get_int(const std::map<std::string, TomlValue>& kv, const std::string& key,
                     std::int64_t fallback, const std::string& origin) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (!std::holds_alternative<std::int64_t>(it->second)) {
    throw ConfigError(origin + ": '" + key + "' must be an integer");
  }
  return std::get<std::int64_t>(it->second);
}

std::string get_string(const std::map<std::string, TomlValue>& kv, const std::string& key,
                       const std::string& origin) {
  auto it = kv.find(key);
  if (it == kv.end() || !std::holds_alternative<std::string>(it->second)) {
    throw ConfigError(origin + ": '" + key + "' must be a string");
  }
  return std::get<std::string>(it->second);
}

}  // namespace

FamilyConfig parse_family_config(const std::string& text, const std::string& origin) {
  const auto kv = parse_toml_subset(text, origin);
  for (const auto& [key, value] : kv) {
    if (!kKnownKeys.count(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
  }

  FamilyConfig cfg;
  cfg.space.kind = parse_space_kind(get_string(kv, "space", origin));
  cfg.space.width = static_cast<int>(get_int(kv, "width", cfg.space.width, origin));
  cfg.space.branching = static_cast<int>(get_int(kv, "branching", cfg.space.branching, origin));
  cfg.space.seed = static_cast<std::uint64_t>(get_int(kv, "seed", 1, origin));
  cfg.space.dim = static_cast<int>(get_int(kv, "dim", cfg.space.dim, origin));
  cfg.space.box = get_int(kv, "box", cfg.space.box, origin);
  cfg.space.scale = get_int(kv, "scale", cfg.space.scale, origin);

  auto levels_it = kv.find("levels");
  if (levels_it == kv.end() ||
      !std::holds_alternative<std::vector<std::int64_t>>(levels_it->second)) {
    throw ConfigError(origin + ": 'levels' must be an array of integers");
  }
  for (std::int64_t n : std::get<std::vector<std::int64_t>>(levels_it->second)) {
    if (n < 1 || n > (1 << 20)) throw ConfigError(origin + ": level size out of range");
    cfg.levels.push_back(static_cast<int>(n));
  }
  if (cfg.levels.size() < 4) {
    throw ConfigError(origin + ": ladders need at least 4 levels");
  }
  for (std::size_t l = 1; l < cfg.levels.size(); ++l) {
    if (cfg.levels[l] <= cfg.levels[l - 1]) {
      throw ConfigError(origin + ": level sizes must be strictly increasing");
    }
  }

  const bool has_cross = kv.count("cross") > 0;
  const bool has_kind = kv.count("kind") > 0;
  if (has_cross == has_kind) {
    throw ConfigError(origin + ": give exactly one of 'cross' (a formula) or 'kind'");
  }
  if (has_cross) {
    cfg.rule.kind = CatalogKind::Dsl;
    cfg.rule.text = get_string(kv, "cross", origin);
    try {
      cfg.rule.params.expr = parse_cross_expr(cfg.rule.text);
    } catch (const DslParseError& e) {
      throw ConfigError(origin + ": cross formula: " + e.what());
    }
  } else {
    cfg.rule.kind = parse_catalog_kind(get_string(kv, "kind", origin));
    if (cfg.rule.kind == CatalogKind::Shift) {
      throw ConfigError(origin + ": shift rules are per-level maps; use a dsl cross formula");
    }
    cfg.rule.params.lambda = get_int(kv, "lambda", 1, origin);
    cfg.rule.params.basepoint = static_cast<int>(get_int(kv, "basepoint", 0, origin));
  }
  return cfg;
}

FamilyConfig load_family_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_family_config(buffer.str(), path);
}

Ladder FamilyConfig::ladder() const { return make_ladder(space, levels); }

MetricFamily build_family(const FamilyConfig& cfg) { return make_family(cfg.ladder(), cfg.rule); }

Json config_to_json(const FamilyConfig& cfg) {
  Json j;
  j["space"] = to_string(cfg.space.kind);
  switch (cfg.space.kind) {
    case SpaceKind::Grid:
      j["width"] = cfg.space.width;
      break;
    case SpaceKind::Tree:
      j["branching"] = cfg.space.branching;
      break;
    case SpaceKind::Random:
      j["seed"] = cfg.space.seed;
      j["dim"] = cfg.space.dim;
      j["box"] = cfg.space.box;
      j["scale"] = cfg.space.scale;
      break;
    default:
      break;
  }
  j["levels"] = cfg.levels;
  j["rule"] = describe_rule(cfg.rule);
  return j;
}

}  // namespace coarse
