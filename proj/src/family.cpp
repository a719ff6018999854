#include "coarse/family.hpp"

#include <sstream>

namespace coarse {

Ladder make_ladder(SpaceSpec space, std::vector<int> level_sizes) {
  if (level_sizes.empty()) throw InvalidInputError("ladder needs at least one level");
  for (std::size_t l = 0; l < level_sizes.size(); ++l) {
    if (level_sizes[l] < 1) throw InvalidInputError("ladder level sizes must be >= 1");
    if (l > 0 && level_sizes[l] <= level_sizes[l - 1]) {
      throw InvalidInputError("ladder level sizes must be strictly increasing");
    }
  }
  return Ladder{space, std::move(level_sizes)};
}

std::vector<std::shared_ptr<const FiniteMetric>> realize_ladder(const Ladder& ladder) {
  std::vector<std::shared_ptr<const FiniteMetric>> out;
  out.reserve(ladder.level_sizes.size());
  for (int n : ladder.level_sizes) {
    out.push_back(std::make_shared<const FiniteMetric>(generate_space(ladder.space, n)));
  }
  return out;
}

std::string describe_rule(const FamilyRule& rule) {
  std::ostringstream os;
  switch (rule.kind) {
    case CatalogKind::Lambda:
      os << "lambda(" << rule.params.lambda << ")";
      break;
    case CatalogKind::Focused:
      os << "focused(p=" << rule.params.basepoint << ",lambda=" << rule.params.lambda << ")";
      break;
    case CatalogKind::Dsl:
      os << "dsl(" << (rule.text.empty() && rule.params.expr ? print_expr(*rule.params.expr)
                                                             : rule.text)
         << ")";
      break;
    case CatalogKind::Shift:
      os << "shift";
      break;
  }
  return os.str();
}

namespace {

// Rule-built families must restrict exactly: level l is the leading block of
// level l+1, for bases and crosses alike.
void check_coherence(const MetricFamily& f) {
  for (std::size_t l = 0; l + 1 < f.levels.size(); ++l) {
    const auto& lo = f.levels[l];
    const auto& hi = f.levels[l + 1];
    const int n = lo.n();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (lo.base->at(i, j) != hi.base->at(i, j)) {
          throw InternalError("ladder bases are not prefix-coherent at level " +
                              std::to_string(l));
        }
        if (lo.cross_at(i, j) != hi.cross_at(i, j)) {
          throw InternalError("family '" + f.rule + "' is not restriction-coherent at level " +
                              std::to_string(l) + " pair (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
        }
      }
    }
  }
}

// Derived families may only shrink as junction choices appear.
void check_monotone(const MetricFamily& f) {
  for (std::size_t l = 0; l + 1 < f.levels.size(); ++l) {
    const auto& lo = f.levels[l];
    const auto& hi = f.levels[l + 1];
    const int n = lo.n();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (hi.cross_at(i, j) > lo.cross_at(i, j)) {
          throw InternalError("derived family '" + f.rule +
                              "' grew between levels at pair (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
        }
      }
    }
  }
}

void check_same_ladder(const MetricFamily& f, const MetricFamily& g, const char* op) {
  if (!(f.ladder == g.ladder)) {
    throw IncompatibleOperandsError(std::string(op) + ": families live over different ladders");
  }
}

}  // namespace

MetricFamily make_family(const Ladder& ladder, const FamilyRule& rule) {
  return make_family(ladder, rule, realize_ladder(ladder));
}

MetricFamily make_family(const Ladder& ladder, const FamilyRule& rule,
                         const std::vector<std::shared_ptr<const FiniteMetric>>& bases) {
  if (rule.kind == CatalogKind::Shift) {
    throw InvalidInputError(
        "shift rules are per-level index maps and cannot be restriction-coherent; express "
        "level-coherent shifts as dsl rules over coordinates");
  }
  if (bases.size() != ladder.level_sizes.size()) {
    throw InvalidInputError("make_family: one base per ladder level required");
  }
  MetricFamily f;
  f.ladder = ladder;
  f.rule = describe_rule(rule);
  f.levels.reserve(bases.size());
  for (const auto& base : bases) {
    f.levels.push_back(make_catalog_double(base, rule.kind, rule.params));
  }
  f.coherent = true;
  check_coherence(f);
  return f;
}

MetricFamily family_transpose(const MetricFamily& f) {
  MetricFamily out;
  out.ladder = f.ladder;
  out.rule = "transpose(" + f.rule + ")";
  out.coherent = f.coherent;
  out.levels.reserve(f.levels.size());
  for (const auto& d : f.levels) out.levels.push_back(transpose(d));
  return out;
}

MetricFamily family_offset(const MetricFamily& f, Dist offset) {
  if (offset < 0) throw InvalidInputError("family_offset: offset must be >= 0");
  MetricFamily out;
  out.ladder = f.ladder;
  out.rule = f.rule + "+" + std::to_string(offset);
  out.coherent = f.coherent;
  out.levels.reserve(f.levels.size());
  for (const auto& d : f.levels) {
    std::vector<Dist> cross = d.cross;
    for (auto& v : cross) v += offset;
    out.levels.push_back(assemble_double(d.base, std::move(cross)));
  }
  return out;
}

MetricFamily family_compose(const MetricFamily& f, const MetricFamily& g,
                            const ComposeOptions& opts) {
  check_same_ladder(f, g, "family_compose");
  MetricFamily out;
  out.ladder = f.ladder;
  out.rule = "compose(" + f.rule + "," + g.rule + ")";
  out.coherent = false;
  out.levels.reserve(f.levels.size());
  for (std::size_t l = 0; l < f.levels.size(); ++l) {
    out.levels.push_back(compose(f.levels[l], g.levels[l], opts));
  }
  check_monotone(out);
  return out;
}

MetricFamily family_compose_chain(const std::vector<const MetricFamily*>& chain,
                                  const ComposeOptions& opts) {
  if (chain.size() < 2) throw InvalidInputError("family_compose_chain needs >= 2 families");
  for (std::size_t i = 1; i < chain.size(); ++i) {
    check_same_ladder(*chain[0], *chain[i], "family_compose_chain");
  }
  MetricFamily out;
  out.ladder = chain[0]->ladder;
  std::string rule = "compose_chain(" + chain[0]->rule;
  for (std::size_t i = 1; i < chain.size(); ++i) rule += "," + chain[i]->rule;
  out.rule = rule + ")";
  out.coherent = false;
  const std::size_t depth = chain[0]->levels.size();
  out.levels.reserve(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    std::vector<DoubleMetric> level;
    level.reserve(chain.size());
    for (const auto* fam : chain) level.push_back(fam->levels[l]);
    out.levels.push_back(compose_chain(level, opts));
  }
  check_monotone(out);
  return out;
}

ValueFamily cross_values(const MetricFamily& f) {
  ValueFamily v;
  v.name = f.rule;
  v.sizes.reserve(f.levels.size());
  v.values.reserve(f.levels.size());
  for (const auto& d : f.levels) {
    v.sizes.push_back(d.n());
    v.values.push_back(d.cross);
  }
  return v;
}

ValueFamily scaled_values(const ValueFamily& f, Dist factor) {
  if (factor < 1) throw InvalidInputError("scaled_values: factor must be >= 1");
  ValueFamily v = f;
  v.name = std::to_string(factor) + "*" + f.name;
  for (auto& level : v.values) {
    for (auto& x : level) x *= factor;
  }
  return v;
}

}  // namespace coarse
