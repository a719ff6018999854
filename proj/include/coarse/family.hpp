#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coarse/compose.hpp"
#include "coarse/spaces.hpp"

namespace coarse {

// Nested finite truncations of one unbounded prototype space.
struct Ladder {
  SpaceSpec space;
  std::vector<int> level_sizes;  // strictly increasing

  int depth() const { return static_cast<int>(level_sizes.size()); }
  int top_size() const { return level_sizes.back(); }
  bool operator==(const Ladder&) const = default;
};

// Validates sizes (strictly increasing, >= 1 each). Order oracles need
// window+1 levels and experiment configs require at least 4.
Ladder make_ladder(SpaceSpec space, std::vector<int> level_sizes);

std::vector<std::shared_ptr<const FiniteMetric>> realize_ladder(const Ladder& ladder);

// Per-level rule for building one double metric per truncation.
struct FamilyRule {
  CatalogKind kind = CatalogKind::Lambda;
  CatalogParams params;
  std::string text;  // original cross text for Dsl rules
};

std::string describe_rule(const FamilyRule& rule);

// A representative of a coarse class at desk scale: one valid double metric
// per ladder level. Rule-built families are exactly restriction-coherent
// (each cross is the leading block of the next); derived families (compose,
// transpose, separators) are instead entrywise non-increasing in the level.
struct MetricFamily {
  Ladder ladder;
  std::string rule;
  std::vector<DoubleMetric> levels;
  bool coherent = false;

  const DoubleMetric& top() const { return levels.back(); }
  int depth() const { return static_cast<int>(levels.size()); }
};

MetricFamily make_family(const Ladder& ladder, const FamilyRule& rule);
MetricFamily make_family(const Ladder& ladder, const FamilyRule& rule,
                         const std::vector<std::shared_ptr<const FiniteMetric>>& bases);

MetricFamily family_transpose(const MetricFamily& f);
// Adds a constant to every cross entry (always a valid double again).
MetricFamily family_offset(const MetricFamily& f, Dist offset);
MetricFamily family_compose(const MetricFamily& f, const MetricFamily& g,
                            const ComposeOptions& opts = {});
MetricFamily family_compose_chain(const std::vector<const MetricFamily*>& chain,
                                  const ComposeOptions& opts = {});

// Per-level pair functions on Z = X x X: what the order machinery consumes.
// Cross blocks of metric families are the main source; scaled views exist so
// function-order statements can be tested beyond valid doubles.
struct ValueFamily {
  std::vector<int> sizes;
  std::vector<std::vector<Dist>> values;  // per level, n_l * n_l row-major
  std::string name;

  int depth() const { return static_cast<int>(sizes.size()); }
  Dist at(int level, int i, int j) const {
    return values[level][static_cast<std::size_t>(i) * sizes[level] + j];
  }
};

ValueFamily cross_values(const MetricFamily& f);
ValueFamily scaled_values(const ValueFamily& f, Dist factor);

}  // namespace coarse
