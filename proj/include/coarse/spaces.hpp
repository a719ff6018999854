#pragma once

#include <cstdint>
#include <string>

#include "coarse/metric.hpp"

namespace coarse {

enum class SpaceKind { Halfline, Line, Grid, Tree, Random };

SpaceKind parse_space_kind(const std::string& name);  // throws ConfigError
const char* to_string(SpaceKind kind);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Halfline;
  int width = 4;           // grid: columns
  int branching = 2;       // tree: arity
  std::uint64_t seed = 1;  // random
  int dim = 2;             // random: 1..4
  Dist box = 1024;         // random: coordinates drawn from [0, box]
  Dist scale = 1;          // random: quanta per coordinate unit

  bool operator==(const SpaceSpec&) const = default;
};

// Deterministic generators with prefix-coherent enumeration: point i at level
// n is point i at every level m >= n, so nested truncations share matrices.
//   halfline  points 0..n-1, |i-j|
//   line      0, -1, +1, -2, +2, ...; |c_i - c_j|
//   grid      row-major width-w lattice, L1 distance
//   tree      BFS-ordered rooted b-ary tree, graph distance
//   random    seeded integer points in [0,box]^dim, exact ceil-quantized
//             Euclidean distances, then metric_closure
FiniteMetric generate_space(const SpaceSpec& spec, int n);

}  // namespace coarse
