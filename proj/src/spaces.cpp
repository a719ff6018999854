#include "coarse/spaces.hpp"

#include <cmath>
#include <random>
#include <set>

namespace coarse {

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "halfline") return SpaceKind::Halfline;
  if (name == "line") return SpaceKind::Line;
  if (name == "grid") return SpaceKind::Grid;
  if (name == "tree") return SpaceKind::Tree;
  if (name == "random") return SpaceKind::Random;
  throw ConfigError("unknown space kind '" + name + "'");
}

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Halfline: return "halfline";
    case SpaceKind::Line: return "line";
    case SpaceKind::Grid: return "grid";
    case SpaceKind::Tree: return "tree";
    case SpaceKind::Random: return "random";
  }
  return "?";
}

namespace {

constexpr Dist kMaxBox = Dist{1} << 20;
constexpr Dist kMaxScale = 1024;

Dist iabs(Dist v) { return v < 0 ? -v : v; }

// smallest t with t*t >= v, exact
Dist isqrt_ceil(Dist v) {
  if (v <= 0) return 0;
  Dist r = static_cast<Dist>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r >= v) --r;
  while (r * r < v) ++r;
  return r;
}

FiniteMetric from_labels_l1(int n, int dim, std::vector<Dist> labels) {
  FiniteMetric m;
  m.n = n;
  m.label_dim = dim;
  m.labels = std::move(labels);
  m.dist.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Dist d = 0;
      for (int c = 0; c < dim; ++c) {
        d += iabs(m.labels[static_cast<std::size_t>(i) * dim + c] -
                  m.labels[static_cast<std::size_t>(j) * dim + c]);
      }
      m.dist[static_cast<std::size_t>(i) * n + j] = d;
    }
  }
  return m;
}

// 0, -1, +1, -2, +2, ...
Dist line_coordinate(int idx) {
  if (idx == 0) return 0;
  const Dist step = (idx + 1) / 2;
  return (idx % 2 == 1) ? -step : step;
}

FiniteMetric make_tree(int n, int branching) {
  std::vector<int> depth(n, 0);
  std::vector<int> parent(n, -1);
  for (int i = 1; i < n; ++i) {
    parent[i] = (i - 1) / branching;
    depth[i] = depth[parent[i]] + 1;
  }
  FiniteMetric m;
  m.n = n;
  m.label_dim = 2;
  m.labels.resize(static_cast<std::size_t>(n) * 2);
  for (int i = 0; i < n; ++i) {
    m.labels[static_cast<std::size_t>(i) * 2] = i;
    m.labels[static_cast<std::size_t>(i) * 2 + 1] = depth[i];
  }
  m.dist.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int a = i, b = j;
      Dist d = 0;
      while (a != b) {
        if (depth[a] >= depth[b]) {
          a = parent[a];
        } else {
          b = parent[b];
        }
        ++d;
      }
      m.dist[static_cast<std::size_t>(i) * n + j] = d;
    }
  }
  return m;
}

FiniteMetric make_random(const SpaceSpec& spec, int n) {
  if (spec.dim < 1 || spec.dim > 4) throw InvalidInputError("random space: dim must be 1..4");
  if (spec.box < 1 || spec.box > kMaxBox) throw InvalidInputError("random space: box out of range");
  if (spec.scale < 1 || spec.scale > kMaxScale) {
    throw InvalidInputError("random space: scale out of range");
  }

  std::mt19937_64 gen(spec.seed);
  const int dim = spec.dim;
  std::vector<Dist> pts;
  pts.reserve(static_cast<std::size_t>(n) * dim);
  std::set<std::vector<Dist>> seen;
  for (int i = 0; i < n; ++i) {
    std::vector<Dist> p(dim);
    int attempts = 0;
    do {
      for (int c = 0; c < dim; ++c) {
        p[c] = static_cast<Dist>(gen() % static_cast<std::uint64_t>(spec.box + 1));
      }
      if (++attempts > 100000) {
        throw InvalidInputError("random space: box too small for distinct points");
      }
    } while (!seen.insert(p).second);
    pts.insert(pts.end(), p.begin(), p.end());
  }

  FiniteMetric m;
  m.n = n;
  m.scale_denominator = spec.scale;
  m.label_dim = dim;
  m.labels = pts;
  m.dist.assign(static_cast<std::size_t>(n) * n, 0);
  const Dist s2 = spec.scale * spec.scale;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Dist e2 = 0;
      for (int c = 0; c < dim; ++c) {
        const Dist d = pts[static_cast<std::size_t>(i) * dim + c] -
                       pts[static_cast<std::size_t>(j) * dim + c];
        e2 += d * d;
      }
      const Dist q = isqrt_ceil(s2 * e2);
      m.dist[static_cast<std::size_t>(i) * n + j] = q;
      m.dist[static_cast<std::size_t>(j) * n + i] = q;
    }
  }
  // Ceil quantization already satisfies the triangle inequality; the closure
  // pass is the documented repair step and leaves such input unchanged.
  return metric_closure(m);
}

}  // namespace

FiniteMetric generate_space(const SpaceSpec& spec, int n) {
  if (n < 1) throw InvalidInputError("generate_space: level size must be >= 1");
  switch (spec.kind) {
    case SpaceKind::Halfline: {
      std::vector<Dist> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = i;
      return from_labels_l1(n, 1, std::move(labels));
    }
    case SpaceKind::Line: {
      std::vector<Dist> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = line_coordinate(i);
      return from_labels_l1(n, 1, std::move(labels));
    }
    case SpaceKind::Grid: {
      if (spec.width < 1) throw InvalidInputError("grid space: width must be >= 1");
      std::vector<Dist> labels(static_cast<std::size_t>(n) * 2);
      for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i) * 2] = i % spec.width;
        labels[static_cast<std::size_t>(i) * 2 + 1] = i / spec.width;
      }
      return from_labels_l1(n, 2, std::move(labels));
    }
    case SpaceKind::Tree: {
      if (spec.branching < 1) throw InvalidInputError("tree space: branching must be >= 1");
      return make_tree(n, spec.branching);
    }
    case SpaceKind::Random:
      return make_random(spec, n);
  }
  throw InvalidInputError("generate_space: unknown space kind");
}

}  // namespace coarse
