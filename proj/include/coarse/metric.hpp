#pragma once

#include <span>
#include <vector>

#include "coarse/dist.hpp"
#include "coarse/errors.hpp"

namespace coarse {

// Exact finite metric space: validated distance matrix on n points, with
// optional integer point coordinates used by cross-formula expressions.
struct FiniteMetric {
  int n = 0;
  std::int64_t scale_denominator = 1;
  std::vector<Dist> dist;    // n*n row-major
  int label_dim = 0;
  std::vector<Dist> labels;  // n*label_dim; empty when points carry no coordinates

  Dist at(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
  bool has_labels() const { return label_dim > 0; }
  std::span<const Dist> label(int i) const {
    return {labels.data() + static_cast<std::size_t>(i) * label_dim,
            static_cast<std::size_t>(label_dim)};
  }
  bool same_geometry(const FiniteMetric& o) const { return n == o.n && dist == o.dist; }
};

enum class MetricViolationKind { Diagonal, Symmetry, Positivity, Triangle };
const char* to_string(MetricViolationKind kind);

// For Triangle, j is the midpoint: lhs = d(i,k), rhs = d(i,j) + d(j,k).
struct MetricViolation {
  MetricViolationKind kind = MetricViolationKind::Diagonal;
  int i = 0;
  int j = 0;
  int k = 0;
  Dist lhs = 0;
  Dist rhs = 0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<MetricViolation> violations;  // sorted by (i, j, k, kind)
};

// Exhaustive O(n^3) check of the metric axioms. Parallel over the i index;
// the report is deterministic for any thread count.
ValidationReport validate_metric(std::span<const Dist> m, int n);
ValidationReport validate_metric(const FiniteMetric& m);
// Row-of-rows convenience; throws ShapeError on ragged or non-square input.
ValidationReport validate_metric(const std::vector<std::vector<Dist>>& rows);

// Largest metric pointwise <= m (all-pairs shortest paths). Input must be
// symmetric with zero diagonal and positive off-diagonal entries; throws
// InvalidInputError otherwise. Idempotent.
FiniteMetric metric_closure(const FiniteMetric& m);

}  // namespace coarse
