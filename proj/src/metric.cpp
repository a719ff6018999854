#include "coarse/metric.hpp"

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarse {

const char* to_string(MetricViolationKind kind) {
  switch (kind) {
    case MetricViolationKind::Diagonal: return "diagonal";
    case MetricViolationKind::Symmetry: return "symmetry";
    case MetricViolationKind::Positivity: return "positivity";
    case MetricViolationKind::Triangle: return "triangle";
  }
  return "?";
}

namespace {

bool violation_less(const MetricViolation& a, const MetricViolation& b) {
  if (a.i != b.i) return a.i < b.i;
  if (a.j != b.j) return a.j < b.j;
  if (a.k != b.k) return a.k < b.k;
  return static_cast<int>(a.kind) < static_cast<int>(b.kind);
}

}  // namespace

ValidationReport validate_metric(std::span<const Dist> m, int n) {
  if (n < 0 || m.size() != static_cast<std::size_t>(n) * n) {
    throw ShapeError("validate_metric: matrix is not n*n");
  }
  auto at = [&](int i, int j) { return m[static_cast<std::size_t>(i) * n + j]; };

  ValidationReport report;
  for (int i = 0; i < n; ++i) {
    if (at(i, i) != 0) {
      report.violations.push_back({MetricViolationKind::Diagonal, i, i, 0, at(i, i), 0});
    }
    for (int j = 0; j < n; ++j) {
      if (j > i && at(i, j) != at(j, i)) {
        report.violations.push_back({MetricViolationKind::Symmetry, i, j, 0, at(i, j), at(j, i)});
      }
      if (j != i && at(i, j) <= 0) {
        report.violations.push_back({MetricViolationKind::Positivity, i, j, 0, at(i, j), 0});
      }
    }
  }

  // d(i,k) <= d(i,j) + d(j,k) for every ordered triple; j is the midpoint.
  std::vector<std::vector<MetricViolation>> per_i(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    auto& out = per_i[i];
    for (int j = 0; j < n; ++j) {
      const Dist dij = at(i, j);
      for (int k = 0; k < n; ++k) {
        const Dist lhs = at(i, k);
        const Dist rhs = dij + at(j, k);
        if (lhs > rhs) {
          out.push_back({MetricViolationKind::Triangle, i, j, k, lhs, rhs});
        }
      }
    }
  }
  for (auto& chunk : per_i) {
    report.violations.insert(report.violations.end(), chunk.begin(), chunk.end());
  }

  std::stable_sort(report.violations.begin(), report.violations.end(), violation_less);
  report.ok = report.violations.empty();
  return report;
}

ValidationReport validate_metric(const FiniteMetric& m) { return validate_metric(m.dist, m.n); }

ValidationReport validate_metric(const std::vector<std::vector<Dist>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<Dist> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw ShapeError("validate_metric: input rows do not form a square matrix");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return validate_metric(flat, n);
}

FiniteMetric metric_closure(const FiniteMetric& m) {
  const int n = m.n;
  for (int i = 0; i < n; ++i) {
    if (m.at(i, i) != 0) throw InvalidInputError("metric_closure: nonzero diagonal entry");
    for (int j = 0; j < n; ++j) {
      if (m.at(i, j) < 0) throw InvalidInputError("metric_closure: negative entry");
      if (j != i && m.at(i, j) == 0) {
        throw InvalidInputError("metric_closure: zero off-diagonal entry");
      }
      if (j > i && m.at(i, j) != m.at(j, i)) {
        throw InvalidInputError("metric_closure: asymmetric input");
      }
    }
  }

  FiniteMetric out = m;
  Dist* d = out.dist.data();
  for (int k = 0; k < n; ++k) {
    const Dist* dk = d + static_cast<std::size_t>(k) * n;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) {
      Dist* di = d + static_cast<std::size_t>(i) * n;
      const Dist dik = di[k];
      for (int j = 0; j < n; ++j) {
        di[j] = std::min(di[j], dik + dk[j]);
      }
    }
  }
  return out;
}

}  // namespace coarse
