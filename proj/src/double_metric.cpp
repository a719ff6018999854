#include "coarse/double_metric.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarse {

const char* to_string(DoubleViolationKind kind) {
  switch (kind) {
    case DoubleViolationKind::ClauseA: return "a";
    case DoubleViolationKind::ClauseB: return "b";
    case DoubleViolationKind::ClauseC: return "c";
    case DoubleViolationKind::ClauseD: return "d";
    case DoubleViolationKind::Floor: return "floor";
  }
  return "?";
}

DoubleValidationReport validate_double(const FiniteMetric& base, std::span<const Dist> cross,
                                       std::size_t cap) {
  const int n = base.n;
  if (cross.size() != static_cast<std::size_t>(n) * n) {
    throw ShapeError("validate_double: cross block is not n*n");
  }
  auto b = [&](int i, int j) { return base.dist[static_cast<std::size_t>(i) * n + j]; };
  auto c = [&](int i, int j) { return cross[static_cast<std::size_t>(i) * n + j]; };

  std::vector<std::vector<DoubleViolation>> per_i(n);
  std::vector<std::size_t> count_i(n, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    auto& out = per_i[i];
    std::size_t found = 0;
    auto emit = [&](DoubleViolationKind kind, int j, int k, Dist lhs, Dist rhs) {
      ++found;
      if (out.size() < cap) out.push_back({kind, i, j, k, lhs, rhs});
    };
    for (int j = 0; j < n; ++j) {
      if (c(i, j) < kCrossFloor) emit(DoubleViolationKind::Floor, j, 0, c(i, j), kCrossFloor);
      for (int k = 0; k < n; ++k) {
        if (c(i, j) > b(i, k) + c(k, j)) {
          emit(DoubleViolationKind::ClauseA, j, k, c(i, j), b(i, k) + c(k, j));
        }
        if (c(i, j) > c(i, k) + b(k, j)) {
          emit(DoubleViolationKind::ClauseB, j, k, c(i, j), c(i, k) + b(k, j));
        }
        if (b(i, j) > c(i, k) + c(j, k)) {
          emit(DoubleViolationKind::ClauseC, j, k, b(i, j), c(i, k) + c(j, k));
        }
        if (b(i, j) > c(k, i) + c(k, j)) {
          emit(DoubleViolationKind::ClauseD, j, k, b(i, j), c(k, i) + c(k, j));
        }
      }
    }
    count_i[i] = found;
  }

  DoubleValidationReport report;
  for (int i = 0; i < n; ++i) {
    report.violation_count += count_i[i];
    for (const auto& v : per_i[i]) {
      if (report.violations.size() >= cap) break;
      report.violations.push_back(v);
    }
  }
  report.ok = report.violation_count == 0;
  return report;
}

DoubleMetric assemble_double(std::shared_ptr<const FiniteMetric> base, std::vector<Dist> cross) {
  if (!base) throw InvalidInputError("assemble_double: null base");
  auto report = validate_double(*base, cross);
  if (!report.ok) {
    const auto& first = report.violations.front();
    const std::string msg =
        "assemble_double: cross block violates the double-metric clauses (" +
        std::to_string(report.violation_count) + " violations, first at clause " +
        to_string(first.kind) + " i=" + std::to_string(first.i) + " j=" +
        std::to_string(first.j) + ")";
    throw DoubleValidationError(msg, std::move(report));
  }
  return DoubleMetric{std::move(base), std::move(cross)};
}

DoubleMetric assemble_double(FiniteMetric base, std::vector<Dist> cross) {
  auto base_report = validate_metric(base);
  if (!base_report.ok) {
    throw InvalidInputError("assemble_double: base fails the metric axioms (" +
                            std::to_string(base_report.violations.size()) + " violations)");
  }
  return assemble_double(std::make_shared<const FiniteMetric>(std::move(base)), std::move(cross));
}

DoubleMetric transpose(const DoubleMetric& d) {
  const int n = d.n();
  DoubleMetric out;
  out.base = d.base;
  out.cross.resize(d.cross.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.cross[static_cast<std::size_t>(i) * n + j] = d.cross_at(j, i);
    }
  }
  return out;
}

CatalogKind parse_catalog_kind(const std::string& name) {
  if (name == "lambda") return CatalogKind::Lambda;
  if (name == "shift") return CatalogKind::Shift;
  if (name == "focused") return CatalogKind::Focused;
  if (name == "dsl") return CatalogKind::Dsl;
  throw ConfigError("unknown catalog kind '" + name + "'");
}

const char* to_string(CatalogKind kind) {
  switch (kind) {
    case CatalogKind::Lambda: return "lambda";
    case CatalogKind::Shift: return "shift";
    case CatalogKind::Focused: return "focused";
    case CatalogKind::Dsl: return "dsl";
  }
  return "?";
}

DoubleMetric make_catalog_double(std::shared_ptr<const FiniteMetric> base, CatalogKind kind,
                                 const CatalogParams& params) {
  if (!base) throw InvalidInputError("make_catalog_double: null base");
  const int n = base->n;
  std::vector<Dist> cross(static_cast<std::size_t>(n) * n);
  auto b = [&](int i, int j) { return base->at(i, j); };

  switch (kind) {
    case CatalogKind::Lambda: {
      if (params.lambda < 1) throw InvalidInputError("lambda must be >= 1 quantum");
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          cross[static_cast<std::size_t>(i) * n + j] = b(i, j) + params.lambda;
        }
      }
      break;
    }
    case CatalogKind::Shift: {
      if (params.lambda < 1) throw InvalidInputError("lambda must be >= 1 quantum");
      if (static_cast<int>(params.shift_map.size()) != n) {
        throw InvalidInputError("shift map must assign an image to every point");
      }
      for (int g : params.shift_map) {
        if (g < 0 || g >= n) throw InvalidInputError("shift map image out of range");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          cross[static_cast<std::size_t>(i) * n + j] = b(i, params.shift_map[j]) + params.lambda;
        }
      }
      break;
    }
    case CatalogKind::Focused: {
      if (params.lambda < 1) throw InvalidInputError("lambda must be >= 1 quantum");
      if (params.basepoint < 0 || params.basepoint >= n) {
        throw InvalidInputError("focused basepoint out of range");
      }
      const int p = params.basepoint;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          cross[static_cast<std::size_t>(i) * n + j] = b(i, p) + b(p, j) + params.lambda;
        }
      }
      break;
    }
    case CatalogKind::Dsl: {
      if (!params.expr) throw InvalidInputError("dsl kind needs a cross expression");
      if (!base->has_labels()) {
        throw InvalidInputError("dsl cross formulas need a space with point coordinates");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          try {
            cross[static_cast<std::size_t>(i) * n + j] =
                eval_cross_expr(*params.expr, base->label(i), base->label(j), b(i, j));
          } catch (const DslEvalError& e) {
            throw InvalidInputError("cross formula failed at points (" + std::to_string(i) + "," +
                                    std::to_string(j) + "): " + e.what());
          }
        }
      }
      break;
    }
  }
  return assemble_double(std::move(base), std::move(cross));
}

}  // namespace coarse
