#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "coarse/dsl.hpp"
#include "coarse/metric.hpp"

namespace coarse {

// Metric on two copies of a base space, stored as blocks: the shared base
// matrix and the cross block cross[i][j] = d(x_i, x'_j). The assembled
// 2n-point matrix is never materialized.
struct DoubleMetric {
  std::shared_ptr<const FiniteMetric> base;
  std::vector<Dist> cross;  // n*n row-major

  int n() const { return base ? base->n : 0; }
  Dist cross_at(int i, int j) const { return cross[static_cast<std::size_t>(i) * n() + j]; }
};

// Triangle clause families of the assembled double, on (base, cross) blocks:
//   A: cross[i][j] <= base[i][k] + cross[k][j]
//   B: cross[i][j] <= cross[i][k] + base[k][j]
//   C: base[i][j]  <= cross[i][k] + cross[j][k]
//   D: base[i][j]  <= cross[k][i] + cross[k][j]
// Floor: cross[i][j] >= 1 quantum (the two copies stay apart).
enum class DoubleViolationKind { ClauseA, ClauseB, ClauseC, ClauseD, Floor };
const char* to_string(DoubleViolationKind kind);

struct DoubleViolation {
  DoubleViolationKind kind = DoubleViolationKind::Floor;
  int i = 0;
  int j = 0;
  int k = 0;
  Dist lhs = 0;
  Dist rhs = 0;
};

struct DoubleValidationReport {
  bool ok = true;
  std::size_t violation_count = 0;           // all violations found
  std::vector<DoubleViolation> violations;   // first `cap` in (i, j, k, clause) order
};

inline constexpr Dist kCrossFloor = 1;
inline constexpr std::size_t kDoubleReportCap = 100;

// O(4 n^3) exhaustive clause check; parallel over i, deterministic report.
DoubleValidationReport validate_double(const FiniteMetric& base, std::span<const Dist> cross,
                                       std::size_t cap = kDoubleReportCap);

struct DoubleValidationError : Error {
  DoubleValidationReport report;
  DoubleValidationError(const std::string& msg, DoubleValidationReport r)
      : Error(msg), report(std::move(r)) {}
};

// Builds a DoubleMetric iff all four clause families and the cross floor
// hold; throws DoubleValidationError otherwise. The by-value overload also
// validates the base axioms first.
DoubleMetric assemble_double(std::shared_ptr<const FiniteMetric> base, std::vector<Dist> cross);
DoubleMetric assemble_double(FiniteMetric base, std::vector<Dist> cross);

// Pseudoinverse representative: same base, transposed cross block. Exact
// involution; preserves validity.
DoubleMetric transpose(const DoubleMetric& d);

enum class CatalogKind { Lambda, Shift, Focused, Dsl };
CatalogKind parse_catalog_kind(const std::string& name);
const char* to_string(CatalogKind kind);

struct CatalogParams {
  Dist lambda = 1;
  std::vector<int> shift_map;      // Shift: image index per column
  int basepoint = 0;               // Focused
  std::optional<CrossExpr> expr;   // Dsl
};

// lambda:  cross[i][j] = base[i][j] + lambda
// shift:   cross[i][j] = base[i][g(j)] + lambda
// focused: cross[i][j] = base[i][p] + base[p][j] + lambda
// dsl:     cross[i][j] = eval(expr, label_i, label_j, base[i][j])
// The result goes through assemble_double; non-metric crosses are rejected,
// never repaired.
DoubleMetric make_catalog_double(std::shared_ptr<const FiniteMetric> base, CatalogKind kind,
                                 const CatalogParams& params);

}  // namespace coarse
