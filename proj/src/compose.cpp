#include "coarse/compose.hpp"

#include "coarse/minplus.hpp"

namespace coarse {

DoubleMetric compose(const DoubleMetric& d1, const DoubleMetric& d2, const ComposeOptions& opts) {
  if (opts.junction_penalty < 0) throw InvalidInputError("junction penalty must be >= 0");
  if (!d1.base || !d2.base) throw InvalidInputError("compose: missing base");
  if (d1.base != d2.base && !d1.base->same_geometry(*d2.base)) {
    throw IncompatibleOperandsError("compose: operands live over different bases");
  }
  const int n = d1.n();
  DoubleMetric out;
  out.base = d1.base;
  out.cross.resize(static_cast<std::size_t>(n) * n);
  minplus(d1.cross.data(), d2.cross.data(), out.cross.data(), n);
  if (opts.junction_penalty > 0) {
    for (auto& v : out.cross) v += opts.junction_penalty;
  }

  // Composition of valid doubles over a common base is a valid double; a
  // failure here is a kernel defect.
  auto report = validate_double(*out.base, out.cross, 1);
  if (!report.ok) {
    throw InternalError("compose produced an invalid double (first violation: clause " +
                        std::string(to_string(report.violations.front().kind)) + " at i=" +
                        std::to_string(report.violations.front().i) + " j=" +
                        std::to_string(report.violations.front().j) + ")");
  }
  return out;
}

DoubleMetric compose_chain(std::span<const DoubleMetric> chain, const ComposeOptions& opts) {
  if (chain.size() < 2) throw InvalidInputError("compose_chain needs at least 2 elements");
  DoubleMetric acc = compose(chain[0], chain[1], opts);
  for (std::size_t i = 2; i < chain.size(); ++i) {
    acc = compose(acc, chain[i], opts);
  }
  return acc;
}

}  // namespace coarse
