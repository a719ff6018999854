#pragma once

#include <span>

#include "coarse/double_metric.hpp"

namespace coarse {

// junction_penalty is added once per composition junction. 0 matches the
// min-plus product literally; 1 mirrors the "+1 per junction" convention, so
// a triple product gains +2.
struct ComposeOptions {
  Dist junction_penalty = 0;
};

// cross12[i][j] = min_u(cross1[i][u] + cross2[u][j]) + junction_penalty.
// Bases must be the same matrix, exactly. The result is revalidated; a
// failure there is a defect (InternalError), not a user error.
DoubleMetric compose(const DoubleMetric& d1, const DoubleMetric& d2,
                     const ComposeOptions& opts = {});

// Left fold of compose; with penalty 0 every association is bit-identical.
DoubleMetric compose_chain(std::span<const DoubleMetric> chain, const ComposeOptions& opts = {});

}  // namespace coarse
