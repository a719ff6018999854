#pragma once

#include <cstdint>
#include <span>

#include "coarse/dist.hpp"

namespace coarse {

// out[i][j] = min_u a[i][u] + b[u][j], n x n row-major.

// Reference kernel, kept for testing the parallel path against.
void minplus_serial(const Dist* a, const Dist* b, Dist* out, int n);

// Row-parallel blocked kernel. Each output row is owned by one thread and
// reduced in a fixed order, so the result is bit-identical to the serial
// reference for any thread count. threads = 0 uses the OpenMP default.
void minplus_parallel(const Dist* a, const Dist* b, Dist* out, int n, int threads = 0);

// Dispatch: parallel when built with OpenMP, serial otherwise.
void minplus(const Dist* a, const Dist* b, Dist* out, int n, int threads = 0);

std::uint64_t matrix_checksum(std::span<const Dist> values);

struct BenchReport {
  int n = 0;
  int threads = 1;
  double serial_ms = 0;
  double parallel_ms = 0;
  double speedup = 0;
  double ns_per_op = 0;  // parallel time per inner min-plus step
  std::uint64_t checksum_serial = 0;
  std::uint64_t checksum_parallel = 0;
  bool checksums_match = false;
};

// Times one n x n product over seeded inputs, serial and parallel, and
// checksums both results. n <= 4096.
BenchReport bench_minplus(int n, int threads, std::uint64_t seed);

}  // namespace coarse
