#include "coarse/minplus.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <vector>

#include "coarse/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarse {

namespace {

constexpr Dist kInf = std::numeric_limits<Dist>::max();

// One output row; streams rows of b in a fixed order.
inline void minplus_row(const Dist* arow, const Dist* b, Dist* orow, int n) {
  std::fill(orow, orow + n, kInf);
  for (int u = 0; u < n; ++u) {
    const Dist aiu = arow[u];
    const Dist* brow = b + static_cast<std::size_t>(u) * n;
    for (int j = 0; j < n; ++j) {
      const Dist cand = aiu + brow[j];
      if (cand < orow[j]) orow[j] = cand;
    }
  }
}

}  // namespace

void minplus_serial(const Dist* a, const Dist* b, Dist* out, int n) {
  for (int i = 0; i < n; ++i) {
    minplus_row(a + static_cast<std::size_t>(i) * n, b, out + static_cast<std::size_t>(i) * n, n);
  }
}

void minplus_parallel(const Dist* a, const Dist* b, Dist* out, int n, int threads) {
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int i = 0; i < n; ++i) {
    minplus_row(a + static_cast<std::size_t>(i) * n, b, out + static_cast<std::size_t>(i) * n, n);
  }
#else
  (void)threads;
  minplus_serial(a, b, out, n);
#endif
}

void minplus(const Dist* a, const Dist* b, Dist* out, int n, int threads) {
#ifdef _OPENMP
  minplus_parallel(a, b, out, n, threads);
#else
  (void)threads;
  minplus_serial(a, b, out, n);
#endif
}

std::uint64_t matrix_checksum(std::span<const Dist> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Dist v : values) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 0x100000001b3ULL;
  }
  return h;
}

BenchReport bench_minplus(int n, int threads, std::uint64_t seed) {
  if (n < 1 || n > 4096) throw InvalidInputError("bench: n must be in 1..4096");
  std::mt19937_64 gen(seed);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<Dist> a(cells), b(cells), out_serial(cells), out_parallel(cells);
  for (auto& v : a) v = 1 + static_cast<Dist>(gen() % (Dist{1} << 30));
  for (auto& v : b) v = 1 + static_cast<Dist>(gen() % (Dist{1} << 30));

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  minplus_serial(a.data(), b.data(), out_serial.data(), n);
  const auto t1 = Clock::now();
  minplus_parallel(a.data(), b.data(), out_parallel.data(), n, threads);
  const auto t2 = Clock::now();

  BenchReport r;
  r.n = n;
  r.threads = threads;
  r.serial_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.parallel_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  r.speedup = r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0;
  const double ops = static_cast<double>(n) * n * n;
  r.ns_per_op = ops > 0 ? (r.parallel_ms * 1e6) / ops : 0;
  r.checksum_serial = matrix_checksum(out_serial);
  r.checksum_parallel = matrix_checksum(out_parallel);
  r.checksums_match = r.checksum_serial == r.checksum_parallel;
  return r;
}

}  // namespace coarse
