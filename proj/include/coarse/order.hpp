#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/family.hpp"

namespace coarse {

// Dual upper profile of a pair of families at one level: for each distinct
// F-value t present, rho(t) = max{ G(z) : F(z) <= t } over all pairs z.
struct ControlProfile {
  int level = 0;
  std::vector<std::pair<Dist, Dist>> rho;  // ascending thresholds, rho nondecreasing

  std::optional<Dist> at(Dist t) const;  // rho at the largest threshold <= t
};

ControlProfile control_profile(const ValueFamily& f, const ValueFamily& g, int level);
ControlProfile control_profile(const MetricFamily& f, const MetricFamily& g, int level);

// Strictly increasing piecewise-linear homeomorphism of [0, inf): integer
// breakpoints starting at (0,0), rational tail slope >= 1. Evaluation is
// exact (cross-multiplied integer comparisons, no floating point).
struct Homeomorphism {
  std::vector<std::pair<Dist, Dist>> breakpoints;
  Dist tail_num = 1;
  Dist tail_den = 1;

  // sign of v - phi(t): -1, 0, +1
  int compare_value(Dist v, Dist t) const;
  bool value_leq(Dist v, Dist t) const { return compare_value(v, t) <= 0; }
  bool value_geq(Dist v, Dist t) const { return compare_value(v, t) >= 0; }
  bool well_formed() const;
};

// Pairs with one family bounded and the other divergent: the certificate
// that an order relation fails.
struct WitnessEntry {
  int level = 0;
  int i = 0;
  int j = 0;
  Dist f = 0;
  Dist g = 0;
};

struct Witness {
  std::vector<WitnessEntry> entries;
  Dist bound_c = 0;
};

// f < C throughout, g strictly increasing, levels nondecreasing.
bool witness_invariants_ok(const Witness& w);

enum class VerdictKind { Holds, Fails, Inconclusive };
const char* to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::optional<Homeomorphism> phi;  // Holds
  std::optional<Witness> witness;    // Fails
  std::string reason;                // Inconclusive: the blocking statistic
  int levels_used = 0;
};

struct OrderParams {
  int window = 3;              // stability window w: compares the last w+1 levels
  Dist divergence_step = 1;    // minimum per-level growth for divergence
  int min_witness_length = 6;
};

// Decides controls(F |- G): Holds iff some homeomorphism phi has
// G(z) <= phi(F(z)) on every pair. Profiles over the last w+1 levels either
// stabilize (Holds, with phi built from the observed profiles and verified on
// every pair of every level), diverge at some threshold (Fails, with a
// witness of F-bounded, G-divergent pairs), or neither (Inconclusive).
Verdict check_controls(const ValueFamily& f, const ValueFamily& g, const OrderParams& params = {});
Verdict check_controls(const MetricFamily& f, const MetricFamily& g, const OrderParams& params = {});

struct EquivalenceResult {
  Verdict forward;   // controls(F |- G)
  Verdict backward;  // controls(G |- F)
  VerdictKind combined = VerdictKind::Inconclusive;  // Holds = equivalent
};

EquivalenceResult check_equivalent(const ValueFamily& f, const ValueFamily& g,
                                   const OrderParams& params = {});
EquivalenceResult check_equivalent(const MetricFamily& f, const MetricFamily& g,
                                   const OrderParams& params = {});

// Dual certificate route: bands Z_n = { z : n-1 <= G(z) <= n } at the top
// level, per-band minima k_n of F, and a staircase phi with phi(n) kept under
// the tail minimum of k. Certifies the same relation as check_controls(F,G)
// but from below: F(z) >= phi(G(z)) on all top-level pairs.
struct BandPoint {
  Dist band = 0;  // n
  Dist k_min = 0; // min F over the band
};

struct HomeomorphismBuild {
  std::optional<Homeomorphism> phi;
  std::vector<BandPoint> bands;     // observed bands, ascending
  Dist offending_band = -1;         // set on failure
  std::string failure;              // empty on success
};

HomeomorphismBuild build_homeomorphism(const ValueFamily& f, const ValueFamily& g,
                                       const OrderParams& params = {});
HomeomorphismBuild build_homeomorphism(const MetricFamily& f, const MetricFamily& g,
                                       const OrderParams& params = {});

// Idempotency at desk scale: FF ~ F and F ~ F* (idempotents are self-adjoint).
struct IdempotencyReport {
  EquivalenceResult square_vs_self;
  EquivalenceResult self_adjoint;
  VerdictKind verdict = VerdictKind::Inconclusive;
};

IdempotencyReport is_idempotent(const MetricFamily& f, const ComposeOptions& copts = {},
                                const OrderParams& params = {});

}  // namespace coarse
