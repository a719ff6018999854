#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse/order.hpp"

namespace coarse {

// Witness with the unboundedness check attached: both index sequences must
// leave every ball of the base ladder. When one stays bounded, `contradiction`
// carries the derived absurdity instead of throwing.
struct CorollaryWitness {
  Witness witness;
  std::vector<Dist> x_reach;  // per level: max base distance from point 0 to x_n seen so far
  std::vector<Dist> y_reach;
  bool x_unbounded = false;
  bool y_unbounded = false;
  std::string contradiction;
};

// Requires check_controls(B |- C) = Fails; throws PreconditionError when the
// relation holds and InconclusiveError when the ladder cannot tell.
CorollaryWitness extract_witness(const MetricFamily& b, const MetricFamily& c,
                                 const OrderParams& params = {});

// Sparsified witness: retained x-points are exponentially spaced and all
// mixed pairs clear the C floor.
struct SparseWitness {
  struct Point {
    int x = 0;
    int y = 0;
    int level = 0;
  };
  std::vector<Point> points;
  Dist bound_c = 0;
  bool separation_checked = false;
};

// Greedy in witness order: keep a candidate for slot k only if its x-point is
// > 2^k from every retained x-point; then drop points whose C-values against
// any retained pair (mixed or diagonal) fail to exceed bound_c. Fewer than 4
// survivors -> InconclusiveError naming the largest achievable k.
SparseWitness sparsify_witness(const Witness& w, const MetricFamily& b, const MetricFamily& c);

// The separating element: cross[i][j] = min_n(base[i][x_n] + base[y_n][j] + C)
// over witness points present at each level.
DoubleMetric build_separating_metric(const SparseWitness& w,
                                     std::shared_ptr<const FiniteMetric> base, int level_size);
MetricFamily build_separating_family(const SparseWitness& w, const Ladder& ladder);

// Desk-scale bounds for the triple products ABA* and ACA* over the witness
// diagonal, plus the equivalence verdict between them.
struct SeparationBounds {
  Dist bound_c = 0;
  Dist penalty = 0;
  SparseWitness witness;
  std::vector<Dist> diag_aba;          // per retained point, top level
  std::vector<Dist> diag_aca;
  std::vector<Dist> diag_bound;        // closed-form per-point bound on diag_aba
  Dist sup_diag_aba = 0;
  Dist sup_bound = 0;                  // 3C + 2*penalty
  Dist divergence_floor = 0;           // 3C + 2
  bool diag_aba_bounded = false;
  bool diag_aca_diverges = false;      // strictly increasing, > divergence_floor from 3rd point
  std::uint64_t dominance_num = 0;     // top-level pairs with ACA* >= ABA*
  std::uint64_t dominance_den = 0;
  EquivalenceResult equivalence;       // ABA* vs ACA*; expected Fails
  bool bounds_ok = false;
};

SeparationBounds verify_lemma_main(const MetricFamily& b, const MetricFamily& c,
                                   const OrderParams& params = {}, const ComposeOptions& copts = {});

// mu_s(e) = s e s*. E should be idempotent; this is not enforced.
MetricFamily mu_action(const MetricFamily& s, const MetricFamily& e,
                       const ComposeOptions& copts = {});

// End-to-end separation: pick the failing order direction between S and T,
// extract and sparsify a witness, build the separator A and e = A* A, and
// compare mu_s(e) with mu_t(e). Expected outcome: not equivalent.
struct ExperimentReport {
  bool inconclusive = false;
  std::string stage;         // set when inconclusive
  std::string ladder_advice; // suggested level extension
  std::string failing_direction;
  CorollaryWitness raw_witness;
  SparseWitness witness;
  std::string separator_rule;
  std::string idempotent_rule;
  std::vector<Dist> mu_s_diag;  // at witness points, top level
  std::vector<Dist> mu_t_diag;
  EquivalenceResult separation;  // mu_s(e) vs mu_t(e)
};

ExperimentReport fundamentality_experiment(const MetricFamily& s, const MetricFamily& t,
                                           const OrderParams& params = {},
                                           const ComposeOptions& copts = {});

}  // namespace coarse
