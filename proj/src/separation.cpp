#include "coarse/separation.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace coarse {

namespace {

void check_same_ladder(const MetricFamily& a, const MetricFamily& b, const char* op) {
  if (!(a.ladder == b.ladder)) {
    throw IncompatibleOperandsError(std::string(op) + ": families live over different ladders");
  }
}

// Strict growth of the reach across every step of the stability window.
bool diverges_across_window(const std::vector<Dist>& reach, int window) {
  const int levels = static_cast<int>(reach.size());
  if (levels < window + 1) return false;
  for (int l = levels - window - 1; l + 1 < levels; ++l) {
    if (reach[l + 1] <= reach[l]) return false;
  }
  return true;
}

std::string suggest_extension(const Ladder& ladder) {
  std::ostringstream os;
  const int top = ladder.top_size();
  os << "extend level_sizes with " << 2 * top << " and " << 4 * top;
  return os.str();
}

}  // namespace

CorollaryWitness extract_witness(const MetricFamily& b, const MetricFamily& c,
                                 const OrderParams& params) {
  check_same_ladder(b, c, "extract_witness");
  const Verdict verdict = check_controls(b, c, params);
  if (verdict.kind == VerdictKind::Holds) {
    throw PreconditionError("extract_witness: the first family controls the second; no "
                            "divergence witness exists");
  }
  if (verdict.kind == VerdictKind::Inconclusive) {
    throw InconclusiveError("extract_witness: " + verdict.reason);
  }

  CorollaryWitness out;
  out.witness = *verdict.witness;

  // Unboundedness: both index sequences must leave every ball around point 0.
  const FiniteMetric& top_base = *b.top().base;
  const int levels = b.depth();
  out.x_reach.assign(levels, 0);
  out.y_reach.assign(levels, 0);
  Dist rx = 0, ry = 0;
  std::size_t cursor = 0;
  for (int l = 0; l < levels; ++l) {
    while (cursor < out.witness.entries.size() && out.witness.entries[cursor].level <= l) {
      const auto& e = out.witness.entries[cursor];
      rx = std::max(rx, top_base.at(0, e.i));
      ry = std::max(ry, top_base.at(0, e.j));
      ++cursor;
    }
    out.x_reach[l] = rx;
    out.y_reach[l] = ry;
  }
  out.x_unbounded = diverges_across_window(out.x_reach, params.window);
  out.y_unbounded = diverges_across_window(out.y_reach, params.window);

  if (!out.x_unbounded && !out.y_unbounded) {
    out.contradiction =
        "both sequences stay within reach " + std::to_string(std::max(rx, ry)) +
        " of point 0, so c(x_n,y'_n) <= d(x_n,x_0) + c(x_0,x'_0) + d(x_0,y_n) is bounded, "
        "contradicting its divergence";
  } else if (!out.y_unbounded) {
    out.contradiction = "the y-sequence stays within reach " + std::to_string(ry) +
                        " of point 0, yet d(x_0,y_n) >= d(x_0,x_n) - b(x_n,y'_n) > reach(x) - C "
                        "diverges; contradiction";
  } else if (!out.x_unbounded) {
    out.contradiction = "the x-sequence stays within reach " + std::to_string(rx) +
                        " of point 0, yet d(x_0,x_n) >= d(x_0,y_n) - b(x_n,y'_n) > reach(y) - C "
                        "diverges; contradiction";
  }
  return out;
}

SparseWitness sparsify_witness(const Witness& w, const MetricFamily& b, const MetricFamily& c) {
  check_same_ladder(b, c, "sparsify_witness");
  if (w.entries.empty()) throw PreconditionError("sparsify_witness: empty witness");
  const FiniteMetric& base = *b.top().base;
  const DoubleMetric& c_top = c.top();
  const DoubleMetric& b_top = b.top();
  const Dist bound = w.bound_c;

  // Stage 1: exponential spacing. The candidate for slot k must sit more than
  // 2^k quanta from every retained x-point.
  std::vector<WitnessEntry> spaced;
  for (const auto& e : w.entries) {
    const std::size_t k = spaced.size() + 1;
    if (k >= 62) break;
    const Dist need = Dist{1} << k;
    bool far = true;
    for (const auto& r : spaced) {
      if (base.at(e.i, r.i) <= need) {
        far = false;
        break;
      }
    }
    if (far) spaced.push_back(e);
  }

  // Stage 2: every retained pair, mixed or diagonal, must clear the C floor.
  std::vector<WitnessEntry> kept;
  for (const auto& e : spaced) {
    if (c_top.cross_at(e.i, e.j) <= bound) continue;
    bool ok = true;
    for (const auto& r : kept) {
      if (c_top.cross_at(e.i, r.j) <= bound || c_top.cross_at(r.i, e.j) <= bound) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(e);
  }

  if (kept.size() < 4) {
    throw InconclusiveError(
        "sparsify_witness: only " + std::to_string(kept.size()) +
        " points survive sparsification at top level " + std::to_string(base.n) +
        " (largest achievable k = " + std::to_string(kept.size()) + "); " +
        suggest_extension(b.ladder));
  }

  SparseWitness out;
  out.bound_c = bound;
  out.points.reserve(kept.size());
  for (const auto& e : kept) out.points.push_back({e.i, e.j, e.level});

  // Invariants: spacing survives the floor filter (dropping entries only
  // loosens it), the b-diagonal stays under C, and all floors hold.
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const auto& p = out.points[k];
    const Dist need = Dist{1} << (k + 1);
    for (std::size_t m = 0; m < k; ++m) {
      if (base.at(p.x, out.points[m].x) <= need) {
        throw InternalError("sparse witness lost its exponential spacing");
      }
    }
    if (b_top.cross_at(p.x, p.y) >= bound) {
      throw InternalError("sparse witness diagonal is not bounded by C");
    }
    for (std::size_t m = 0; m < out.points.size(); ++m) {
      if (c_top.cross_at(p.x, out.points[m].y) <= bound) {
        throw InternalError("sparse witness mixed pair fails the C floor");
      }
    }
  }
  out.separation_checked = true;
  return out;
}

DoubleMetric build_separating_metric(const SparseWitness& w,
                                     std::shared_ptr<const FiniteMetric> base, int level_size) {
  if (!base || base->n != level_size) {
    throw InvalidInputError("build_separating_metric: base does not match the level size");
  }
  std::vector<const SparseWitness::Point*> present;
  for (const auto& p : w.points) {
    if (p.x < level_size && p.y < level_size) present.push_back(&p);
  }
  if (present.empty()) {
    throw InconclusiveError("build_separating_metric: no witness points inside level of size " +
                            std::to_string(level_size));
  }
  const int n = level_size;
  std::vector<Dist> cross(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Dist best = std::numeric_limits<Dist>::max();
      for (const auto* p : present) {
        best = std::min(best, base->at(i, p->x) + base->at(p->y, j));
      }
      cross[static_cast<std::size_t>(i) * n + j] = best + w.bound_c;
    }
  }
  try {
    return assemble_double(std::move(base), std::move(cross));
  } catch (const DoubleValidationError& e) {
    throw InternalError(std::string("separating metric failed validation, which is only "
                                    "possible if the witness invariants were violated: ") +
                        e.what());
  }
}

MetricFamily build_separating_family(const SparseWitness& w, const Ladder& ladder) {
  MetricFamily f;
  f.ladder = ladder;
  std::ostringstream rule;
  rule << "separator(C=" << w.bound_c << ",points=[";
  for (std::size_t k = 0; k < w.points.size(); ++k) {
    if (k) rule << ",";
    rule << "(" << w.points[k].x << "," << w.points[k].y << ")";
  }
  rule << "])";
  f.rule = rule.str();
  f.coherent = false;
  const auto bases = realize_ladder(ladder);
  f.levels.reserve(bases.size());
  for (std::size_t l = 0; l < bases.size(); ++l) {
    f.levels.push_back(build_separating_metric(w, bases[l], ladder.level_sizes[l]));
  }
  return f;
}

MetricFamily mu_action(const MetricFamily& s, const MetricFamily& e, const ComposeOptions& copts) {
  check_same_ladder(s, e, "mu_action");
  const MetricFamily st = family_transpose(s);
  MetricFamily out = family_compose_chain({&s, &e, &st}, copts);
  out.rule = "mu(" + s.rule + ";" + e.rule + ")";
  return out;
}

SeparationBounds verify_lemma_main(const MetricFamily& b, const MetricFamily& c,
                                   const OrderParams& params, const ComposeOptions& copts) {
  check_same_ladder(b, c, "verify_lemma_main");
  const CorollaryWitness raw = extract_witness(b, c, params);
  SeparationBounds out;
  out.witness = sparsify_witness(raw.witness, b, c);
  out.bound_c = out.witness.bound_c;
  out.penalty = copts.junction_penalty;

  const MetricFamily a = build_separating_family(out.witness, b.ladder);
  const MetricFamily at = family_transpose(a);
  const MetricFamily aba = family_compose_chain({&a, &b, &at}, copts);
  const MetricFamily aca = family_compose_chain({&a, &c, &at}, copts);

  const DoubleMetric& aba_top = aba.top();
  const DoubleMetric& aca_top = aca.top();
  const DoubleMetric& b_top = b.top();
  const FiniteMetric& base = *b_top.base;

  out.sup_diag_aba = 0;
  for (const auto& p : out.witness.points) {
    const Dist aba_k = aba_top.cross_at(p.x, p.x);
    const Dist aca_k = aca_top.cross_at(p.x, p.x);
    out.diag_aba.push_back(aba_k);
    out.diag_aca.push_back(aca_k);
    out.sup_diag_aba = std::max(out.sup_diag_aba, aba_k);
    // Closed-form bound through the witness pair itself.
    const Dist closed =
        base.at(p.x, p.y) + b_top.cross_at(p.x, p.y) + 2 * out.bound_c + 2 * copts.junction_penalty;
    out.diag_bound.push_back(closed);
    if (aba_k > closed) {
      throw InternalError("diag(ABA*) exceeds its closed-form bound at point " +
                          std::to_string(p.x));
    }
  }

  out.sup_bound = 3 * out.bound_c + 2 * copts.junction_penalty;
  out.divergence_floor = 3 * out.bound_c + 2;
  out.diag_aba_bounded = out.sup_diag_aba <= out.sup_bound;
  out.diag_aca_diverges = true;
  for (std::size_t k = 0; k < out.diag_aca.size(); ++k) {
    if (k > 0 && out.diag_aca[k] <= out.diag_aca[k - 1]) out.diag_aca_diverges = false;
    if (k >= 2 && out.diag_aca[k] <= out.divergence_floor) out.diag_aca_diverges = false;
  }

  const int n = aba_top.n();
  std::uint64_t dominated = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (aca_top.cross_at(i, j) >= aba_top.cross_at(i, j)) ++dominated;
    }
  }
  out.dominance_num = dominated;
  out.dominance_den = static_cast<std::uint64_t>(n) * n;

  out.equivalence = check_equivalent(aba, aca, params);
  out.bounds_ok = out.diag_aba_bounded && out.diag_aca_diverges &&
                  out.equivalence.combined == VerdictKind::Fails;
  return out;
}

ExperimentReport fundamentality_experiment(const MetricFamily& s, const MetricFamily& t,
                                           const OrderParams& params,
                                           const ComposeOptions& copts) {
  check_same_ladder(s, t, "fundamentality_experiment");
  ExperimentReport report;

  const EquivalenceResult eq = check_equivalent(s, t, params);
  if (eq.combined == VerdictKind::Holds) {
    throw PreconditionError(
        "fundamentality_experiment: the families are coarsely equivalent; nothing to separate");
  }
  if (eq.combined == VerdictKind::Inconclusive) {
    report.inconclusive = true;
    report.stage = "equivalence precheck";
    report.ladder_advice = suggest_extension(s.ladder);
    return report;
  }

  // The failing direction supplies (bounded, divergent) = (b, c).
  const MetricFamily* bounded = nullptr;
  const MetricFamily* divergent = nullptr;
  if (eq.forward.kind == VerdictKind::Fails) {
    bounded = &s;
    divergent = &t;
    report.failing_direction = "controls(S |- T) fails";
  } else {
    bounded = &t;
    divergent = &s;
    report.failing_direction = "controls(T |- S) fails";
  }

  try {
    report.raw_witness = extract_witness(*bounded, *divergent, params);
    report.witness = sparsify_witness(report.raw_witness.witness, *bounded, *divergent);

    const MetricFamily a = build_separating_family(report.witness, s.ladder);
    const MetricFamily at = family_transpose(a);
    const MetricFamily e = family_compose(at, a, copts);
    report.separator_rule = a.rule;
    report.idempotent_rule = e.rule;

    const MetricFamily mu_s = mu_action(s, e, copts);
    const MetricFamily mu_t = mu_action(t, e, copts);
    for (const auto& p : report.witness.points) {
      report.mu_s_diag.push_back(mu_s.top().cross_at(p.x, p.x));
      report.mu_t_diag.push_back(mu_t.top().cross_at(p.x, p.x));
    }
    report.separation = check_equivalent(mu_s, mu_t, params);
    if (report.separation.combined == VerdictKind::Inconclusive) {
      report.inconclusive = true;
      report.stage = "separation verdict";
      report.ladder_advice = suggest_extension(s.ladder);
    }
  } catch (const InconclusiveError& e) {
    report.inconclusive = true;
    report.stage = e.what();
    report.ladder_advice = suggest_extension(s.ladder);
  }
  return report;
}

}  // namespace coarse
