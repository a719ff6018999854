#include "coarse/order.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarse {

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Holds: return "holds";
    case VerdictKind::Fails: return "fails";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::optional<Dist> ControlProfile::at(Dist t) const {
  auto it = std::upper_bound(
      rho.begin(), rho.end(), t,
      [](Dist value, const std::pair<Dist, Dist>& p) { return value < p.first; });
  if (it == rho.begin()) return std::nullopt;
  return std::prev(it)->second;
}

namespace {

void check_same_sizes(const ValueFamily& f, const ValueFamily& g, const char* op) {
  if (f.sizes != g.sizes) {
    throw IncompatibleOperandsError(std::string(op) + ": families live over different ladders");
  }
}

void merge_max(std::map<Dist, Dist>& into, const std::map<Dist, Dist>& from) {
  for (const auto& [key, value] : from) {
    auto [it, inserted] = into.try_emplace(key, value);
    if (!inserted) it->second = std::max(it->second, value);
  }
}

}  // namespace

ControlProfile control_profile(const ValueFamily& f, const ValueFamily& g, int level) {
  check_same_sizes(f, g, "control_profile");
  if (level < 0 || level >= f.depth()) {
    throw InvalidInputError("control_profile: level out of range");
  }
  const auto& fv = f.values[level];
  const auto& gv = g.values[level];
  const long long cells = static_cast<long long>(fv.size());

  // max G per distinct F value; thread-local maps merge under max, which is
  // order-independent, so the profile is deterministic for any thread count.
  std::map<Dist, Dist> max_g;
#ifdef _OPENMP
#pragma omp parallel
  {
    std::map<Dist, Dist> local;
#pragma omp for schedule(static) nowait
    for (long long idx = 0; idx < cells; ++idx) {
      auto [it, inserted] = local.try_emplace(fv[idx], gv[idx]);
      if (!inserted) it->second = std::max(it->second, gv[idx]);
    }
#pragma omp critical
    merge_max(max_g, local);
  }
#else
  for (long long idx = 0; idx < cells; ++idx) {
    auto [it, inserted] = max_g.try_emplace(fv[idx], gv[idx]);
    if (!inserted) it->second = std::max(it->second, gv[idx]);
  }
#endif

  ControlProfile p;
  p.level = level;
  p.rho.reserve(max_g.size());
  Dist running = std::numeric_limits<Dist>::min();
  for (const auto& [t, m] : max_g) {
    running = std::max(running, m);
    p.rho.emplace_back(t, running);
  }
  return p;
}

ControlProfile control_profile(const MetricFamily& f, const MetricFamily& g, int level) {
  if (!(f.ladder == g.ladder)) {
    throw IncompatibleOperandsError("control_profile: families live over different ladders");
  }
  return control_profile(cross_values(f), cross_values(g), level);
}

int Homeomorphism::compare_value(Dist v, Dist t) const {
  const auto& bp = breakpoints;
  if (t >= bp.back().first) {
    const __int128 lhs = static_cast<__int128>(v - bp.back().second) * tail_den;
    const __int128 rhs = static_cast<__int128>(t - bp.back().first) * tail_num;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  auto it = std::upper_bound(
      bp.begin(), bp.end(), t,
      [](Dist value, const std::pair<Dist, Dist>& p) { return value < p.first; });
  const auto [t0, v0] = *std::prev(it);
  const auto [t1, v1] = *it;
  const __int128 lhs = static_cast<__int128>(v - v0) * (t1 - t0);
  const __int128 rhs = static_cast<__int128>(t - t0) * (v1 - v0);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

bool Homeomorphism::well_formed() const {
  if (breakpoints.empty() || breakpoints.front() != std::pair<Dist, Dist>{0, 0}) return false;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i].first <= breakpoints[i - 1].first) return false;
    if (breakpoints[i].second <= breakpoints[i - 1].second) return false;
  }
  return tail_den >= 1 && tail_num >= tail_den;
}

bool witness_invariants_ok(const Witness& w) {
  Dist last_g = std::numeric_limits<Dist>::min();
  int last_level = 0;
  for (const auto& e : w.entries) {
    if (e.f >= w.bound_c) return false;
    if (e.g <= last_g) return false;
    if (e.level < last_level) return false;
    last_g = e.g;
    last_level = e.level;
  }
  return !w.entries.empty();
}

namespace {

// Drops interior breakpoints lying exactly on the segment through their
// neighbours.
void simplify_breakpoints(std::vector<std::pair<Dist, Dist>>& bp) {
  if (bp.size() < 3) return;
  std::vector<std::pair<Dist, Dist>> out;
  out.push_back(bp.front());
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
    const auto& a = out.back();
    const auto& b = bp[i];
    const auto& c = bp[i + 1];
    const __int128 lhs = static_cast<__int128>(b.second - a.second) * (c.first - a.first);
    const __int128 rhs = static_cast<__int128>(b.first - a.first) * (c.second - a.second);
    if (lhs != rhs) out.push_back(b);
  }
  out.push_back(bp.back());
  bp = std::move(out);
}

// Smallest strictly increasing majorant of ascending profile points.
Homeomorphism upper_staircase(const std::vector<std::pair<Dist, Dist>>& pts) {
  Homeomorphism phi;
  phi.breakpoints.emplace_back(0, 0);
  Dist v = 0;
  for (const auto& [t, r] : pts) {
    const Dist next = std::max(r, v + 1);
    phi.breakpoints.emplace_back(t, next);
    v = next;
  }
  simplify_breakpoints(phi.breakpoints);
  return phi;
}

// Staircase under a nondecreasing cap: a breakpoint at the end of each
// equal-value run keeps phi <= cap at every capped position.
Homeomorphism lower_staircase(const std::vector<std::pair<Dist, Dist>>& caps) {
  Homeomorphism phi;
  phi.breakpoints.emplace_back(0, 0);
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (i + 1 < caps.size() && caps[i + 1].second == caps[i].second) continue;
    phi.breakpoints.emplace_back(caps[i].first, caps[i].second);
  }
  simplify_breakpoints(phi.breakpoints);
  return phi;
}

Witness build_witness(const ValueFamily& f, const ValueFamily& g, Dist c) {
  Witness w;
  w.bound_c = c;
  Dist last_g = std::numeric_limits<Dist>::min();
  for (int l = 0; l < f.depth(); ++l) {
    const int n = f.sizes[l];
    const int prev = l > 0 ? f.sizes[l - 1] : 0;
    std::vector<WitnessEntry> candidates;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i < prev && j < prev) continue;  // pair already attributed to an earlier level
        const Dist fv = f.at(l, i, j);
        if (fv < c) candidates.push_back({l, i, j, fv, g.at(l, i, j)});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const WitnessEntry& a, const WitnessEntry& b) {
                if (a.g != b.g) return a.g < b.g;
                if (a.i != b.i) return a.i < b.i;
                return a.j < b.j;
              });
    for (const auto& e : candidates) {
      if (e.g > last_g) {
        w.entries.push_back(e);
        last_g = e.g;
      }
    }
  }
  return w;
}

}  // namespace

Verdict check_controls(const ValueFamily& f, const ValueFamily& g, const OrderParams& params) {
  check_same_sizes(f, g, "check_controls");
  if (params.window < 1) throw InvalidInputError("stability window must be >= 1");
  if (params.divergence_step < 1) throw InvalidInputError("divergence step must be >= 1 quantum");

  const int levels = f.depth();
  Verdict verdict;
  verdict.levels_used = levels;
  if (levels < params.window + 1) {
    verdict.kind = VerdictKind::Inconclusive;
    verdict.reason = "ladder has " + std::to_string(levels) +
                     " levels but the stability window needs " +
                     std::to_string(params.window + 1);
    return verdict;
  }

  const int base = levels - params.window - 1;
  std::vector<ControlProfile> window;
  window.reserve(params.window + 1);
  for (int l = base; l < levels; ++l) window.push_back(control_profile(f, g, l));

  // Thresholds come from the level just below the window; stability compares
  // the last w levels among themselves (the transition into the window gets
  // one free step), divergence must grow across every transition.
  bool all_stable = true;
  Dist first_unstable = -1;
  std::optional<Dist> first_divergent;
  for (const auto& [t, rho0] : window.front().rho) {
    bool stable = true;
    bool divergent = true;
    for (std::size_t s = 0; s + 1 < window.size(); ++s) {
      const auto cur = window[s].at(t);
      const auto next = window[s + 1].at(t);
      if (!cur || !next) {
        stable = false;
        divergent = false;
        break;
      }
      if (s >= 1 && *next != *cur) stable = false;
      if (*next < *cur + params.divergence_step) divergent = false;
    }
    if (!stable && first_unstable < 0) first_unstable = t;
    all_stable = all_stable && stable;
    if (divergent && !first_divergent) first_divergent = t;
  }

  if (all_stable) {
    // Envelope over every observed (F, G) pair of every level, then the
    // smallest strictly increasing majorant.
    std::map<Dist, Dist> env;
    for (int l = 0; l < levels; ++l) {
      const auto p = control_profile(f, g, l);
      for (const auto& [t, r] : p.rho) {
        auto [it, inserted] = env.try_emplace(t, r);
        if (!inserted) it->second = std::max(it->second, r);
      }
    }
    std::vector<std::pair<Dist, Dist>> pts;
    pts.reserve(env.size());
    Dist running = 0;
    for (const auto& [t, r] : env) {
      running = std::max(running, r);
      pts.emplace_back(t, running);
    }
    Homeomorphism phi = upper_staircase(pts);
    for (int l = 0; l < levels; ++l) {
      const auto& fv = f.values[l];
      const auto& gv = g.values[l];
      for (std::size_t idx = 0; idx < fv.size(); ++idx) {
        if (!phi.value_leq(gv[idx], fv[idx])) {
          throw InternalError("Holds certificate failed exact pointwise verification");
        }
      }
    }
    verdict.kind = VerdictKind::Holds;
    verdict.phi = std::move(phi);
    return verdict;
  }

  if (first_divergent) {
    const Dist c = *first_divergent + 1;
    Witness w = build_witness(f, g, c);
    if (static_cast<int>(w.entries.size()) >= params.min_witness_length) {
      if (!witness_invariants_ok(w)) {
        throw InternalError("constructed witness violates its invariants");
      }
      verdict.kind = VerdictKind::Fails;
      verdict.witness = std::move(w);
      return verdict;
    }
    verdict.kind = VerdictKind::Inconclusive;
    verdict.reason = "profile diverges at threshold " + std::to_string(*first_divergent) +
                     " but only " + std::to_string(w.entries.size()) +
                     " witness entries exist (need " + std::to_string(params.min_witness_length) +
                     "); extend the ladder";
    return verdict;
  }

  verdict.kind = VerdictKind::Inconclusive;
  verdict.reason =
      "profiles neither stable nor strictly divergent across the window; first unstable "
      "threshold t=" +
      std::to_string(first_unstable);
  return verdict;
}

Verdict check_controls(const MetricFamily& f, const MetricFamily& g, const OrderParams& params) {
  if (!(f.ladder == g.ladder)) {
    throw IncompatibleOperandsError("check_controls: families live over different ladders");
  }
  return check_controls(cross_values(f), cross_values(g), params);
}

namespace {

VerdictKind combine_equivalence(const Verdict& a, const Verdict& b) {
  if (a.kind == VerdictKind::Fails || b.kind == VerdictKind::Fails) return VerdictKind::Fails;
  if (a.kind == VerdictKind::Holds && b.kind == VerdictKind::Holds) return VerdictKind::Holds;
  return VerdictKind::Inconclusive;
}

}  // namespace

EquivalenceResult check_equivalent(const ValueFamily& f, const ValueFamily& g,
                                   const OrderParams& params) {
  EquivalenceResult r;
  r.forward = check_controls(f, g, params);
  r.backward = check_controls(g, f, params);
  r.combined = combine_equivalence(r.forward, r.backward);
  return r;
}

EquivalenceResult check_equivalent(const MetricFamily& f, const MetricFamily& g,
                                   const OrderParams& params) {
  if (!(f.ladder == g.ladder)) {
    throw IncompatibleOperandsError("check_equivalent: families live over different ladders");
  }
  return check_equivalent(cross_values(f), cross_values(g), params);
}

HomeomorphismBuild build_homeomorphism(const ValueFamily& f, const ValueFamily& g,
                                       const OrderParams& params) {
  check_same_sizes(f, g, "build_homeomorphism");
  HomeomorphismBuild out;

  // Band minima at the top level: z lies in band n iff n-1 <= G(z) <= n.
  const int top = f.depth() - 1;
  const auto& fv = f.values[top];
  const auto& gv = g.values[top];
  std::map<Dist, Dist> kmin;
  for (std::size_t idx = 0; idx < fv.size(); ++idx) {
    for (const Dist band : {gv[idx], gv[idx] + 1}) {
      auto [it, inserted] = kmin.try_emplace(band, fv[idx]);
      if (!inserted) it->second = std::min(it->second, fv[idx]);
    }
  }
  out.bands.reserve(kmin.size());
  for (const auto& [band, k] : kmin) out.bands.push_back({band, k});

  const Verdict analysis = check_controls(f, g, params);
  if (analysis.kind == VerdictKind::Fails) {
    const auto& last = analysis.witness->entries.back();
    out.offending_band = last.g;
    out.failure = "band " + std::to_string(last.g) + " keeps minimum F-value " +
                  std::to_string(last.f) + " < C=" + std::to_string(analysis.witness->bound_c) +
                  " while bands grow; the band minima do not diverge";
    return out;
  }
  if (analysis.kind == VerdictKind::Inconclusive) {
    out.failure = "band hypothesis not established: " + analysis.reason;
    return out;
  }

  // phi(n) <= min{k_m : m >= n, band observed} - 1, clamped positive, run-end
  // staircase for strict monotonicity.
  std::vector<std::pair<Dist, Dist>> caps;
  caps.reserve(out.bands.size());
  Dist tail = std::numeric_limits<Dist>::max();
  std::vector<Dist> tail_min(out.bands.size());
  for (std::size_t i = out.bands.size(); i-- > 0;) {
    tail = std::min(tail, out.bands[i].k_min);
    tail_min[i] = tail;
  }
  for (std::size_t i = 0; i < out.bands.size(); ++i) {
    caps.emplace_back(out.bands[i].band, std::max<Dist>(tail_min[i] - 1, 1));
  }

  Homeomorphism phi = lower_staircase(caps);
  for (std::size_t idx = 0; idx < fv.size(); ++idx) {
    if (!phi.value_geq(fv[idx], gv[idx])) {
      throw InternalError("band staircase failed exact pointwise verification");
    }
  }
  out.phi = std::move(phi);
  return out;
}

HomeomorphismBuild build_homeomorphism(const MetricFamily& f, const MetricFamily& g,
                                       const OrderParams& params) {
  if (!(f.ladder == g.ladder)) {
    throw IncompatibleOperandsError("build_homeomorphism: families live over different ladders");
  }
  return build_homeomorphism(cross_values(f), cross_values(g), params);
}

IdempotencyReport is_idempotent(const MetricFamily& f, const ComposeOptions& copts,
                                const OrderParams& params) {
  IdempotencyReport report;
  const MetricFamily square = family_compose(f, f, copts);
  report.square_vs_self = check_equivalent(square, f, params);
  report.self_adjoint = check_equivalent(f, family_transpose(f), params);
  if (report.square_vs_self.combined == VerdictKind::Fails ||
      report.self_adjoint.combined == VerdictKind::Fails) {
    report.verdict = VerdictKind::Fails;
  } else if (report.square_vs_self.combined == VerdictKind::Holds &&
             report.self_adjoint.combined == VerdictKind::Holds) {
    report.verdict = VerdictKind::Holds;
  } else {
    report.verdict = VerdictKind::Inconclusive;
  }
  return report;
}

}  // namespace coarse
