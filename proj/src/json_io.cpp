#include "coarse/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "coarse/version.hpp"

namespace coarse {

namespace {

Dist int_field(const Json& j, const char* key, Dist lo, Dist hi) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw IoError(std::string("missing or non-integer field '") + key + "'");
  }
  const Dist v = j[key].get<Dist>();
  if (v < lo || v > hi) {
    throw IoError(std::string("field '") + key + "' out of range: " + std::to_string(v));
  }
  return v;
}

std::vector<Dist> int_row(const Json& row, std::size_t want, Dist lo, Dist hi, const char* what) {
  if (!row.is_array() || row.size() != want) {
    throw IoError(std::string(what) + ": expected a row of " + std::to_string(want) + " integers");
  }
  std::vector<Dist> out;
  out.reserve(want);
  for (const auto& cell : row) {
    if (!cell.is_number_integer()) {
      throw IoError(std::string(what) + ": non-integer entry");
    }
    const Dist v = cell.get<Dist>();
    if (v < lo || v > hi) {
      throw IoError(std::string(what) + ": entry " + std::to_string(v) + " out of range");
    }
    out.push_back(v);
  }
  return out;
}

Json matrix_json(const std::vector<Dist>& flat, int n, int m) {
  Json rows = Json::array();
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m; ++j) row.push_back(flat[static_cast<std::size_t>(i) * m + j]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json metric_to_json(const FiniteMetric& m) {
  Json j;
  j["version"] = kSchemaVersion;
  j["n"] = m.n;
  j["scale_denominator"] = m.scale_denominator;
  j["dist"] = matrix_json(m.dist, m.n, m.n);
  if (m.has_labels()) j["labels"] = matrix_json(m.labels, m.n, m.label_dim);
  return j;
}

FiniteMetric metric_from_json(const Json& j) {
  if (!j.is_object()) throw IoError("metric file: expected a JSON object");
  const Dist version = int_field(j, "version", 0, 1 << 20);
  if (version != kSchemaVersion) {
    throw IoError("unsupported schema version " + std::to_string(version));
  }
  FiniteMetric m;
  m.n = static_cast<int>(int_field(j, "n", 1, 1 << 20));
  m.scale_denominator = int_field(j, "scale_denominator", 1, kMaxQuanta);
  if (!j.contains("dist") || !j["dist"].is_array() ||
      j["dist"].size() != static_cast<std::size_t>(m.n)) {
    throw IoError("metric file: 'dist' must be an n x n matrix");
  }
  m.dist.reserve(static_cast<std::size_t>(m.n) * m.n);
  for (const auto& row : j["dist"]) {
    auto vals = int_row(row, m.n, 0, kMaxQuanta, "dist");
    m.dist.insert(m.dist.end(), vals.begin(), vals.end());
  }
  if (j.contains("labels")) {
    const auto& labels = j["labels"];
    if (!labels.is_array() || labels.size() != static_cast<std::size_t>(m.n) ||
        labels.empty() || !labels[0].is_array() || labels[0].empty() || labels[0].size() > 4) {
      throw IoError("metric file: 'labels' must be n rows of 1..4 integers");
    }
    m.label_dim = static_cast<int>(labels[0].size());
    for (const auto& row : labels) {
      auto vals = int_row(row, m.label_dim, -kMaxQuanta, kMaxQuanta, "labels");
      m.labels.insert(m.labels.end(), vals.begin(), vals.end());
    }
  }
  return m;
}

Json double_to_json(const DoubleMetric& d) {
  Json j = metric_to_json(*d.base);
  j["cross"] = matrix_json(d.cross, d.n(), d.n());
  return j;
}

LoadedDouble double_from_json(const Json& j) {
  LoadedDouble out;
  out.base = metric_from_json(j);
  if (!j.contains("cross") || !j["cross"].is_array() ||
      j["cross"].size() != static_cast<std::size_t>(out.base.n)) {
    throw IoError("double file: 'cross' must be an n x n matrix");
  }
  for (const auto& row : j["cross"]) {
    auto vals = int_row(row, out.base.n, 0, kMaxQuanta, "cross");
    out.cross.insert(out.cross.end(), vals.begin(), vals.end());
  }
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError("invalid JSON in " + path);
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << canonical_bytes(j);
}

std::string canonical_bytes(const Json& j) { return j.dump(1) + "\n"; }

Json report_to_json(const ValidationReport& r) {
  Json j;
  j["ok"] = r.ok;
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    Json e;
    e["kind"] = to_string(v.kind);
    e["i"] = v.i;
    e["j"] = v.j;
    if (v.kind == MetricViolationKind::Triangle) e["k"] = v.k;
    e["lhs"] = v.lhs;
    e["rhs"] = v.rhs;
    vs.push_back(std::move(e));
    if (vs.size() >= 100) break;
  }
  j["violation_count"] = r.violations.size();
  j["violations"] = std::move(vs);
  return j;
}

Json report_to_json(const DoubleValidationReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["violation_count"] = r.violation_count;
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    Json e;
    e["clause"] = to_string(v.kind);
    e["i"] = v.i;
    e["j"] = v.j;
    if (v.kind != DoubleViolationKind::Floor) e["k"] = v.k;
    e["lhs"] = v.lhs;
    e["rhs"] = v.rhs;
    vs.push_back(std::move(e));
  }
  j["violations"] = std::move(vs);
  return j;
}

Json to_json(const Homeomorphism& phi) {
  Json j;
  Json bps = Json::array();
  for (const auto& [t, v] : phi.breakpoints) bps.push_back(Json::array({t, v}));
  j["breakpoints"] = std::move(bps);
  j["tail_slope"] = Json::array({phi.tail_num, phi.tail_den});
  return j;
}

Json to_json(const Witness& w) {
  Json j;
  j["bound_C"] = w.bound_c;
  Json entries = Json::array();
  for (const auto& e : w.entries) {
    Json row;
    row["level"] = e.level;
    row["i"] = e.i;
    row["j"] = e.j;
    row["f"] = e.f;
    row["g"] = e.g;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["verdict"] = to_string(v.kind);
  if (v.phi) j["certificate"] = to_json(*v.phi);
  if (v.witness) j["witness"] = to_json(*v.witness);
  if (!v.reason.empty()) j["reason"] = v.reason;
  j["levels_used"] = v.levels_used;
  return j;
}

Json to_json(const EquivalenceResult& e) {
  Json j;
  const char* combined = e.combined == VerdictKind::Holds          ? "equivalent"
                         : e.combined == VerdictKind::Fails        ? "not_equivalent"
                                                                   : "inconclusive";
  j["verdict"] = combined;
  j["forward"] = to_json(e.forward);
  j["backward"] = to_json(e.backward);
  return j;
}

Json to_json(const CorollaryWitness& w) {
  Json j = to_json(w.witness);
  j["x_reach"] = w.x_reach;
  j["y_reach"] = w.y_reach;
  j["x_unbounded"] = w.x_unbounded;
  j["y_unbounded"] = w.y_unbounded;
  if (!w.contradiction.empty()) j["contradiction"] = w.contradiction;
  return j;
}

Json to_json(const SparseWitness& w) {
  Json j;
  j["bound_C"] = w.bound_c;
  j["separation_checked"] = w.separation_checked;
  Json pts = Json::array();
  for (const auto& p : w.points) {
    Json row;
    row["x"] = p.x;
    row["y"] = p.y;
    row["level"] = p.level;
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  return j;
}

Json to_json(const SeparationBounds& b) {
  Json j;
  j["bound_C"] = b.bound_c;
  j["penalty"] = b.penalty;
  j["witness"] = to_json(b.witness);
  j["diag_aba"] = b.diag_aba;
  j["diag_aca"] = b.diag_aca;
  j["diag_bound"] = b.diag_bound;
  j["sup_diag_aba"] = b.sup_diag_aba;
  j["sup_bound"] = b.sup_bound;
  j["divergence_floor"] = b.divergence_floor;
  j["diag_aba_bounded"] = b.diag_aba_bounded;
  j["diag_aca_diverges"] = b.diag_aca_diverges;
  j["pointwise_dominance"] = Json::array({b.dominance_num, b.dominance_den});
  j["equivalence_verdict"] = to_json(b.equivalence);
  j["bounds_ok"] = b.bounds_ok;
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  if (r.inconclusive) {
    j["verdict"] = "inconclusive";
    j["stage"] = r.stage;
    j["ladder_advice"] = r.ladder_advice;
    if (!r.failing_direction.empty()) j["failing_direction"] = r.failing_direction;
    return j;
  }
  j["verdict"] = r.separation.combined == VerdictKind::Fails ? "separated" : "not_separated";
  j["failing_direction"] = r.failing_direction;
  j["witness"] = to_json(r.raw_witness);
  j["sparse_witness"] = to_json(r.witness);
  j["separator"] = r.separator_rule;
  j["idempotent_e"] = r.idempotent_rule;
  j["mu_s_diag"] = r.mu_s_diag;
  j["mu_t_diag"] = r.mu_t_diag;
  j["separation_verdict"] = to_json(r.separation);
  return j;
}

Json to_json(const IdempotencyReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["square_vs_self"] = to_json(r.square_vs_self);
  j["self_adjoint"] = to_json(r.self_adjoint);
  return j;
}

Json to_json(const BenchReport& r) {
  Json j;
  j["n"] = r.n;
  j["threads"] = r.threads;
  j["serial_ms"] = r.serial_ms;
  j["parallel_ms"] = r.parallel_ms;
  j["speedup"] = r.speedup;
  j["ns_per_op"] = r.ns_per_op;
  std::ostringstream cs, cp;
  cs << std::hex << std::setw(16) << std::setfill('0') << r.checksum_serial;
  cp << std::hex << std::setw(16) << std::setfill('0') << r.checksum_parallel;
  j["checksum_serial"] = cs.str();
  j["checksum_parallel"] = cp.str();
  j["checksums_match"] = r.checksums_match;
  return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const Json& config) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config.dump());
  return os.str();
}

Json make_report(const std::string& command, const Json& config, Json body,
                 const Json* timings) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = config_hash_hex(config);
  j["command"] = command;
  j["config"] = config;
  for (auto& [key, value] : body.items()) j[key] = value;
  if (timings) j["timings"] = *timings;
  return j;
}

}  // namespace coarse
