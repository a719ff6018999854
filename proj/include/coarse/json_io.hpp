#pragma once

#include <string>

#include <json.hpp>

#include "coarse/minplus.hpp"
#include "coarse/order.hpp"
#include "coarse/separation.hpp"

namespace coarse {

// Key order is part of the format; reports and artifacts round-trip
// byte-identically.
using Json = nlohmann::ordered_json;

// {"version":1,"n":...,"scale_denominator":...,"dist":[[...]],"labels":[[...]]?}
Json metric_to_json(const FiniteMetric& m);
FiniteMetric metric_from_json(const Json& j);

// Same plus "cross":[[...]]. Loading does not run clause validation so that
// invalid files can be inspected; assemble or validate explicitly.
struct LoadedDouble {
  FiniteMetric base;
  std::vector<Dist> cross;
};
Json double_to_json(const DoubleMetric& d);
LoadedDouble double_from_json(const Json& j);

// File helpers; canonical bytes are dump(1) + newline.
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
std::string canonical_bytes(const Json& j);

Json report_to_json(const ValidationReport& r);
Json report_to_json(const DoubleValidationReport& r);
Json to_json(const Homeomorphism& phi);
Json to_json(const Witness& w);
Json to_json(const Verdict& v);
Json to_json(const EquivalenceResult& e);
Json to_json(const CorollaryWitness& w);
Json to_json(const SparseWitness& w);
Json to_json(const SeparationBounds& b);
Json to_json(const ExperimentReport& r);
Json to_json(const IdempotencyReport& r);
Json to_json(const BenchReport& r);

std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash_hex(const Json& config);

// {"tool_version","config_hash","command","config",...body,"timings"?}
Json make_report(const std::string& command, const Json& config, Json body,
                 const Json* timings = nullptr);

}  // namespace coarse
