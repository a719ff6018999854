#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coarse/config.hpp"
#include "coarse/json_io.hpp"
#include "coarse/separation.hpp"
#include "coarse/version.hpp"

namespace {

using coarse::Json;

// Exit contract: 0 holds/equivalent/valid/success, 2 fails/not-equivalent,
// 3 inconclusive, 1 usage or IO errors.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFails = 2;
constexpr int kExitInconclusive = 3;

int verdict_exit(coarse::VerdictKind kind) {
  switch (kind) {
    case coarse::VerdictKind::Holds: return kExitOk;
    case coarse::VerdictKind::Fails: return kExitFails;
    case coarse::VerdictKind::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

struct Output {
  std::string path;  // empty = stdout
  bool timings = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const std::string& command, const Json& config, Json body) {
    std::optional<Json> timing_json;
    if (timings) {
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      timing_json = Json{{"wall_ms", ms}};
    }
    const Json report = coarse::make_report(command, config, std::move(body),
                                            timing_json ? &*timing_json : nullptr);
    if (path.empty()) {
      std::cout << coarse::canonical_bytes(report);
    } else {
      coarse::save_json_file(path, report);
    }
  }
};

coarse::OrderParams order_params(int window, std::int64_t step, int min_witness) {
  coarse::OrderParams p;
  p.window = window;
  p.divergence_step = step;
  p.min_witness_length = min_witness;
  return p;
}

Json order_options_json(const coarse::OrderParams& p, coarse::Dist penalty = -1) {
  Json j;
  j["window"] = p.window;
  j["divergence_step"] = p.divergence_step;
  j["min_witness_length"] = p.min_witness_length;
  if (penalty >= 0) j["penalty"] = penalty;
  return j;
}

void require_same_ladder(const coarse::FamilyConfig& a, const coarse::FamilyConfig& b) {
  if (!(a.ladder() == b.ladder())) {
    throw coarse::IncompatibleOperandsError(
        "the two family configs must use the same space and level sizes");
  }
}

std::vector<coarse::Dist> parse_coords(const std::string& csv) {
  std::vector<coarse::Dist> out;
  if (csv.empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw coarse::ConfigError("coordinate list: '" + item + "' is not an integer");
    }
  }
  return out;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<coarse::Dist>>& columns) {
  std::ofstream out(path);
  if (!out) throw coarse::IoError("cannot write " + path);
  out << header << "\n";
  if (columns.empty()) return;
  for (std::size_t r = 0; r < columns[0].size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ",";
      out << columns[c][r];
    }
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse: exact min-plus composition and coarse-order oracles for double metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", coarse::kToolVersion);

  Output output;
  app.add_flag("--timings", output.timings, "include wall-clock timings in the report");

  // validate
  std::string validate_file;
  bool validate_double = false;
  auto* cmd_validate = app.add_subcommand("validate", "check the metric axioms of a JSON file");
  cmd_validate->add_option("file", validate_file, "metric or double-metric JSON")->required();
  cmd_validate->add_flag("--double", validate_double, "validate the cross block clauses too");

  // compose
  std::string compose_a, compose_b, compose_out;
  std::int64_t compose_penalty = 0;
  auto* cmd_compose = app.add_subcommand("compose", "min-plus composition of two doubles");
  cmd_compose->add_option("a", compose_a)->required();
  cmd_compose->add_option("b", compose_b)->required();
  cmd_compose->add_option("--penalty", compose_penalty, "quanta added per junction");
  cmd_compose->add_option("-o,--out", compose_out, "output JSON path");

  // shared order options
  int opt_window = 3;
  std::int64_t opt_step = 1;
  int opt_min_witness = 6;
  std::int64_t opt_penalty = 0;
  auto add_order_options = [&](CLI::App* cmd) {
    cmd->add_option("--window", opt_window, "stability window (levels compared: window+1)");
    cmd->add_option("--step", opt_step, "minimum per-level growth for divergence");
    cmd->add_option("--min-witness", opt_min_witness, "minimum witness length");
  };

  std::string family_f, family_g, report_out;
  auto* cmd_order = app.add_subcommand("check-order", "decide controls(F |- G) with certificates");
  cmd_order->add_option("F", family_f)->required();
  cmd_order->add_option("G", family_g)->required();
  add_order_options(cmd_order);
  cmd_order->add_option("-o,--out", report_out);

  auto* cmd_equiv = app.add_subcommand("check-equiv", "decide coarse equivalence of F and G");
  cmd_equiv->add_option("F", family_f)->required();
  cmd_equiv->add_option("G", family_g)->required();
  add_order_options(cmd_equiv);
  cmd_equiv->add_option("-o,--out", report_out);

  bool witness_sparse = false;
  auto* cmd_witness = app.add_subcommand("witness", "extract a divergence witness for B, C");
  cmd_witness->add_option("B", family_f)->required();
  cmd_witness->add_option("C", family_g)->required();
  cmd_witness->add_flag("--sparse", witness_sparse, "also sparsify the witness");
  add_order_options(cmd_witness);
  cmd_witness->add_option("-o,--out", report_out);

  std::string csv_out;
  auto* cmd_lemma = app.add_subcommand("lemma-main",
                                       "separator bounds for the triple products ABA*, ACA*");
  cmd_lemma->add_option("B", family_f)->required();
  cmd_lemma->add_option("C", family_g)->required();
  cmd_lemma->add_option("--penalty", opt_penalty, "quanta added per junction");
  add_order_options(cmd_lemma);
  cmd_lemma->add_option("--emit-csv", csv_out, "dump per-point diagonals as CSV");
  cmd_lemma->add_option("-o,--out", report_out);

  auto* cmd_fund = app.add_subcommand("fundamentality",
                                      "separate two classes through the idempotent action");
  cmd_fund->add_option("S", family_f)->required();
  cmd_fund->add_option("T", family_g)->required();
  cmd_fund->add_option("--penalty", opt_penalty, "quanta added per junction");
  add_order_options(cmd_fund);
  cmd_fund->add_option("--emit-csv", csv_out, "dump per-point mu diagonals as CSV");
  cmd_fund->add_option("-o,--out", report_out);

  std::string dsl_text, dsl_x, dsl_y;
  std::int64_t dsl_dxy = 0;
  auto* cmd_dsl = app.add_subcommand("eval-dsl", "evaluate a cross formula at one pair");
  cmd_dsl->add_option("expr", dsl_text)->required();
  cmd_dsl->add_option("--x", dsl_x, "x coordinates, comma separated");
  cmd_dsl->add_option("--y", dsl_y, "y coordinates, comma separated");
  cmd_dsl->add_option("--dxy", dsl_dxy, "base distance between the points");

  int bench_n = 512, bench_threads = 4;
  std::uint64_t bench_seed = 1;
  auto* cmd_bench = app.add_subcommand("bench", "time the min-plus kernel, serial vs parallel");
  cmd_bench->add_option("--n", bench_n);
  cmd_bench->add_option("--threads", bench_threads);
  cmd_bench->add_option("--seed", bench_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  output.path = report_out;

  try {
    if (cmd_validate->parsed()) {
      const Json j = coarse::load_json_file(validate_file);
      Json config{{"file", validate_file}, {"double", validate_double}};
      Json body;
      bool ok = false;
      if (validate_double) {
        const auto loaded = coarse::double_from_json(j);
        const auto base_report = coarse::validate_metric(loaded.base);
        const auto cross_report = coarse::validate_double(loaded.base, loaded.cross);
        ok = base_report.ok && cross_report.ok;
        body["verdict"] = ok ? "valid" : "invalid";
        body["base"] = coarse::report_to_json(base_report);
        body["cross"] = coarse::report_to_json(cross_report);
      } else {
        const auto metric = coarse::metric_from_json(j);
        const auto report = coarse::validate_metric(metric);
        ok = report.ok;
        body["verdict"] = ok ? "valid" : "invalid";
        body["report"] = coarse::report_to_json(report);
      }
      output.emit("validate", config, std::move(body));
      return ok ? kExitOk : kExitFails;
    }

    if (cmd_compose->parsed()) {
      const auto la = coarse::double_from_json(coarse::load_json_file(compose_a));
      const auto lb = coarse::double_from_json(coarse::load_json_file(compose_b));
      const auto da = coarse::assemble_double(la.base, la.cross);
      const auto db = coarse::assemble_double(lb.base, lb.cross);
      const coarse::ComposeOptions opts{compose_penalty};
      const auto composed = coarse::compose(da, db, opts);
      const Json out_json = coarse::double_to_json(composed);
      if (compose_out.empty()) {
        std::cout << coarse::canonical_bytes(out_json);
      } else {
        coarse::save_json_file(compose_out, out_json);
      }
      return kExitOk;
    }

    const auto params = order_params(opt_window, opt_step, opt_min_witness);

    if (cmd_order->parsed() || cmd_equiv->parsed()) {
      const auto cf = coarse::load_family_config(family_f);
      const auto cg = coarse::load_family_config(family_g);
      require_same_ladder(cf, cg);
      const auto f = coarse::build_family(cf);
      const auto g = coarse::build_family(cg);
      Json config{{"F", coarse::config_to_json(cf)},
                  {"G", coarse::config_to_json(cg)},
                  {"options", order_options_json(params)}};
      if (cmd_order->parsed()) {
        const auto verdict = coarse::check_controls(f, g, params);
        output.emit("check-order", config, coarse::to_json(verdict));
        return verdict_exit(verdict.kind);
      }
      const auto eq = coarse::check_equivalent(f, g, params);
      output.emit("check-equiv", config, coarse::to_json(eq));
      return verdict_exit(eq.combined);
    }

    if (cmd_witness->parsed()) {
      const auto cb = coarse::load_family_config(family_f);
      const auto cc = coarse::load_family_config(family_g);
      require_same_ladder(cb, cc);
      const auto b = coarse::build_family(cb);
      const auto c = coarse::build_family(cc);
      Json config{{"B", coarse::config_to_json(cb)},
                  {"C", coarse::config_to_json(cc)},
                  {"options", order_options_json(params)}};
      const auto raw = coarse::extract_witness(b, c, params);
      Json body = coarse::to_json(raw);
      if (witness_sparse) {
        body["sparse"] = coarse::to_json(coarse::sparsify_witness(raw.witness, b, c));
      }
      output.emit("witness", config, std::move(body));
      return kExitOk;
    }

    if (cmd_lemma->parsed()) {
      const auto cb = coarse::load_family_config(family_f);
      const auto cc = coarse::load_family_config(family_g);
      require_same_ladder(cb, cc);
      const auto b = coarse::build_family(cb);
      const auto c = coarse::build_family(cc);
      const coarse::ComposeOptions copts{opt_penalty};
      Json config{{"B", coarse::config_to_json(cb)},
                  {"C", coarse::config_to_json(cc)},
                  {"options", order_options_json(params, opt_penalty)}};
      const auto bounds = coarse::verify_lemma_main(b, c, params, copts);
      if (!csv_out.empty()) {
        std::vector<coarse::Dist> ks, xs;
        for (std::size_t k = 0; k < bounds.witness.points.size(); ++k) {
          ks.push_back(static_cast<coarse::Dist>(k + 1));
          xs.push_back(bounds.witness.points[k].x);
        }
        write_csv(csv_out, "k,x,diag_aba,diag_aca,diag_bound",
                  {ks, xs, bounds.diag_aba, bounds.diag_aca, bounds.diag_bound});
      }
      output.emit("lemma-main", config, coarse::to_json(bounds));
      return bounds.bounds_ok ? kExitOk : kExitFails;
    }

    if (cmd_fund->parsed()) {
      const auto cs = coarse::load_family_config(family_f);
      const auto ct = coarse::load_family_config(family_g);
      require_same_ladder(cs, ct);
      const auto s = coarse::build_family(cs);
      const auto t = coarse::build_family(ct);
      const coarse::ComposeOptions copts{opt_penalty};
      Json config{{"S", coarse::config_to_json(cs)},
                  {"T", coarse::config_to_json(ct)},
                  {"options", order_options_json(params, opt_penalty)}};
      const auto report = coarse::fundamentality_experiment(s, t, params, copts);
      if (!csv_out.empty() && !report.inconclusive) {
        std::vector<coarse::Dist> ks, xs;
        for (std::size_t k = 0; k < report.witness.points.size(); ++k) {
          ks.push_back(static_cast<coarse::Dist>(k + 1));
          xs.push_back(report.witness.points[k].x);
        }
        write_csv(csv_out, "k,x,mu_s_diag,mu_t_diag", {ks, xs, report.mu_s_diag, report.mu_t_diag});
      }
      output.emit("fundamentality", config, coarse::to_json(report));
      if (report.inconclusive) return kExitInconclusive;
      return report.separation.combined == coarse::VerdictKind::Fails ? kExitFails : kExitOk;
    }

    if (cmd_dsl->parsed()) {
      const auto expr = coarse::parse_cross_expr(dsl_text);
      const auto xs = parse_coords(dsl_x);
      const auto ys = parse_coords(dsl_y);
      const coarse::Dist v = coarse::eval_cross_expr(expr, xs, ys, dsl_dxy);
      std::cout << v << "\n";
      return kExitOk;
    }

    if (cmd_bench->parsed()) {
      const auto report = coarse::bench_minplus(bench_n, bench_threads, bench_seed);
      Json config{{"n", bench_n}, {"threads", bench_threads}, {"seed", bench_seed}};
      output.emit("bench", config, coarse::to_json(report));
      return report.checksums_match ? kExitOk : kExitFails;
    }
  } catch (const coarse::InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const coarse::DoubleValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << coarse::canonical_bytes(coarse::report_to_json(e.report));
    return kExitError;
  } catch (const coarse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
