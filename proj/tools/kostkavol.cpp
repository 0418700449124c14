// Command line front end. Subcommands:
//   estimate  full certified pipeline, bracket in the output record
//   bounds    conditioning record only, no optimization
//   oracle    exact desk-scale references (counts, volumes, probes)
//   certify   estimate plus oracle, exits nonzero unless the bracket
//             provably contains the exact volume
// Exit codes: 0 ok, 2 parse, 3 degenerate, 4 boundary, 5 resource,
// 6 certification failure. Records are deterministic; timing goes to
// stderr so stdout stays byte-stable across runs.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kostka/io.hpp"
#include "kostka/oracle.hpp"

namespace {

using kostka::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitBoundary = 4;
constexpr int kExitResource = 5;
constexpr int kExitCertify = 6;

void emit(const ordered_json& record, const kostka::RunConfig& cfg) {
  std::cout << kostka::render_output(record, cfg);
}

ordered_json zero_pair() { return kostka::number_pair(kostka::Rational(0)); }

// Shared estimate pipeline. Fills the record progressively so partial
// results survive a mid-pipeline error; returns the exit code and, on
// success, the assembled bracket through `out`.
int run_estimate_into(const kostka::Instance& inst, const kostka::RunConfig& cfg,
                      ordered_json& rec, kostka::VolumeBracket* out,
                      kostka::NormalizedInstance* ni_out) {
  rec["instance"] = kostka::render_instance(inst);
  try {
    kostka::NormalizedInstance ni = kostka::normalize(inst);
    rec["normalization"] = kostka::render_normalization(ni);
    kostka::ObjectiveContext ctx = kostka::make_objective_context(ni, cfg.precision_bit_cap);
    rec["conditioning"] = kostka::render_conditioning(ctx.record);
    kostka::OptConfig oc;
    oc.eps_opt = cfg.eps_opt;
    oc.precision_bit_cap = cfg.precision_bit_cap;
    oc.max_domain_doublings = cfg.max_domain_doublings;
    oc.max_iterations = cfg.max_iterations;
    kostka::OptimizationResult opt = kostka::minimize(ctx, oc);
    rec["optimization"] = kostka::render_optimization(opt);
    kostka::VolumeBracket bracket =
        kostka::assemble_bracket(ni, ctx.record, opt, cfg.postnikov_threshold, cfg.delta_eval);
    rec["bracket"] = kostka::render_bracket(bracket);
    rec["status"] = "ok";
    if (out) *out = bracket;
    if (ni_out) *ni_out = ni;
    return kExitOk;
  } catch (const kostka::degenerate_error& e) {
    // Repeated spectrum values: the polytope is lower-dimensional and
    // its volume is exactly zero.
    ordered_json bracket;
    bracket["lower"] = zero_pair();
    bracket["upper_finite"] = true;
    bracket["upper"] = zero_pair();
    rec["bracket"] = bracket;
    rec["status"] = "degenerate";
    rec["message"] = e.what();
    return kExitDegenerate;
  } catch (const kostka::boundary_error& e) {
    // Weight on the permutohedron boundary: zero interiority margin,
    // so only the trivial lower bound survives.
    ordered_json bracket;
    bracket["lower"] = zero_pair();
    bracket["upper_finite"] = false;
    bracket["upper"] = nullptr;
    bracket["epsilon_zero"] = true;
    rec["bracket"] = bracket;
    rec["status"] = "boundary";
    rec["message"] = e.what();
    return kExitBoundary;
  } catch (const kostka::resource_error& e) {
    rec["status"] = "resource";
    rec["message"] = e.what();
    return kExitResource;
  }
}

int cmd_estimate(const std::string& file, const kostka::RunConfig& cfg) {
  kostka::Instance inst = kostka::parse_instance_file(file);
  ordered_json rec;
  rec["schema"] = 1;
  rec["command"] = "estimate";
  int code = run_estimate_into(inst, cfg, rec, nullptr, nullptr);
  emit(rec, cfg);
  return code;
}

int cmd_bounds(const std::string& file, const kostka::RunConfig& cfg) {
  kostka::Instance inst = kostka::parse_instance_file(file);
  ordered_json rec;
  rec["schema"] = 1;
  rec["command"] = "bounds";
  rec["instance"] = kostka::render_instance(inst);
  int code = kExitOk;
  try {
    kostka::NormalizedInstance ni = kostka::normalize(inst);
    rec["normalization"] = kostka::render_normalization(ni);
    rec["conditioning"] = kostka::render_conditioning(kostka::compute_conditioning(ni));
    rec["status"] = "ok";
  } catch (const kostka::degenerate_error& e) {
    rec["status"] = "degenerate";
    rec["message"] = e.what();
    code = kExitDegenerate;
  } catch (const kostka::boundary_error& e) {
    rec["status"] = "boundary";
    rec["message"] = e.what();
    code = kExitBoundary;
  }
  emit(rec, cfg);
  return code;
}

int cmd_oracle(const std::string& file, const std::string& kind, unsigned long N,
               unsigned steps, const kostka::RunConfig& cfg) {
  kostka::Instance inst = kostka::parse_instance_file(file);
  ordered_json rec;
  rec["schema"] = 1;
  rec["command"] = "oracle";
  rec["kind"] = kind;
  rec["instance"] = kostka::render_instance(inst);
  if (kind == "kostka") {
    rec["kostka_count"] = kostka::kostka_count(inst.lambda, inst.mu).str();
  } else if (kind == "volume") {
    kostka::ExactKostkaVolume vo = kostka::exact_kostka_volume(inst, cfg.oracle_dim_cap);
    rec["vtilde"] = kostka::number_pair(vo.vtilde);
    rec["v"] = kostka::interval_json(vo.v);
  } else if (kind == "scaling") {
    rec["N"] = N;
    rec["density"] = kostka::number_pair(kostka::scaling_limit(inst, N));
  } else if (kind == "logconcavity") {
    kostka::Weight mu2 = kostka::parse_mu2_or_center(file, inst);
    kostka::LogConcavityReport rep =
        kostka::logconcavity_probe(inst.lambda, inst.mu, mu2, steps, cfg.oracle_dim_cap);
    ordered_json r;
    r["holds"] = rep.holds;
    r["checked"] = rep.checked;
    r["worst_margin"] = kostka::number_pair(rep.worst_margin);
    rec["logconcavity"] = r;
  } else {
    throw kostka::input_error("oracle: unknown kind " + kind);
  }
  rec["status"] = "ok";
  emit(rec, cfg);
  return kExitOk;
}

int cmd_certify(const std::string& file, const kostka::RunConfig& cfg) {
  kostka::Instance inst = kostka::parse_instance_file(file);
  ordered_json rec;
  rec["schema"] = 1;
  rec["command"] = "certify";

  // Oracle first: an oversized instance should fail on resources before
  // any minimization effort is spent.
  kostka::ExactKostkaVolume vo = kostka::exact_kostka_volume(inst, cfg.oracle_dim_cap);

  kostka::VolumeBracket bracket;
  kostka::NormalizedInstance ni;
  int code = run_estimate_into(inst, cfg, rec, &bracket, &ni);
  ordered_json ora;
  ora["vtilde"] = kostka::number_pair(vo.vtilde);
  ora["v"] = kostka::interval_json(vo.v);
  rec["oracle"] = ora;
  if (code != kExitOk) {
    emit(rec, cfg);
    return code;
  }

  bool contained = bracket.upper_finite && bracket.lower <= vo.v.lo && vo.v.hi <= bracket.upper;

  // Diagnostic: certified log-ratio against the coarse growth envelope
  // n (11/2 log n + 2 log lambda_1 + 12) of the normalized spectrum.
  const kostka::Rational nn = kostka::Rational(kostka::Integer(inst.n()));
  kostka::Rational ln_n = kostka::log_interval(nn, cfg.delta_eval).hi;
  kostka::Rational ln_l1 = kostka::log_interval(ni.lambda.parts[0], cfg.delta_eval).hi;
  kostka::Rational envelope = nn * (kostka::Rational(11, 2) * ln_n + 2 * ln_l1 + 12);

  ordered_json cert;
  cert["pass"] = contained;
  cert["ratio_log"] = kostka::interval_json(bracket.approximation_ratio_log);
  cert["ratio_envelope"] = kostka::number_pair(envelope, +1);
  cert["within_envelope"] = bracket.approximation_ratio_log.hi <= envelope;
  rec["certify"] = cert;
  rec["status"] = contained ? "ok" : "certify-fail";
  emit(rec, cfg);
  return contained ? kExitOk : kExitCertify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified volume brackets for Kostka polytopes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, eps_opt_s, delta_s, format_s;
  long bit_cap = 0;
  app.add_option("--config", config_path, "JSON config file")->envname("KOSTKAVOL_CONFIG");
  app.add_option("--eps-opt", eps_opt_s, "optimization gap tolerance (rational)");
  app.add_option("--delta", delta_s, "evaluation tolerance (rational)");
  app.add_option("--bit-cap", bit_cap, "precision ladder bit cap");
  app.add_option("--format", format_s, "output format: json or csv");

  std::string file_est, file_bnd, file_ora, file_cert;
  auto* est = app.add_subcommand("estimate", "certified volume bracket");
  est->add_option("file", file_est, "instance JSON file")->required();
  auto* bnd = app.add_subcommand("bounds", "conditioning record only");
  bnd->add_option("file", file_bnd, "instance JSON file")->required();
  auto* ora = app.add_subcommand("oracle", "exact desk-scale references");
  ora->add_option("file", file_ora, "instance JSON file")->required();
  std::string kind;
  unsigned long scaling_n = 16;
  unsigned lc_steps = 8;
  ora->add_option("--kind", kind, "kostka | volume | scaling | logconcavity")->required();
  ora->add_option("--N", scaling_n, "dilation factor for --kind=scaling");
  ora->add_option("--steps", lc_steps, "segment points for --kind=logconcavity");
  auto* cert = app.add_subcommand("certify", "estimate and oracle cross-check");
  cert->add_option("file", file_cert, "instance JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? kExitOk : kExitParse;
  }

  auto started = std::chrono::steady_clock::now();
  int code = kExitOk;
  kostka::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = kostka::load_config_file(config_path);
    if (!eps_opt_s.empty()) cfg.eps_opt = kostka::parse_rational(eps_opt_s);
    if (!delta_s.empty()) cfg.delta_eval = kostka::parse_rational(delta_s);
    if (bit_cap > 0) cfg.precision_bit_cap = bit_cap;
    if (!format_s.empty()) cfg.output_format = format_s;
    cfg.validate();

    if (est->parsed())
      code = cmd_estimate(file_est, cfg);
    else if (bnd->parsed())
      code = cmd_bounds(file_bnd, cfg);
    else if (ora->parsed())
      code = cmd_oracle(file_ora, kind, scaling_n, lc_steps, cfg);
    else
      code = cmd_certify(file_cert, cfg);
  } catch (const kostka::input_error& e) {
    ordered_json rec;
    rec["schema"] = 1;
    rec["status"] = "parse-error";
    rec["message"] = e.what();
    emit(rec, cfg);
    code = kExitParse;
  } catch (const kostka::resource_error& e) {
    ordered_json rec;
    rec["schema"] = 1;
    rec["status"] = "resource";
    rec["message"] = e.what();
    emit(rec, cfg);
    code = kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }
  auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  std::cerr << "timing_ms " << elapsed.count() << "\n";
  return code;
}
