// codecsel: selection of a near-optimal scored function (codec) from a finite
// family, with epsilon-delta certificates.  Subcommands:
//   select-gs       one-shot selection over the full sample
//   select-psp      progressive sampling with pruning
//   synth-gen       draw a criterion matrix from a synthetic world
//   coverage        Monte-Carlo check of the certificate failure rate
//   compare-bounds  half-widths of all four bound methods side by side

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "codecsel/bounds.hpp"
#include "codecsel/global_sampling.hpp"
#include "codecsel/io.hpp"
#include "codecsel/psp.hpp"
#include "codecsel/synth.hpp"

namespace {

// success-with-certificate 0, success-without 2, configuration error 3,
// input error 4
constexpr int kExitCertified = 0;
constexpr int kExitUncertified = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInput = 4;

struct CommonArgs {
  std::string config_path;
  codecsel::KeyValues cli_keys;
};

void add_run_options(CLI::App* cmd, CommonArgs& args, bool with_psp, bool with_world_only) {
  cmd->add_option("--config", args.config_path, "key-value configuration file");
  const auto capture = [&args](const std::string& key) {
    return [&args, key](const std::string& value) { args.cli_keys.emplace_back(key, value); };
  };
  if (!with_world_only) {
    cmd->add_option_function<std::string>("--matrix", capture("matrix"),
                                          "criterion matrix file (long form)");
  }
  cmd->add_option_function<std::string>("--world", capture("world"), "synthetic world file");
  cmd->add_option_function<std::string>("--m", capture("m"), "samples to draw from a world");
  cmd->add_option_function<std::string>(
      "--method", capture("method"),
      "finite-emd | asymptotic-emd | hoeffding | gaussian-chernoff");
  cmd->add_option_function<std::string>("--delta", capture("delta"), "failure probability");
  cmd->add_option_function<std::string>("--objective", capture("objective"),
                                        "criterion weights, id:w[,id:w...]");
  cmd->add_option_function<std::string>("--constraint", capture("constraint"),
                                        "half-space a*c1+b*c2<=bound (repeatable)");
  cmd->add_option_function<std::string>("--seed", capture("seed"), "random seed");
  cmd->add_flag_function(
      "--shuffle",
      [&args](std::int64_t) { args.cli_keys.emplace_back("shuffle", "true"); },
      "seeded shuffle of the sample order before sign assignment");
  cmd->add_option_function<std::string>("--out", capture("out"), "report output path");
  if (with_psp) {
    cmd->add_option_function<std::string>("--epsilon", capture("epsilon"),
                                          "optimality tolerance");
    cmd->add_option_function<std::string>("--s0", capture("s0"), "initial batch size");
    cmd->add_option_function<std::string>("--trace-out", capture("trace-out"),
                                          "trace output path");
  }
}

codecsel::RunConfig resolve_config(const CommonArgs& args) {
  codecsel::KeyValues file_keys;
  if (!args.config_path.empty()) file_keys = codecsel::load_key_values(args.config_path);
  return codecsel::build_run_config(file_keys, args.cli_keys);
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw codecsel::InputError("cannot write '" + *path + "'");
  out << text;
}

int run_selection(const CommonArgs& args, bool use_psp) {
  const codecsel::RunConfig cfg = resolve_config(args);
  const codecsel::CriterionMatrix matrix = codecsel::materialize_matrix(cfg);

  codecsel::SelectionReport report;
  if (use_psp) {
    codecsel::PspConfig pc;
    pc.s0 = cfg.s0;
    pc.epsilon = cfg.epsilon;
    pc.delta = cfg.delta;
    pc.method = cfg.method;
    pc.objective = cfg.objective;
    pc.constraints = cfg.constraints;
    report = codecsel::psp(matrix, pc);
  } else {
    codecsel::GsConfig gc;
    gc.delta = cfg.delta;
    gc.method = cfg.method;
    gc.objective = cfg.objective;
    gc.constraints = cfg.constraints;
    report = codecsel::global_sampling(matrix, gc);
  }

  emit(cfg.out_path, codecsel::render_report(report, cfg, use_psp ? "psp" : "gs",
                                             matrix.codec_ids(), matrix.criterion_ids()));
  if (use_psp) {
    // the trace lands next to the report unless routed explicitly
    std::optional<std::string> trace_path = cfg.trace_path;
    if (!trace_path && cfg.out_path) trace_path = *cfg.out_path + ".trace.csv";
    if (trace_path) {
      emit(trace_path,
           codecsel::render_trace(report, matrix.codec_ids(), matrix.criterion_ids()));
    }
  }

  const bool certified =
      report.certified &&
      (!use_psp || report.terminated_reason == codecsel::TerminationReason::singleton ||
       report.terminated_reason == codecsel::TerminationReason::epsilon_optimal);
  return certified ? kExitCertified : kExitUncertified;
}

int run_synth_gen(const CommonArgs& args) {
  const codecsel::RunConfig cfg = resolve_config(args);
  if (!cfg.world_path) throw codecsel::ConfigurationError("synth-gen needs a world input");
  const codecsel::CriterionMatrix matrix = codecsel::materialize_matrix(cfg);
  if (cfg.out_path) {
    codecsel::save_matrix(matrix, *cfg.out_path);
  } else {
    codecsel::save_matrix(matrix, std::cout);
  }
  return kExitCertified;
}

int run_coverage(const CommonArgs& args, const std::string& algorithm) {
  const codecsel::RunConfig cfg = resolve_config(args);
  if (!cfg.world_path) throw codecsel::ConfigurationError("coverage needs a world input");
  const codecsel::SyntheticWorld world = codecsel::load_world(*cfg.world_path);

  codecsel::CoverageStats stats;
  if (algorithm == "psp") {
    codecsel::PspConfig pc;
    pc.s0 = cfg.s0;
    pc.epsilon = cfg.epsilon;
    pc.delta = cfg.delta;
    pc.method = cfg.method;
    pc.objective = cfg.objective;
    pc.constraints = cfg.constraints;
    stats = codecsel::coverage_trial(world, cfg.m, pc, cfg.trials, cfg.seed);
  } else if (algorithm == "gs") {
    codecsel::GsConfig gc;
    gc.delta = cfg.delta;
    gc.method = cfg.method;
    gc.objective = cfg.objective;
    gc.constraints = cfg.constraints;
    stats = codecsel::coverage_trial(world, cfg.m, gc, cfg.trials, cfg.seed);
  } else {
    throw codecsel::ConfigurationError("algorithm must be gs or psp, got '" + algorithm + "'");
  }
  emit(cfg.out_path, codecsel::render_coverage(stats));
  return kExitCertified;
}

struct CompareArgs {
  std::size_t m = 0;
  std::size_t codecs = 1;
  std::size_t criteria = 1;
  double delta = 0.01;
  double sigma_hat = 0.0;
  double d = 0.0;
  std::string out;
};

int run_compare(const CompareArgs& args) {
  using namespace codecsel;
  std::ostringstream text;
  text << "m = " << args.m << "\n";
  text << "codecs = " << args.codecs << "\n";
  text << "criteria = " << args.criteria << "\n";
  text << "delta = " << format_double(args.delta) << "\n";
  text << "sigma_hat = " << format_double(args.sigma_hat) << "\n";
  text << "emd = " << format_double(args.d) << "\n";

  const double fin = epsilon_finite_emd(args.d, args.m, args.criteria, args.delta);
  const double hoe = epsilon_hoeffding(args.m, args.codecs, args.criteria, args.delta);
  const double gc = epsilon_gaussian_chernoff(args.sigma_hat, args.m, args.codecs,
                                              args.criteria, args.delta);
  VarianceEstimate var;
  var.sigma_sq = 2.0 * args.sigma_hat * args.sigma_hat;
  const double asym =
      epsilon_asymptotic_emd(args.d, var, args.m, args.criteria, args.delta, Tails::two);

  const auto row = [&text](const char* name, double eps) {
    text << "epsilon." << name << " = " << format_double(eps) << "\n";
    text << "width." << name << " = " << format_double(2.0 * eps) << "\n";
  };
  row("finite-emd", fin);
  row("asymptotic-emd", asym);
  row("hoeffding", hoe);
  row("gaussian-chernoff", gc);

  const double sigma = std::sqrt(var.sigma_sq);
  text << "hoeffding_dominates.finite-emd = "
       << (hoeffding_dominates(BoundMethod::finite_sample_emd, double(args.codecs), args.delta)
               ? "true"
               : "false")
       << "\n";
  text << "hoeffding_dominates.asymptotic-emd = "
       << (hoeffding_dominates(BoundMethod::asymptotic_emd, double(args.codecs), args.delta,
                               sigma)
               ? "true"
               : "false")
       << "\n";
  if (args.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(args.out);
    if (!out) throw InputError("cannot write '" + args.out + "'");
    out << text.str();
  }
  return kExitCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistically certified selection from a finite codec family"};
  app.require_subcommand(1);

  CommonArgs gs_args, psp_args, gen_args, cov_args;
  std::string cov_algorithm = "gs";
  CompareArgs cmp_args;

  auto* gs_cmd = app.add_subcommand("select-gs", "one-shot selection over the full sample");
  add_run_options(gs_cmd, gs_args, false, false);

  auto* psp_cmd = app.add_subcommand("select-psp", "progressive sampling with pruning");
  add_run_options(psp_cmd, psp_args, true, false);

  auto* gen_cmd = app.add_subcommand("synth-gen", "sample a matrix from a synthetic world");
  add_run_options(gen_cmd, gen_args, false, true);

  auto* cov_cmd = app.add_subcommand("coverage", "Monte-Carlo certificate failure rate");
  add_run_options(cov_cmd, cov_args, true, true);
  cov_cmd->add_option_function<std::string>("--trials",
                                            [&cov_args](const std::string& v) {
                                              cov_args.cli_keys.emplace_back("trials", v);
                                            },
                                            "number of Monte-Carlo trials");
  cov_cmd->add_option("--algorithm", cov_algorithm, "gs or psp");

  auto* cmp_cmd = app.add_subcommand("compare-bounds", "half-widths of all four methods");
  cmp_cmd->add_option("--m", cmp_args.m, "sample size")->required();
  cmp_cmd->add_option("--codecs", cmp_args.codecs, "family size");
  cmp_cmd->add_option("--criteria", cmp_args.criteria, "criterion count");
  cmp_cmd->add_option("--delta", cmp_args.delta, "failure probability");
  cmp_cmd->add_option("--sigma-hat", cmp_args.sigma_hat, "max empirical standard deviation");
  cmp_cmd->add_option("--emd", cmp_args.d, "discrepancy statistic value");
  cmp_cmd->add_option("--out", cmp_args.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (gs_cmd->parsed()) return run_selection(gs_args, false);
    if (psp_cmd->parsed()) return run_selection(psp_args, true);
    if (gen_cmd->parsed()) return run_synth_gen(gen_args);
    if (cov_cmd->parsed()) return run_coverage(cov_args, cov_algorithm);
    if (cmp_cmd->parsed()) return run_compare(cmp_args);
  } catch (const codecsel::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const codecsel::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const codecsel::BoundViolationError& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return kExitUncertified;
  }
  return kExitConfig;
}
