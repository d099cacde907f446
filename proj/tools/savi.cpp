// savi: streaming anytime-valid inference from the command line.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "savi/io/dispatch.hpp"

namespace {

using nlohmann::json;
using savi::io::RunConfig;

void number_opt(CLI::App* app, json& params, const std::string& name, const std::string& help) {
  app->add_option_function<double>("--" + name, [&params, name](double v) { params[name] = v; }, help);
}

void integer_opt(CLI::App* app, json& params, const std::string& name, const std::string& help) {
  app->add_option_function<long long>("--" + name, [&params, name](long long v) { params[name] = v; }, help);
}

void string_opt(CLI::App* app, json& params, const std::string& name, const std::string& help) {
  app->add_option_function<std::string>("--" + name, [&params, name](const std::string& v) { params[name] = v; },
                                        help);
}

void common_opts(CLI::App* app, RunConfig& cfg, std::string& format) {
  app->add_option("--alpha", cfg.alpha, "Error level in (0,1)")->capture_default_str();
  app->add_option("--input", cfg.input, "Input file, '-' or omitted for stdin");
  app->add_option("--output", cfg.output, "Output file, '-' or omitted for stdout");
  app->add_option("--format", format, "Report format: csv or json");
  app->add_option_function<std::uint64_t>("--seed", [&cfg](std::uint64_t s) { cfg.seed = s; },
                                          "Seed for stochastic components");
}

void policy_opts(CLI::App* app, json& params) {
  string_opt(app, params, "policy", "Bet policy: plugin (default), fixed or mixture");
  number_opt(app, params, "lambda", "Bet size for --policy fixed");
  number_opt(app, params, "c", "Truncation constant in (0,1), default 0.5");
  number_opt(app, params, "alpha-ref", "Plug-in tuning level, default 0.05");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime-valid tests, confidence sequences, e-BH and change detection on streams."};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format;

  auto* cs = app.add_subcommand("cs", "Confidence sequence for a mean, one band row per observation");
  cs->footer(
      "Input: one observation per line (CSV field or {\"x\": v}).\n"
      "  eposterior with --model bernoulli reads bits; 2x2-difference reads blocks of n-a + n-b bits,\n"
      "  group a first, or {\"a\": [...], \"b\": [...]}.\n"
      "Output columns: time,lower,upper,alpha,method");
  cs->add_option("--method", cfg.method,
                 "subgaussian | asymptotic | eb | eb-mixture | catoni | betting | eposterior | 2x2-difference")
      ->required();
  common_opts(cs, cfg, format);
  number_opt(cs, cfg.params, "sigma", "Sub-Gaussian scale or variance bound (default 1)");
  number_opt(cs, cfg.params, "rho", "Mixture width, dimensionless (default tuned for t0)");
  number_opt(cs, cfg.params, "t0", "Time at which the default rho is tightest (default 100)");
  string_opt(cs, cfg.params, "grid", "Candidate grid lo:hi:n");
  number_opt(cs, cfg.params, "catoni-lambda", "Constant Catoni bet instead of the plug-in schedule");
  string_opt(cs, cfg.params, "model", "eposterior likelihood: bernoulli (default) or gaussian");
  integer_opt(cs, cfg.params, "n-a", "2x2: group a size per block");
  integer_opt(cs, cfg.params, "n-b", "2x2: group b size per block");
  integer_opt(cs, cfg.params, "prior-m", "2x2: prior grid size per axis (default 9)");
  number_opt(cs, cfg.params, "prior-a", "2x2: beta prior shape a");
  number_opt(cs, cfg.params, "prior-b", "2x2: beta prior shape b");
  cs->add_flag_function("--intersect", [&cfg](std::int64_t) { cfg.params["intersect"] = true; },
                        "Report the running intersection of bands");
  policy_opts(cs, cfg.params);

  auto* test = app.add_subcommand("test", "Sequential test; prints the final e-value, anytime p and decision");
  test->footer(
      "Input: symmetry, ttest, mean, prior-posterior (gaussian): one real per line.\n"
      "  exchangeability, prior-posterior (bernoulli): one bit per line.\n"
      "  logrank: group of each event, 1 = treatment, 0 = control.\n"
      "  2x2: blocks of n-a + n-b bits, group a first.\n"
      "Output columns: null,t,e_value,log_e_value,anytime_p,reject,alpha");
  test->add_option("--null", cfg.method,
                   "symmetry | exchangeability | ttest | 2x2 | logrank | prior-posterior | mean")
      ->required();
  common_opts(test, cfg, format);
  test->add_flag("--trace", cfg.trace, "One row per observation");
  number_opt(test, cfg.params, "lambda", "symmetry: single bet size instead of the mixture; mean: fixed bet");
  test->add_flag_function("--raw", [&cfg](std::int64_t) { cfg.params["rectified"] = false; },
                          "symmetry: use the raw bet instead of the rectified one");
  number_opt(test, cfg.params, "delta0", "ttest: null standardized effect (default 0)");
  number_opt(test, cfg.params, "delta1", "ttest: alternative standardized effect (default 0.5)");
  number_opt(test, cfg.params, "mu", "mean: null mean in [0,1]");
  integer_opt(test, cfg.params, "n-a", "2x2: group a size per block");
  integer_opt(test, cfg.params, "n-b", "2x2: group b size per block");
  integer_opt(test, cfg.params, "prior-m", "2x2: prior grid size per axis (default 9)");
  number_opt(test, cfg.params, "prior-a", "2x2: beta prior shape a");
  number_opt(test, cfg.params, "prior-b", "2x2: beta prior shape b");
  integer_opt(test, cfg.params, "n-treat", "logrank: initial treatment risk set");
  integer_opt(test, cfg.params, "n-ctrl", "logrank: initial control risk set");
  number_opt(test, cfg.params, "beta", "logrank: alternative log hazard ratio (default 1)");
  string_opt(test, cfg.params, "model", "prior-posterior likelihood: bernoulli (default) or gaussian");
  string_opt(test, cfg.params, "grid", "prior-posterior parameter grid lo:hi:n");
  number_opt(test, cfg.params, "theta", "prior-posterior null value (a grid point)");
  number_opt(test, cfg.params, "sigma", "prior-posterior gaussian scale (default 1)");
  test->add_option_function<std::string>(
      "--policy", [&cfg](const std::string& v) { cfg.params["policy"] = v; }, "mean: plugin, fixed or mixture");
  number_opt(test, cfg.params, "c", "mean: truncation constant (default 0.5)");
  number_opt(test, cfg.params, "alpha-ref", "mean: plug-in tuning level (default 0.05)");

  auto* ebh = app.add_subcommand("ebh", "Multiple testing over a batch of e-values or p-values");
  ebh->footer(
      "Input: label,value per line ({\"label\": l, \"value\": v}); weighted-bh reads label,p,e.\n"
      "Output columns: label,statistic,rank,threshold,rejected");
  ebh->add_option("--method", cfg.method, "ebh (default) | bh | weighted-bh");
  common_opts(ebh, cfg, format);
  ebh->add_flag("--header", cfg.header, "Skip the first input line");

  auto* detect = app.add_subcommand("detect", "E-detector change detection; stops at the first alarm");
  detect->footer("Input: one observation per line.\nOutput columns: t,detector_value,log_detector_value,stopped");
  detect->add_option("--base", cfg.method, "gaussian-lr | symmetry | betting | subgaussian | constant | ...")
      ->required();
  common_opts(detect, cfg, format);
  number_opt(detect, cfg.params, "mu0", "gaussian-lr: pre-change mean (default 0)");
  number_opt(detect, cfg.params, "mu1", "gaussian-lr: post-change mean (default 1)");
  number_opt(detect, cfg.params, "sigma", "gaussian-lr, subgaussian: scale (default 1)");
  number_opt(detect, cfg.params, "mu", "betting, subgaussian: null mean");
  number_opt(detect, cfg.params, "rho", "subgaussian: mixture width");
  integer_opt(detect, cfg.params, "cap", "Maximum number of retained restarts (default 512)");
  policy_opts(detect, cfg.params);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of a guarantee; needs an explicit seed");
  simulate->footer(
      "The JSON config sets experiment (evalue-at-stop | coverage | arl), seed, replications,\n"
      "process {kind,...}, sampler {family,a,b}, stopping {kind,level,horizon}, cs {method,...},\n"
      "truth, horizon, alpha, change-time, post-sampler, cap.\n"
      "Output columns: experiment,estimate,se,bound,pass,replications");
  simulate->add_option("--config", cfg.input, "Simulation config (JSON)")->required();
  simulate->add_option("--output", cfg.output, "Output file, '-' or omitted for stdout");
  simulate->add_option("--format", format, "Report format: json (default) or csv");
  simulate->add_option_function<std::uint64_t>("--seed", [&cfg](std::uint64_t s) { cfg.seed = s; },
                                               "Seed; must match the config seed if both are given");

  for (auto* sub : {cs, test, detect})
    sub->add_flag("--header", cfg.header, "Skip the first input line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    cfg.subcommand = savi::io::parse_subcommand(app.get_subcommands().front()->get_name());
    if (cfg.subcommand == savi::io::Subcommand::ebh && cfg.method.empty()) cfg.method = "ebh";
    if (!format.empty()) cfg.format = savi::io::parse_format(format);
  } catch (const std::exception& e) {
    std::cerr << "savi: error: " << e.what() << '\n';
    return savi::io::exit_code_for(e);
  }
  return savi::io::dispatch(cfg, std::cerr);
}
