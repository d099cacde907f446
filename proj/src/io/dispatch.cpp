#include "savi/io/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "savi/change_detect.hpp"
#include "savi/errors.hpp"
#include "savi/io/ingest.hpp"
#include "savi/mult_testing.hpp"
#include "savi/sim/oracle.hpp"
#include "savi/sim/rng.hpp"

namespace savi::io {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

// Feeds every record to `f`, attaching the line number to data errors raised
// while processing it.
template <class F>
void for_each_record(RecordReader& reader, F&& f) {
  while (auto rec = reader.next()) {
    try {
      f(*rec);
    } catch (const DataError& e) {
      if (e.line() != 0) throw;
      throw DataError(e.what(), rec->line);
    }
  }
}

DiscretePrior uniform_prior(const std::vector<double>& points) {
  return {points, std::vector<double>(points.size(), 1.0 / static_cast<double>(points.size()))};
}

LikelihoodModel parse_model(const std::string& name) {
  if (name == "bernoulli") return LikelihoodModel::bernoulli;
  if (name == "gaussian") return LikelihoodModel::gaussian;
  throw ConfigError("unknown likelihood model '" + name + "' (expected bernoulli or gaussian)");
}

DiscretePrior scalar_prior(Params& p, LikelihoodModel model) {
  const std::string grid = model == LikelihoodModel::bernoulli ? p.string("grid", "0.005:0.995:199") : p.string("grid");
  return uniform_prior(parse_grid(grid).points());
}

PairPrior pair_prior(Params& p) {
  const auto m = static_cast<std::size_t>(p.integer("prior-m", 9));
  if (p.has("prior-a") || p.has("prior-b")) return beta_pair_prior(p.number("prior-a", 1.0), p.number("prior-b", 1.0), m);
  return uniform_pair_prior(m);
}

std::pair<int, int> block_sizes(Params& p) {
  const auto na = p.integer("n-a"), nb = p.integer("n-b");
  if (na < 1 || nb < 1 || na > 64 || nb > 64) throw ConfigError("group sizes n-a and n-b must lie in 1..64");
  return {static_cast<int>(na), static_cast<int>(nb)};
}

CsConfig cs_config(CsMethod method, double alpha, Params& p) {
  CsConfig c;
  c.method = method;
  c.alpha = alpha;
  c.intersect = p.boolean("intersect", false);
  switch (method) {
    case CsMethod::subgaussian:
      c.sigma = p.number("sigma", 1.0);
      [[fallthrough]];
    case CsMethod::asymptotic:
      if (p.has("rho")) c.rho = p.number("rho");
      c.t0 = p.number("t0", 100.0);
      break;
    case CsMethod::emp_bernstein: c.policy = make_policy(p); break;
    case CsMethod::eb_mixture: break;
    case CsMethod::catoni:
      c.sigma = p.number("sigma", 1.0);
      if (!p.has("grid")) throw ConfigError("catoni needs --grid lo:hi:n");
      c.grid = parse_grid(p.string("grid"));
      if (p.has("catoni-lambda")) c.catoni = {false, p.number("catoni-lambda")};
      break;
    case CsMethod::betting:
      c.policy = make_policy(p);
      if (p.has("grid")) c.grid = parse_grid(p.string("grid"));
      break;
    default: throw ConfigError("method " + method_name(method) + " is not a scalar-stream confidence sequence");
  }
  return c;
}

Format output_format(const RunConfig& cfg) {
  return cfg.format.value_or(cfg.subcommand == Subcommand::simulate ? Format::json : Format::csv);
}

ReportMeta meta_for(const RunConfig& cfg) { return {cfg.echo(), cfg.seed}; }

// ---- cs -----------------------------------------------------------------------

const std::vector<std::string> kBandColumns{"time", "lower", "upper", "alpha", "method"};

std::vector<Cell> band_row(const ConfidenceBand& b) {
  return {static_cast<long long>(b.time), b.empty ? kNaN : b.lower, b.empty ? kNaN : b.upper, b.alpha,
          method_name(b.method)};
}

void run_cs(const RunConfig& cfg) {
  require_alpha(cfg.alpha);
  const CsMethod method = parse_cs_method(cfg.method);
  Params p(cfg.params, "cs " + cfg.method);

  std::function<void(const StreamRecord&)> observe;
  std::function<ConfidenceBand()> band;
  Schema schema = Schema::scalar;
  int na = 0, nb = 0;

  std::unique_ptr<ConfidenceSequence> cs;
  std::unique_ptr<PriorPosteriorRatio> ppr;
  std::unique_ptr<TwoByTwoDifferenceCS> diff;
  std::vector<double> thetas;

  if (method == CsMethod::eposterior) {
    const LikelihoodModel model = parse_model(p.string("model", "bernoulli"));
    const double sigma = model == LikelihoodModel::gaussian ? p.number("sigma", 1.0) : 1.0;
    DiscretePrior prior = scalar_prior(p, model);
    thetas = prior.points;
    ppr = std::make_unique<PriorPosteriorRatio>(std::move(prior), model, sigma);
    if (model == LikelihoodModel::bernoulli) schema = Schema::bit;
    observe = [&](const StreamRecord& r) { ppr->observe(r.value); };
    band = [&] {
      ConfidenceBand b = eposterior_interval(thetas, ppr->log_ratios(), cfg.alpha);
      b.time = ppr->time();
      return b;
    };
  } else if (method == CsMethod::twobytwo_difference) {
    std::tie(na, nb) = block_sizes(p);
    PairPrior prior = pair_prior(p);
    const MeanGridSpec grid = parse_grid(p.string("grid", "-0.99:0.99:199"));
    diff = std::make_unique<TwoByTwoDifferenceCS>(cfg.alpha, std::move(prior), grid);
    schema = Schema::block;
    observe = [&](const StreamRecord& r) { diff->observe(r.block); };
    band = [&] { return diff->band(); };
  } else {
    cs = make_confidence_sequence(cs_config(method, cfg.alpha, p));
    observe = [&](const StreamRecord& r) { cs->observe(r.value); };
    band = [&] { return cs->band(); };
  }
  p.finish();

  InputSource in(cfg.input);
  OutputSink sink(cfg.output);
  ReportWriter out(sink.stream(), output_format(cfg), kBandColumns, meta_for(cfg));
  RecordReader reader(in.stream(), schema, na, nb, cfg.header);
  for_each_record(reader, [&](const StreamRecord& r) {
    observe(r);
    out.row(band_row(band()));
  });
  out.finish();
  sink.close();
}

// ---- test ---------------------------------------------------------------------

struct TestProcess {
  Schema schema = Schema::scalar;
  int n_a = 0, n_b = 0;
  std::function<void(const StreamRecord&)> observe;
  std::function<double()> log_value;
  std::shared_ptr<void> owner;
};

TestProcess make_test_process(const std::string& null, Params& p) {
  TestProcess tp;
  if (null == "2x2") {
    std::tie(tp.n_a, tp.n_b) = block_sizes(p);
    auto mix = std::make_shared<TwoByTwoMixture>(pair_prior(p), tp.n_a, tp.n_b);
    tp.schema = Schema::block;
    tp.observe = [m = mix.get()](const StreamRecord& r) { m->observe(r.block); };
    tp.log_value = [m = mix.get()] { return m->log_value(); };
    tp.owner = mix;
    return tp;
  }
  if (null == "prior-posterior") {
    const LikelihoodModel model = parse_model(p.string("model", "bernoulli"));
    const double sigma = model == LikelihoodModel::gaussian ? p.number("sigma", 1.0) : 1.0;
    DiscretePrior prior = scalar_prior(p, model);
    const double theta = p.number("theta");
    const auto it = std::min_element(prior.points.begin(), prior.points.end(),
                                     [theta](double a, double b) { return std::fabs(a - theta) < std::fabs(b - theta); });
    if (std::fabs(*it - theta) > 1e-9 * std::max(1.0, std::fabs(theta)))
      throw ConfigError("null value --theta must be a point of --grid");
    const auto index = static_cast<std::size_t>(it - prior.points.begin());
    auto ratio = std::make_shared<PriorPosteriorRatio>(std::move(prior), model, sigma);
    tp.schema = model == LikelihoodModel::bernoulli ? Schema::bit : Schema::scalar;
    tp.observe = [r = ratio.get()](const StreamRecord& rec) { r->observe(rec.value); };
    tp.log_value = [r = ratio.get(), index] { return r->log_ratio(index); };
    tp.owner = ratio;
    return tp;
  }
  std::string kind = null;
  if (null == "mean") kind = "betting";
  else if (null != "symmetry" && null != "exchangeability" && null != "ttest" && null != "logrank")
    throw ConfigError("unknown null '" + null +
                      "' (expected symmetry, exchangeability, ttest, 2x2, logrank, prior-posterior or mean)");
  std::shared_ptr<SequentialEProcess> proc = make_process(kind, p);
  tp.schema = kind == "exchangeability" ? Schema::bit : kind == "logrank" ? Schema::event : Schema::scalar;
  tp.observe = [q = proc.get()](const StreamRecord& r) { q->observe(r.value); };
  tp.log_value = [q = proc.get()] { return q->log_value(); };
  tp.owner = proc;
  return tp;
}

void run_test(const RunConfig& cfg) {
  require_alpha(cfg.alpha);
  Params p(cfg.params, "test " + cfg.method);
  TestProcess tp = make_test_process(cfg.method, p);
  p.finish();

  InputSource in(cfg.input);
  OutputSink sink(cfg.output);
  ReportWriter out(sink.stream(), output_format(cfg),
                   {"null", "t", "e_value", "log_e_value", "anytime_p", "reject", "alpha"}, meta_for(cfg));
  RecordReader reader(in.stream(), tp.schema, tp.n_a, tp.n_b, cfg.header);
  long long t = 0;
  double log_e = 0.0, running_max = 0.0;
  const auto emit = [&] {
    out.row({cfg.method, t, std::exp(log_e), log_e, std::min(1.0, std::exp(-running_max)),
             reaches_threshold(running_max, cfg.alpha), cfg.alpha});
  };
  for_each_record(reader, [&](const StreamRecord& r) {
    tp.observe(r);
    ++t;
    log_e = tp.log_value();
    if (std::isnan(log_e)) throw InvariantViolation("e-process value is NaN");
    running_max = std::max(running_max, log_e);
    if (cfg.trace) emit();
  });
  if (!cfg.trace) emit();
  out.finish();
  sink.close();
}

// ---- ebh ----------------------------------------------------------------------

void run_ebh(const RunConfig& cfg) {
  require_alpha(cfg.alpha);
  Params p(cfg.params, "ebh " + cfg.method);
  p.finish();
  const std::string& m = cfg.method;
  if (m != "ebh" && m != "bh" && m != "weighted-bh")
    throw ConfigError("unknown procedure '" + m + "' (expected ebh, bh or weighted-bh)");
  InputSource in(cfg.input);
  const auto rows = read_labelled_rows(in.stream(), m == "weighted-bh" ? 2 : 1, cfg.header);
  std::vector<double> first(rows.size()), second(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    first[i] = rows[i].values[0];
    if (m == "weighted-bh") second[i] = rows[i].values[1];
    if (m != "ebh" && !(first[i] >= 0.0 && first[i] <= 1.0))
      throw DataError("p-value must lie in [0, 1]", rows[i].line);
    if (m == "weighted-bh" && !(second[i] >= 0.0)) throw DataError("e-value must be nonnegative", rows[i].line);
    if (m == "ebh" && !(first[i] >= 0.0)) throw DataError("e-value must be nonnegative", rows[i].line);
  }
  const DecisionReport rep = m == "ebh" ? ebh(first, cfg.alpha)
                             : m == "bh" ? bh(first, cfg.alpha)
                                         : evalue_weighted_bh(first, second, cfg.alpha);
  OutputSink sink(cfg.output);
  ReportWriter out(sink.stream(), output_format(cfg), {"label", "statistic", "rank", "threshold", "rejected"},
                   meta_for(cfg));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row({rows[i].label, rep.statistic[i], static_cast<long long>(rep.rank[i]), rep.threshold[i],
             static_cast<bool>(rep.rejected_flag[i])});
  out.finish();
  sink.close();
}

// ---- detect -------------------------------------------------------------------

void run_detect(const RunConfig& cfg) {
  require_alpha(cfg.alpha);
  Params p(cfg.params, "detect " + cfg.method);
  const auto cap = p.integer("cap", static_cast<long long>(EDetector::kDefaultCap));
  if (cap < 1) throw ConfigError("--cap must be positive");
  auto proto = make_process(cfg.method, p);
  p.finish();
  const Schema schema = cfg.method == "exchangeability" ? Schema::bit
                        : cfg.method == "logrank"      ? Schema::event
                                                       : Schema::scalar;
  EDetector det(std::move(proto), static_cast<std::size_t>(cap));

  InputSource in(cfg.input);
  OutputSink sink(cfg.output);
  ReportWriter out(sink.stream(), output_format(cfg), {"t", "detector_value", "log_detector_value", "stopped"},
                   meta_for(cfg));
  RecordReader reader(in.stream(), schema, 0, 0, cfg.header);
  while (auto rec = reader.next()) {
    try {
      det.step(rec->value);
    } catch (const DataError& e) {
      if (e.line() != 0) throw;
      throw DataError(e.what(), rec->line);
    }
    const bool stop = detector_stop(det, cfg.alpha);
    out.row({static_cast<long long>(det.time()), det.value(), det.log_value(), stop});
    if (stop) break;
  }
  out.finish();
  sink.close();
}

// ---- simulate -----------------------------------------------------------------

sim::SamplerSpec sampler_spec(Params p) {
  sim::SamplerSpec s;
  s.family = sim::SamplerSpec::parse_family(p.string("family"));
  s.a = p.number("a", s.a);
  s.b = p.number("b", s.b);
  p.finish();
  return s;
}

sim::StoppingRuleSpec stopping_spec(Params p) {
  const std::string kind = normalize_key(p.string("kind"));
  const auto horizon = static_cast<std::size_t>(std::max(0LL, p.integer("horizon", 0)));
  sim::StoppingRuleSpec s;
  if (kind == "fixed") s = sim::StoppingRuleSpec::fixed(horizon);
  else if (kind == "crossing-or-fixed") s = sim::StoppingRuleSpec::crossing_or_fixed(p.number("level"), horizon);
  else if (kind == "crossing") s = sim::StoppingRuleSpec::crossing(p.number("level"));
  else throw ConfigError("unknown stopping rule '" + kind + "' (expected fixed, crossing or crossing-or-fixed)");
  p.finish();
  return s;
}

void run_simulate(const RunConfig& cfg) {
  if (!cfg.params.empty()) throw ConfigError("simulate takes its options from --config only");
  json doc;
  {
    InputSource in(cfg.input);
    try {
      doc = json::parse(in.stream());
    } catch (const json::exception& e) {
      throw ConfigError(std::string("cannot parse simulation config: ") + e.what());
    }
  }
  if (!doc.is_object()) throw ConfigError("simulation config must be a JSON object");
  Params p(doc, "simulate");
  std::optional<std::uint64_t> seed = cfg.seed;
  if (p.has("seed")) {
    const auto s = p.integer("seed");
    if (s < 0) throw ConfigError("seed must be nonnegative");
    if (seed && *seed != static_cast<std::uint64_t>(s)) throw ConfigError("--seed disagrees with the config seed");
    seed = static_cast<std::uint64_t>(s);
  }
  if (!seed) throw ConfigError("simulate requires an explicit seed (--seed or \"seed\" in the config)");
  if (p.string("rng", sim::kRngAlgorithm) != sim::kRngAlgorithm)
    throw ConfigError(std::string("only the ") + sim::kRngAlgorithm + " generator is available");
  const std::string experiment = normalize_key(p.string("experiment"));
  const double alpha = p.number("alpha", cfg.alpha);
  require_alpha(alpha);
  const auto reps_raw = p.integer("replications", 1000);
  if (reps_raw < 2) throw ConfigError("replications must be at least 2");
  const auto reps = static_cast<std::size_t>(reps_raw);

  double estimate = 0.0, se = 0.0, bound = kNaN;
  bool pass = true;
  if (experiment == "evalue-at-stop") {
    Params proc = Params(p.object("process"), "process");
    const std::string kind = proc.string("kind");
    auto prototype = make_process(kind, proc);
    proc.finish();
    const auto e = sim::mc_evalue_at_stop(*prototype, sampler_spec(Params(p.object("sampler"), "sampler")),
                                          stopping_spec(Params(p.object("stopping"), "stopping")), reps, *seed);
    estimate = e.mean;
    se = e.se;
    bound = 1.0;
    pass = estimate <= bound + 3.0 * se;
  } else if (experiment == "coverage") {
    const sim::SamplerSpec sampler = sampler_spec(Params(p.object("sampler"), "sampler"));
    const double truth = p.number("truth", sampler.mean());
    const auto horizon = p.integer("horizon");
    if (horizon < 1) throw ConfigError("horizon must be positive");
    Params csp(p.object("cs"), "cs");
    const CsMethod method = parse_cs_method(csp.string("method"));
    const std::string probe = csp.string("probe", "band");
    CsConfig cc = cs_config(method, alpha, csp);
    csp.finish();
    sim::ProbeFactory factory;
    if (probe == "band") {
      factory = [cc, truth]() -> std::unique_ptr<sim::CoverageProbe> {
        return std::make_unique<sim::BandProbe>(make_confidence_sequence(cc), truth);
      };
    } else if (probe == "truth" && method == CsMethod::catoni) {
      factory = [cc, truth]() -> std::unique_ptr<sim::CoverageProbe> {
        return std::make_unique<sim::TruthProcessProbe>(
            std::make_unique<CatoniCS>(cc.sigma, cc.alpha, std::vector<double>{truth}, cc.catoni));
      };
    } else if (probe == "truth" && method == CsMethod::betting) {
      factory = [cc, truth]() -> std::unique_ptr<sim::CoverageProbe> {
        return std::make_unique<sim::TruthProcessProbe>(
            std::make_unique<BettingCS>(cc.alpha, cc.policy, std::vector<double>{truth}));
      };
    } else {
      throw ConfigError("probe must be 'band', or 'truth' for catoni and betting");
    }
    const auto e = sim::mc_coverage(factory, sampler, static_cast<std::size_t>(horizon), reps, *seed);
    estimate = e.mean;
    se = e.se;
    bound = alpha;
    pass = estimate <= bound + 3.0 * se;
  } else if (experiment == "arl") {
    Params proc = Params(p.object("process"), "process");
    const std::string kind = proc.string("kind");
    auto prototype = make_process(kind, proc);
    proc.finish();
    ArlConfig ac;
    ac.alpha = alpha;
    if (p.has("sampler")) ac.pre_change = sampler_spec(Params(p.object("sampler"), "sampler"));
    if (p.has("post-sampler")) ac.post_change = sampler_spec(Params(p.object("post-sampler"), "post-sampler"));
    if (p.has("change-time")) {
      const auto nu = p.integer("change-time");
      if (nu < 0) throw ConfigError("change-time must be nonnegative");
      ac.change_time = static_cast<std::size_t>(nu);
    }
    const auto horizon = p.integer("horizon", static_cast<long long>(ac.horizon));
    if (horizon < 1) throw ConfigError("horizon must be positive");
    ac.horizon = static_cast<std::size_t>(horizon);
    const auto cap = p.integer("cap", static_cast<long long>(ac.cap));
    if (cap < 1) throw ConfigError("cap must be positive");
    ac.cap = static_cast<std::size_t>(cap);
    const ArlSummary s = run_arl_experiment(*prototype, ac, reps, *seed);
    if (ac.change_time) {
      estimate = s.mean_delay;
      se = s.delay_se;
    } else {
      estimate = s.mean_stop;
      se = s.stop_se;
      bound = 1.0 / alpha;
      pass = estimate >= bound - 3.0 * se;
    }
  } else {
    throw ConfigError("unknown experiment '" + experiment + "' (expected evalue-at-stop, coverage or arl)");
  }
  p.finish();

  RunConfig echo_cfg = cfg;
  echo_cfg.seed = seed;
  ReportMeta meta = meta_for(echo_cfg);
  meta.config["simulation"] = doc;
  OutputSink sink(cfg.output);
  ReportWriter out(sink.stream(), output_format(cfg), {"experiment", "estimate", "se", "bound", "pass", "replications"},
                   std::move(meta));
  out.row({experiment, estimate, se, bound, pass, static_cast<long long>(reps)});
  out.finish();
  sink.close();
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  if (name == "cs") return Subcommand::cs;
  if (name == "test") return Subcommand::test;
  if (name == "ebh") return Subcommand::ebh;
  if (name == "detect") return Subcommand::detect;
  if (name == "simulate") return Subcommand::simulate;
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::cs: return "cs";
    case Subcommand::test: return "test";
    case Subcommand::ebh: return "ebh";
    case Subcommand::detect: return "detect";
    case Subcommand::simulate: return "simulate";
  }
  return "?";
}

json RunConfig::echo() const {
  json j;
  j["subcommand"] = subcommand_name(subcommand);
  if (!method.empty()) j["method"] = method;
  j["alpha"] = alpha;
  j["params"] = params;
  j["input"] = input.empty() ? "-" : input;
  j["header"] = header;
  if (trace) j["trace"] = true;
  return j;
}

Params::Params(json obj, std::string context) : obj_(json::object()), context_(std::move(context)) {
  if (!obj.is_object()) throw ConfigError(context_ + ": expected an object");
  for (auto& [k, v] : obj.items()) {
    const std::string key = normalize_key(k);
    if (obj_.contains(key)) throw ConfigError(context_ + ": duplicate option '" + key + "'");
    obj_[key] = v;
  }
}

bool Params::has(const std::string& key) const { return obj_.contains(key); }

const json& Params::fetch(const std::string& key) {
  used_.insert(key);
  return obj_.at(key);
}

double Params::number(const std::string& key, std::optional<double> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context_ + ": missing required option '" + key + "'");
  }
  const json& v = fetch(key);
  if (!v.is_number()) throw ConfigError(context_ + ": option '" + key + "' must be a number");
  return v.get<double>();
}

long long Params::integer(const std::string& key, std::optional<long long> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context_ + ": missing required option '" + key + "'");
  }
  const json& v = fetch(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<long long>(d);
  }
  throw ConfigError(context_ + ": option '" + key + "' must be an integer");
}

std::string Params::string(const std::string& key, std::optional<std::string> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context_ + ": missing required option '" + key + "'");
  }
  const json& v = fetch(key);
  if (!v.is_string()) throw ConfigError(context_ + ": option '" + key + "' must be a string");
  return v.get<std::string>();
}

bool Params::boolean(const std::string& key, std::optional<bool> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context_ + ": missing required option '" + key + "'");
  }
  const json& v = fetch(key);
  if (!v.is_boolean()) throw ConfigError(context_ + ": option '" + key + "' must be true or false");
  return v.get<bool>();
}

json Params::object(const std::string& key) {
  if (!has(key)) throw ConfigError(context_ + ": missing required section '" + key + "'");
  const json& v = fetch(key);
  if (!v.is_object()) throw ConfigError(context_ + ": '" + key + "' must be an object");
  return v;
}

void Params::finish() const {
  for (const auto& [k, _] : obj_.items())
    if (!used_.count(k)) throw ConfigError(context_ + ": option '" + k + "' is not used here");
}

MeanGridSpec parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos)
    throw ConfigError("grid must look like lo:hi:n, got '" + text + "'");
  MeanGridSpec g;
  try {
    g.lo = parse_number(std::string_view(text).substr(0, a), 0);
    g.hi = parse_number(std::string_view(text).substr(a + 1, b - a - 1), 0);
    const double n = parse_number(std::string_view(text).substr(b + 1), 0);
    if (!(n >= 1.0 && n == std::floor(n) && n < 1e8)) throw ConfigError("grid size must be a positive integer");
    g.resolution = static_cast<std::size_t>(n);
  } catch (const DataError& e) {
    throw ConfigError("grid must look like lo:hi:n, got '" + text + "'");
  }
  try {
    g.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("bad grid: ") + e.what());
  }
  return g;
}

BetPolicy make_policy(Params& p) {
  const std::string kind = p.string("policy", "plugin");
  const double c = p.number("c", 0.5);
  BetPolicy policy;
  if (kind == "plugin") policy = BetPolicy::plugin(c, p.number("alpha-ref", 0.05));
  else if (kind == "fixed") policy = BetPolicy::fixed(p.number("lambda"), c);
  else if (kind == "mixture") policy = BetPolicy::mixture({}, c);
  else throw ConfigError("unknown bet policy '" + kind + "' (expected plugin, fixed or mixture)");
  policy.validate();
  return policy;
}

std::unique_ptr<SequentialEProcess> make_process(const std::string& kind, Params& p) {
  if (kind == "gaussian-lr")
    return std::make_unique<GaussianLikelihoodRatio>(p.number("mu0", 0.0), p.number("mu1", 1.0), p.number("sigma", 1.0));
  if (kind == "constant") return std::make_unique<ConstantProcess>();
  if (kind == "symmetry") {
    const bool rectified = p.boolean("rectified", true);
    if (p.has("lambda")) return std::make_unique<SymmetryProcess>(rectified, false, p.number("lambda"));
    return std::make_unique<SymmetryProcess>(rectified, true);
  }
  if (kind == "betting") {
    const double mu = p.number("mu");
    return std::make_unique<BoundedMeanBetting>(mu, make_policy(p));
  }
  if (kind == "subgaussian") {
    const double mu = p.number("mu", 0.0), sigma = p.number("sigma", 1.0);
    const double rho = p.has("rho") ? p.number("rho") : default_rho(0.05, p.number("t0", 100.0));
    return std::make_unique<SubGaussianMixtureProcess>(mu, sigma, rho);
  }
  if (kind == "ttest") return std::make_unique<TTestProcess>(p.number("delta0", 0.0), p.number("delta1", 0.5));
  if (kind == "exchangeability") return std::make_unique<ExchangeabilityProcess>();
  if (kind == "logrank") {
    const auto n1 = p.integer("n-treat"), n0 = p.integer("n-ctrl");
    if (n1 < 0 || n0 < 0 || n1 > 1000000000 || n0 > 1000000000) throw ConfigError("risk set sizes out of range");
    return std::make_unique<LogrankProcess>(static_cast<int>(n1), static_cast<int>(n0), p.number("beta", 1.0));
  }
  throw ConfigError("unknown process '" + kind +
                    "' (expected gaussian-lr, constant, symmetry, betting, subgaussian, ttest, exchangeability or "
                    "logrank)");
}

std::unique_ptr<SequentialEProcess> make_process(const json& spec) {
  Params p(spec, "process");
  const std::string kind = p.string("kind");
  auto proc = make_process(kind, p);
  p.finish();
  return proc;
}

void run(const RunConfig& config) {
  switch (config.subcommand) {
    case Subcommand::cs: run_cs(config); break;
    case Subcommand::test: run_test(config); break;
    case Subcommand::ebh: run_ebh(config); break;
    case Subcommand::detect: run_detect(config); break;
    case Subcommand::simulate: run_simulate(config); break;
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DataError*>(&e)) return 3;
  if (dynamic_cast<const InvariantViolation*>(&e)) return 4;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
      dynamic_cast<const IoError*>(&e) || dynamic_cast<const CapacityError*>(&e))
    return 2;
  return 4;
}

int dispatch(const RunConfig& config, std::ostream& err) {
  try {
    run(config);
    return 0;
  } catch (const std::exception& e) {
    err << "savi: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace savi::io
