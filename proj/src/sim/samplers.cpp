#include "savi/sim/samplers.hpp"

#include <cmath>
#include <numbers>

#include "savi/errors.hpp"

namespace savi::sim {

double standard_normal(RngStream& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double laplace(RngStream& rng, double scale) {
  const double u = rng.uniform() - 0.5;
  const double mag = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -mag : mag;
}

double gamma(RngStream& rng, double shape) {
  if (!(shape > 0.0)) throw ParameterError("gamma shape must be positive");
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform(), 1.0 / shape);
    return gamma(rng, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta(RngStream& rng, double a, double b) {
  const double x = gamma(rng, a);
  const double y = gamma(rng, b);
  return x / (x + y);
}

int bernoulli(RngStream& rng, double p) { return rng.uniform() < p ? 1 : 0; }

double SamplerSpec::mean() const {
  switch (family) {
    case Family::gaussian: return a;
    case Family::bernoulli: return a;
    case Family::beta: return a / (a + b);
    case Family::laplace:
    case Family::two_point: return 0.0;
    case Family::markov: return a / (a + b);
  }
  return 0.0;
}

Family SamplerSpec::parse_family(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "bernoulli") return Family::bernoulli;
  if (name == "beta") return Family::beta;
  if (name == "laplace") return Family::laplace;
  if (name == "two_point") return Family::two_point;
  if (name == "markov") return Family::markov;
  throw ConfigError("unknown sampler family '" + name + "'");
}

ScalarSampler::ScalarSampler(SamplerSpec spec) : spec_(spec) {
  switch (spec_.family) {
    case Family::gaussian:
      if (!(spec_.b > 0.0)) throw ParameterError("gaussian sd must be positive");
      break;
    case Family::bernoulli:
      if (!(spec_.a >= 0.0 && spec_.a <= 1.0)) throw ParameterError("bernoulli p must lie in [0, 1]");
      break;
    case Family::beta:
      if (!(spec_.a > 0.0 && spec_.b > 0.0)) throw ParameterError("beta shapes must be positive");
      break;
    case Family::laplace:
    case Family::two_point:
      if (!(spec_.a > 0.0)) throw ParameterError("scale must be positive");
      break;
    case Family::markov:
      if (!(spec_.a > 0.0 && spec_.a <= 1.0 && spec_.b > 0.0 && spec_.b <= 1.0))
        throw ParameterError("markov transition probabilities must lie in (0, 1]");
      break;
  }
}

double ScalarSampler::operator()(RngStream& rng) {
  switch (spec_.family) {
    case Family::gaussian: return spec_.a + spec_.b * standard_normal(rng);
    case Family::bernoulli: return bernoulli(rng, spec_.a);
    case Family::beta: return beta(rng, spec_.a, spec_.b);
    case Family::laplace: return laplace(rng, spec_.a);
    case Family::two_point: return rng.uniform() < 0.5 ? -spec_.a : spec_.a;
    case Family::markov:
      if (markov_state_ < 0)
        markov_state_ = bernoulli(rng, spec_.mean());
      else if (markov_state_ == 0)
        markov_state_ = bernoulli(rng, spec_.a);
      else
        markov_state_ = 1 - bernoulli(rng, spec_.b);
      return markov_state_;
  }
  return 0.0;
}

std::vector<int> twobytwo_block(RngStream& rng, double theta_a, double theta_b, int n_a, int n_b) {
  std::vector<int> bits;
  bits.reserve(static_cast<std::size_t>(n_a + n_b));
  for (int i = 0; i < n_a; ++i) bits.push_back(bernoulli(rng, theta_a));
  for (int i = 0; i < n_b; ++i) bits.push_back(bernoulli(rng, theta_b));
  return bits;
}

int logrank_event(RngStream& rng, int n_treat, int n_ctrl, double beta) {
  if (n_treat < 0 || n_ctrl < 0 || n_treat + n_ctrl < 1) throw ParameterError("empty risk set");
  const double w1 = n_treat * std::exp(beta);
  return rng.uniform() * (w1 + n_ctrl) < w1 ? 1 : 0;
}

}  // namespace savi::sim
