#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "savi/sim/rng.hpp"

namespace savi::sim {

// Variates are produced by hand-written transforms of RngStream::uniform so a
// stream is fully determined by (algorithm, seed, replication).

/// Box-Muller, cosine branch only: one normal per two uniforms.
double standard_normal(RngStream& rng);
/// Inverse CDF of the Laplace(0, scale) law.
double laplace(RngStream& rng, double scale);
/// Marsaglia-Tsang; shape < 1 uses the u^(1/shape) boost.
double gamma(RngStream& rng, double shape);
double beta(RngStream& rng, double a, double b);
int bernoulli(RngStream& rng, double p);

/// Scalar data-generating families. Parameters:
///   gaussian(mean, sd), bernoulli(p), beta(a, b), laplace(0, scale = a),
///   two_point(+-a with probability 1/2 each),
///   markov(p01 = a, p10 = b): two-state chain started from its stationary law.
enum class Family { gaussian, bernoulli, beta, laplace, two_point, markov };

struct SamplerSpec {
  Family family = Family::gaussian;
  double a = 0.0;
  double b = 1.0;

  /// Mean of the marginal law.
  double mean() const;
  /// Parses "gaussian", "bernoulli", ... as used in simulation configs.
  static Family parse_family(const std::string& name);
};

/// Stateful draw source for one replication. Copying copies the state.
class ScalarSampler {
 public:
  explicit ScalarSampler(SamplerSpec spec);
  double operator()(RngStream& rng);
  const SamplerSpec& spec() const noexcept { return spec_; }

 private:
  SamplerSpec spec_;
  int markov_state_ = -1;
};

/// One block of a 2x2 design: n_a bits at rate theta_a, then n_b at theta_b.
std::vector<int> twobytwo_block(RngStream& rng, double theta_a, double theta_b, int n_a, int n_b);

/// Group of the next event (1 = treatment) for a risk set under log hazard
/// ratio beta. Requires n_treat + n_ctrl >= 1.
int logrank_event(RngStream& rng, int n_treat, int n_ctrl, double beta);

}  // namespace savi::sim
