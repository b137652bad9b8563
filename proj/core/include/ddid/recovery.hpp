#ifndef DDID_RECOVERY_HPP
#define DDID_RECOVERY_HPP

#include <cstdint>
#include <variant>

#include "ddid/measures.hpp"
#include "ddid/timefreq.hpp"

namespace ddid {

/// Channel output y = H_mu x plus calibrated noise, reproducible per seed.
struct ChannelMeasurement {
  std::variant<GaborExpansion, SampledSignal> signal;
  double noise_level = 0.0;
  std::uint64_t seed = 0;

  const GaborExpansion& gabor() const;
  const SampledSignal& sampled() const;
};

/// Gabor-path measurement: noise is a jittered coarse grid of at most 64
/// Gaussian atoms with i.i.d. complex-normal weights, rescaled so its M^2
/// norm equals noise_level exactly.
ChannelMeasurement simulate_measurement(const DiscreteMeasure& mu, const GaborExpansion& x,
                                        double noise_level, std::uint64_t seed);

/// Sampled-path measurement: per-sample complex white noise rescaled to the
/// given discretized L^2 level.
ChannelMeasurement simulate_measurement(const DiscreteMeasure& mu, const SampledSignal& x,
                                        double noise_level, std::uint64_t seed);

/// Local maxima of |<y, pi(node) x>| above threshold * peak, thinned to
/// min_dist (the caller's separation prior, typically s/2).
SupportSet detect_support(const ChannelMeasurement& y, const GaborExpansion& x,
                          const TFGrid& grid, double threshold, double min_dist = 0.5);

struct RefineOptions {
  int max_outer = 50;
  double position_tol = 1e-8;
  double residual_tol = 1e-10;
  double condition_limit = 1e12;
};

struct RefineResult {
  DiscreteMeasure measure;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Alternates per-atom correlation maximization (derivative-free quadratic
/// fit in each coordinate) with a global least-squares weight solve.
/// The residual never increases between outer iterations.
RefineResult refine_and_solve(const SupportSet& candidates, const ChannelMeasurement& y,
                              const GaborExpansion& x, const RefineOptions& opts = {});

/// Matched/spurious decomposition of a recovered measure against the target:
/// the recovered measure is split into atoms matched (within epsilon) to the
/// epsilon-section of the target, and the spurious remainder.
struct MatchedAtom {
  Atom target;
  Atom recovered;
  double position_error = 0.0;
  double weight_error = 0.0;
  bool position_ok = false;  // position_error <= epsilon
  bool weight_ok = false;    // weight_error <= epsilon
};

struct RecoveryReport {
  std::vector<MatchedAtom> matched;
  std::vector<Atom> missed;    // epsilon-section atoms with no recovered match
  DiscreteMeasure spurious;
  double epsilon = 0.0;
  double p = 2.0;
  double spurious_norm = 0.0;
  double bound = 0.0;          // 4 C2 / (C1 (s ^ 1)) * epsilon
  bool spurious_ok = false;    // spurious_norm <= bound
};

RecoveryReport match_report(const DiscreteMeasure& target, const DiscreteMeasure& recovered,
                            double epsilon, double p, double c1, double c2, double s);

}  // namespace ddid

#endif
