#ifndef DDID_IDENTIFY_HPP
#define DDID_IDENTIFY_HPP

#include <Eigen/Dense>

#include "ddid/measures.hpp"
#include "ddid/timefreq.hpp"

namespace ddid {

/// Finite section of the correlation structure of {pi(lambda) x}.
struct GramMatrix {
  SupportSet support;
  Eigen::MatrixXcd entries;  // <pi(l_i) x, pi(l_j) x>
  std::string window;        // provenance of x
};

GramMatrix gram_matrix(const SupportSet& s, const GaborExpansion& x);
GramMatrix gram_matrix(const SupportSet& s, const SampledSignal& x);

/// Extreme eigenvalues of the Gram matrix; square roots bound the synthesis
/// map between ell^2 and L^2.
struct RieszBounds {
  double lower = 0.0;
  double upper = 0.0;
  int support_size = 0;
};

RieszBounds riesz_bounds(const SupportSet& s, const GaborExpansion& x);
RieszBounds riesz_bounds(const GramMatrix& g);

/// Randomized synthesis-ratio interval for p != 2. A diagnostic, not a
/// bound: eigenvalues only certify p = 2.
struct RatioDiagnostics {
  double p = 2.0;
  double lo = 0.0;
  double hi = 0.0;
  int trials = 0;
};
RatioDiagnostics riesz_ratio_diagnostics(const SupportSet& s, double p, int trials,
                                         std::uint64_t seed, double grid_step = 0.2,
                                         double grid_margin = 6.0);

/// Empirical identifiability constants over a family of measure pairs:
///   C1 = min ||H1x - H2x|| / ((ms ^ 1) ||mu1 - mu2||_p),
///   C2 = max ||H1x - H2x|| / ||mu1 - mu2||_p.
struct IdentifiabilityConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  int trials = 0;
  double p = 2.0;
  std::size_t argmin = 0;  // pair index attaining C1
  std::size_t argmax = 0;  // pair index attaining C2
};

IdentifiabilityConstants identifiability_constants(
    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
    const GaborExpansion& x, double p);

}  // namespace ddid

#endif
