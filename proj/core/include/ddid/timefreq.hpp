#ifndef DDID_TIMEFREQ_HPP
#define DDID_TIMEFREQ_HPP

#include "ddid/types.hpp"

namespace ddid {

/// L2-normalized Gaussian window phi(t) = 2^(1/4) exp(-pi t^2).
double gaussian_window(double t);

/// Finite combination sum_k c_k pi(lambda_k) phi, evaluated in closed form.
struct GaborTerm {
  Complex coeff;
  Point loc;
};

class GaborExpansion {
public:
  GaborExpansion() = default;
  explicit GaborExpansion(std::vector<GaborTerm> terms);
  static GaborExpansion gaussian() { return GaborExpansion({{Complex(1.0, 0.0), Point(0, 0)}}); }

  const std::vector<GaborTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Complex eval(double t) const;

  GaborExpansion operator*(Complex c) const;
  GaborExpansion operator+(const GaborExpansion& o) const;
  GaborExpansion operator-(const GaborExpansion& o) const;

private:
  std::vector<GaborTerm> terms_;
};

/// Uniformly sampled signal: samples[k] at t0 + k*dt.
struct SampledSignal {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<Complex> samples;

  SampledSignal() = default;
  SampledSignal(double t0_, double dt_, std::vector<Complex> s);
  double extent() const { return dt * static_cast<double>(samples.empty() ? 0 : samples.size() - 1); }
  double t_at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
};

/// phi sampled on [lo, hi] with step dt (defaults per the desk conventions).
SampledSignal sample_gaussian(double lo = -8.0, double hi = 8.0, double dt = 1e-3);
SampledSignal sample(const GaborExpansion& x, double lo, double hi, double dt);

/// Rectangular grid over the (tau, nu) plane, inclusive of endpoints.
struct TFGrid {
  double tau0 = 0, tau1 = 0, nu0 = 0, nu1 = 0;
  double dtau = 0.1, dnu = 0.1;

  TFGrid() = default;
  TFGrid(double t0, double t1, double n0, double n1, double dt, double dn);
  std::size_t ntau() const;
  std::size_t nnu() const;
  Point node(std::size_t i, std::size_t j) const;
};

/// Grid covering the given points with a margin on every side.
TFGrid auto_grid(const std::vector<Point>& pts, double margin = 6.0, double step = 0.05);

struct STFTField {
  TFGrid grid;
  std::vector<Complex> values;  // row-major: i_tau * nnu + j_nu
  Complex at(std::size_t i, std::size_t j) const { return values[i * grid.nnu() + j]; }
};

// ---------------------------------------------------------------------------
// Closed-form Gaussian identities
// ---------------------------------------------------------------------------

/// (V_phi phi)(tau, nu) = e^{-i pi tau nu} e^{-pi (tau^2+nu^2)/2}.
Complex gaussian_ambiguity(double tau, double nu);

/// <pi(mu) phi, pi(la) phi> in closed form.
Complex gabor_inner(const Point& mu, const Point& la);

// ---------------------------------------------------------------------------
// Time-frequency shifts: pi(lambda) = M_nu T_tau
// ---------------------------------------------------------------------------

/// Exact on the Gabor path via pi(l)pi(m) = e^{-2 pi i Re(l) Im(m)} pi(l+m).
GaborExpansion tf_shift(const GaborExpansion& x, const Point& lambda);

/// Modulation exact pointwise; translation band-limited on the grid.
/// Throws numeric_guard_error when |tau| exceeds half the sampled extent.
SampledSignal tf_shift(const SampledSignal& x, const Point& lambda);

// ---------------------------------------------------------------------------
// STFT and modulation-space norms
// ---------------------------------------------------------------------------

STFTField stft(const GaborExpansion& x, const TFGrid& grid);
STFTField stft(const SampledSignal& x, const TFGrid& grid);

/// Single-node STFT value <x, pi(lambda) phi>.
Complex stft_at(const GaborExpansion& x, const Point& lambda);
Complex stft_at(const SampledSignal& x, const Point& lambda);

/// Discretized M^p norm over the grid; weighted multiplies the integrand by
/// (1+|lambda|)^p. Throws numeric_guard_error("grid too small") when the
/// outermost ring carries >= 1e-6 of the total integrand mass.
double mp_norm(const GaborExpansion& x, double p, const TFGrid& grid, bool weighted = false);
double mp_norm(const SampledSignal& x, double p, const TFGrid& grid, bool weighted = false);

/// Exact M^2 = L^2 norm of a Gabor expansion via the Gram identity.
double m2_norm(const GaborExpansion& x);
/// Trapezoid L^2 norm of a sampled signal.
double m2_norm(const SampledSignal& x);

/// Exact L^2 inner product <x, y> of Gabor expansions.
Complex inner(const GaborExpansion& x, const GaborExpansion& y);

// ---------------------------------------------------------------------------
// Measurement operator H_Lambda(alpha, x) and its adjoint
// ---------------------------------------------------------------------------

GaborExpansion synthesize(const SupportSet& s, const std::vector<Complex>& alpha,
                          const GaborExpansion& x);
SampledSignal synthesize(const SupportSet& s, const std::vector<Complex>& alpha,
                         const SampledSignal& x);
GaborExpansion synthesize(const DiscreteMeasure& mu, const GaborExpansion& x);

/// Adjoint sequence {<y, pi(lambda) x>}_{lambda in s}. Exact for Gabor data;
/// sampled data pairs STFTs over the grid (grid defaults to auto_grid of the
/// support plus the signals' effective spread).
std::vector<Complex> analyze(const GaborExpansion& y, const SupportSet& s,
                             const GaborExpansion& x);
std::vector<Complex> analyze(const SampledSignal& y, const SupportSet& s, const SampledSignal& x,
                             const TFGrid& grid);

/// Gaussian-averaged weight extraction at lambda: evaluates the averaged
/// functional I(eps) by quadrature for each eps and Richardson-extrapolates
/// the two smallest eps to 0. For y = H_mu phi this recovers mu({lambda}) up
/// to neighbor leakage.
Complex weight_extract(const GaborExpansion& y, const Point& lambda,
                       const std::vector<double>& eps_list);

/// sum_l alpha_l e^{-2 pi i Re(l) Im(eps_l)} pi(l + eps_l) phi: the perturbed
/// synthesis whose distance to H_Lambda(alpha, phi) collapses to
/// sum_l alpha_l pi(l)(phi - pi(eps_l) phi) under the commutation relation.
GaborExpansion perturbed_synthesis(const SupportSet& s, const std::vector<Complex>& alpha,
                                   const std::vector<Point>& eps);

}  // namespace ddid

#endif
