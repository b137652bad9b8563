#ifndef DDID_BARGMANN_HPP
#define DDID_BARGMANN_HPP

#include <functional>
#include <memory>
#include <utility>

#include "ddid/density.hpp"
#include "ddid/timefreq.hpp"
#include "ddid/types.hpp"

namespace ddid {

/// Entire-function value as (log magnitude, phase); magnitudes routinely
/// exceed e^{(pi/2)|z|^2}, so products are accumulated in log space.
struct LogComplex {
  double log_abs = -kInf;
  double arg = 0.0;
  bool zero = true;

  LogComplex() = default;
  LogComplex(double la, double a) : log_abs(la), arg(a), zero(false) {}
  static LogComplex from(Complex v) {
    if (v == Complex(0.0, 0.0)) return LogComplex();
    return LogComplex(std::log(std::abs(v)), std::arg(v));
  }
  /// Overflows for large log_abs; intended for moderate magnitudes.
  Complex value() const {
    if (zero) return Complex(0.0, 0.0);
    return std::exp(log_abs) * Complex(std::cos(arg), std::sin(arg));
  }
  LogComplex operator*(const LogComplex& o) const {
    if (zero || o.zero) return LogComplex();
    return LogComplex(log_abs + o.log_abs, arg + o.arg);
  }
};

/// Stable sum of values given in log form.
LogComplex log_sum(const std::vector<LogComplex>& terms);

/// Truncated canonical product over the square lattice:
///   prod_{0<|w|<=T} (1 - z/w) exp(z/w + z^2/(2 w^2)),
/// with the |w| > T tail restored analytically through the lattice Eisenstein
/// sums S_k = sum_{|w|>T} w^{-k} (only k = 4, 8, 12 survive the four-fold
/// symmetry; higher orders are below 1e-9 for |z| <= T/3).
class LatticeProductEngine {
public:
  LatticeProductEngine(const SquareLattice& lat, double radius);

  const SquareLattice& lattice() const { return lat_; }
  double radius() const { return radius_; }

  /// Log of the product over all enumerated sites except the excluded
  /// indices (sorted (m,n) pairs), tail included. Requires
  /// radius >= 3*max(|z|, gamma).
  LogComplex completion_log(Complex z, const std::vector<std::pair<long, long>>& excluded) const;

  struct Site {
    long m, n;
    Complex omega;
  };
  const std::vector<Site>& sites() const { return sites_; }

private:
  SquareLattice lat_;
  double radius_;
  std::vector<Site> sites_;
  double s4_ = 0, s8_ = 0, s12_ = 0;
};

/// Weierstrass sigma of the lattice, evaluated through a fixed engine.
class SigmaFunction {
public:
  SigmaFunction(const SquareLattice& lat, double truncation_radius);
  LogComplex operator()(Complex z) const;
  const LatticeProductEngine& engine() const { return *engine_; }

private:
  std::shared_ptr<LatticeProductEngine> engine_;
};

/// One-off evaluation. truncation_radius must be >= 3*max(|z|, gamma).
LogComplex sigma(const SquareLattice& lat, Complex z, double truncation_radius);

/// Truncated-product model of the interpolation basis function: lattice-close
/// zero set indexed over I (origin at index (0,0)), exceptional near-origin
/// indices I_s with their exponential corrections, and lattice completion
/// over Z^2 \ I.
class GtildeModel {
public:
  struct IndexedZero {
    long m, n;
    Complex lambda;
  };
  struct Hypotheses {
    double s;      // class separation defining I_s = {|lambda| <= s/2}
    double theta;  // Rayleigh slope for the zero set
    double r;      // offset bound |lambda_mn - omega_mn| <= r
    double rho;    // minimal distance of the second exceptional zero
  };

  static GtildeModel build(std::vector<IndexedZero> zeros, const SquareLattice& lat,
                           const Hypotheses& hyp, double truncation_radius,
                           std::shared_ptr<const LatticeProductEngine> engine = nullptr);

  LogComplex eval(Complex z) const;

  const std::vector<IndexedZero>& zeros() const { return zeros_; }
  const std::vector<std::size_t>& exceptional() const { return exceptional_; }
  const Hypotheses& hypotheses() const { return hyp_; }
  const std::vector<double>& rayleigh_ladder() const { return ladder_; }
  double truncation_radius() const { return engine_->radius(); }
  const SquareLattice& lattice() const { return lat_; }

private:
  GtildeModel() : lat_(1.0) {}
  SquareLattice lat_;
  Hypotheses hyp_{};
  std::vector<IndexedZero> zeros_;            // (0,0) first, lambda = 0
  std::vector<std::size_t> exceptional_;      // indices into zeros_ (I_s)
  std::vector<std::pair<long, long>> index_set_;  // sorted I
  std::vector<double> ladder_;
  std::shared_ptr<const LatticeProductEngine> engine_;
};

/// Enumerate a finite origin-containing set against the lattice (tessellation
/// construction + the swap placing the origin at index (0,0)) and build the
/// model. theta is the Rayleigh slope the set obeys on windows >= r_window.
GtildeModel enumerate_origin_model(const SupportSet& pts, double sep_s,
                                   const SquareLattice& lat, double theta, double r_window,
                                   double rho, double truncation_radius,
                                   std::shared_ptr<const LatticeProductEngine> engine = nullptr);

/// Entire function with provenance tag; evaluation returns log form.
struct FockFunction {
  std::function<LogComplex(Complex)> evaluator;
  std::string description;
  LogComplex operator()(Complex z) const { return evaluator(z); }
};

/// Bargmann transform. Gabor path is closed form; sampled path integrates
/// the defining kernel (boundary-guarded).
FockFunction bargmann(const GaborExpansion& x);
FockFunction bargmann(const SampledSignal& x);

/// Discretized Fock norm over the grid; p = kInf gives the grid sup of
/// |F(z)| e^{-pi |z|^2 / 2}. Boundary-guarded like mp_norm.
double fock_norm(const FockFunction& f, double p, const TFGrid& grid);

/// Interpolant of the two-set instance: F(conj(lambda)) = e^{pi|lambda|^2/2} beta_lambda
/// over the canonical union support (see union_support for the beta order).
struct InterpolantResult {
  FockFunction f;
  std::vector<Point> support;     // canonical order matching beta
  std::vector<GtildeModel> models;
  double rho = 0.0;
  double gamma = 0.0, theta = 0.0;
  double r_window = 0.0;          // Rayleigh window for the per-set bounds
};

/// Deduplicated union of two supports in canonical (tau, nu) order.
SupportSet union_support(const SupportSet& l1, const SupportSet& l2);

InterpolantResult interpolant(const SupportSet& l1, const SupportSet& l2,
                              const std::vector<Complex>& beta, double gamma, double theta,
                              double eval_margin = 15.0);

}  // namespace ddid

#endif
