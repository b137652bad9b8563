#include "ddid/identify.hpp"

#include <Eigen/Eigenvalues>

#include "ddid/parallel.hpp"
#include "ddid/rng.hpp"

namespace ddid {

namespace {

template <typename MakeEntry>
GramMatrix assemble(const SupportSet& s, const std::string& window, MakeEntry&& entry) {
  const auto n = static_cast<Eigen::Index>(s.size());
  GramMatrix g{s, Eigen::MatrixXcd(n, n), window};
  std::vector<std::pair<Eigen::Index, Eigen::Index>> upper;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) upper.emplace_back(i, j);
  std::vector<Complex> vals(upper.size());
  parallel_for(upper.size(), [&](std::size_t k) {
    vals[k] = entry(static_cast<std::size_t>(upper[k].first), static_cast<std::size_t>(upper[k].second));
  });
  for (std::size_t k = 0; k < upper.size(); ++k) {
    const auto [i, j] = upper[k];
    g.entries(i, j) = vals[k];
    g.entries(j, i) = std::conj(vals[k]);
  }
  return g;
}

}  // namespace

GramMatrix gram_matrix(const SupportSet& s, const GaborExpansion& x) {
  if (x.terms().size() == 1 && x.terms()[0].loc == Point(0, 0) &&
      x.terms()[0].coeff == Complex(1.0, 0.0)) {
    // Gaussian window: entries are the closed-form shifted inner products.
    return assemble(s, "gaussian", [&](std::size_t i, std::size_t j) {
      return gabor_inner(s[i], s[j]);
    });
  }
  std::vector<GaborExpansion> shifted;
  shifted.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) shifted.push_back(tf_shift(x, s[i]));
  return assemble(s, "gabor-expansion", [&](std::size_t i, std::size_t j) {
    return inner(shifted[i], shifted[j]);
  });
}

GramMatrix gram_matrix(const SupportSet& s, const SampledSignal& x) {
  std::vector<SampledSignal> shifted;
  shifted.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) shifted.push_back(tf_shift(x, s[i]));
  auto l2 = [&](std::size_t i, std::size_t j) {
    Complex acc(0.0, 0.0);
    const auto& a = shifted[i].samples;
    const auto& b = shifted[j].samples;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double w = (k == 0 || k + 1 == a.size()) ? 0.5 : 1.0;
      acc += w * a[k] * std::conj(b[k]);
    }
    return acc * x.dt;
  };
  return assemble(s, "sampled", l2);
}

RieszBounds riesz_bounds(const GramMatrix& g) {
  RieszBounds b;
  b.support_size = static_cast<int>(g.support.size());
  if (g.entries.rows() == 0) return b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.entries, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_guard_error("riesz_bounds: eigensolver failed");
  b.lower = es.eigenvalues().minCoeff();
  b.upper = es.eigenvalues().maxCoeff();
  return b;
}

RieszBounds riesz_bounds(const SupportSet& s, const GaborExpansion& x) {
  return riesz_bounds(gram_matrix(s, x));
}

RatioDiagnostics riesz_ratio_diagnostics(const SupportSet& s, double p, int trials,
                                         std::uint64_t seed, double grid_step,
                                         double grid_margin) {
  if (!(p >= 1.0) || p == kInf) throw std::invalid_argument("riesz_ratio_diagnostics: p in [1, inf)");
  if (trials < 1) throw std::invalid_argument("riesz_ratio_diagnostics: trials >= 1");
  RatioDiagnostics d;
  d.p = p;
  d.trials = trials;
  d.lo = kInf;
  d.hi = 0.0;
  if (s.empty()) return d;
  const TFGrid grid = auto_grid(s.points(), grid_margin, grid_step);
  const std::size_t nt = grid.ntau(), nn = grid.nnu();
  // Kernel: V_phi(pi(l_j) phi)(node); the synthesis field is K alpha.
  std::vector<Complex> kernel(nt * nn * s.size());
  parallel_for(nt, [&](std::size_t i) {
    for (std::size_t j = 0; j < nn; ++j)
      for (std::size_t a = 0; a < s.size(); ++a)
        kernel[(i * nn + j) * s.size() + a] = gabor_inner(s[a], grid.node(i, j));
  });
  std::vector<double> ratios(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng = Rng::stream(seed, t);
    std::vector<Complex> alpha(s.size());
    double norm_p = 0.0;
    for (auto& a : alpha) {
      a = rng.complex_normal();
      norm_p += std::pow(std::abs(a), p);
    }
    norm_p = std::pow(norm_p, 1.0 / p);
    double total = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double wi = (i == 0 || i + 1 == nt) ? 0.5 : 1.0;
      for (std::size_t j = 0; j < nn; ++j) {
        const double wj = (j == 0 || j + 1 == nn) ? 0.5 : 1.0;
        Complex v(0.0, 0.0);
        const Complex* row = &kernel[(i * nn + j) * s.size()];
        for (std::size_t a = 0; a < s.size(); ++a) v += row[a] * alpha[a];
        total += wi * wj * std::pow(std::abs(v), p);
      }
    }
    ratios[t] = std::pow(total * grid.dtau * grid.dnu, 1.0 / p) / norm_p;
  });
  for (double r : ratios) {
    d.lo = std::min(d.lo, r);
    d.hi = std::max(d.hi, r);
  }
  return d;
}

IdentifiabilityConstants identifiability_constants(
    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
    const GaborExpansion& x, double p) {
  if (pairs.empty()) throw std::invalid_argument("identifiability_constants: no pairs");
  if (!(p >= 1.0) || p == kInf)
    throw std::invalid_argument("identifiability_constants: p in [1, inf)");
  IdentifiabilityConstants out;
  out.p = p;
  out.trials = static_cast<int>(pairs.size());
  out.c1 = kInf;
  out.c2 = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [mu1, mu2] = pairs[k];
    const DiscreteMeasure diff = measure_difference(mu1, mu2);
    if (diff.empty()) throw std::invalid_argument("identifiability_constants: pair with mu1 = mu2");
    const GaborExpansion hdiff = synthesize(diff, x);
    double num;
    if (p == 2.0) {
      num = m2_norm(hdiff);
    } else {
      std::vector<Point> pts;
      for (const auto& a : diff.atoms()) pts.push_back(a.location);
      num = mp_norm(hdiff, p, auto_grid(pts, 7.0, 0.05));
    }
    const double den = lp_norm(diff, p);
    const double ms = mutual_separation(mu1.support(), mu2.support());
    const double r1 = num / (std::min(ms, 1.0) * den);
    const double r2 = num / den;
    if (r1 < out.c1) { out.c1 = r1; out.argmin = k; }
    if (r2 > out.c2) { out.c2 = r2; out.argmax = k; }
  }
  return out;
}

}  // namespace ddid
