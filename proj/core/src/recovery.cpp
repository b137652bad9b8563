#include "ddid/recovery.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "ddid/rng.hpp"

namespace ddid {

const GaborExpansion& ChannelMeasurement::gabor() const {
  if (const auto* g = std::get_if<GaborExpansion>(&signal)) return *g;
  throw std::invalid_argument("ChannelMeasurement: sampled signal where Gabor path expected");
}

const SampledSignal& ChannelMeasurement::sampled() const {
  if (const auto* s = std::get_if<SampledSignal>(&signal)) return *s;
  throw std::invalid_argument("ChannelMeasurement: Gabor signal where sampled path expected");
}

ChannelMeasurement simulate_measurement(const DiscreteMeasure& mu, const GaborExpansion& x,
                                        double noise_level, std::uint64_t seed) {
  if (!(noise_level >= 0.0)) throw std::invalid_argument("simulate_measurement: noise_level >= 0");
  GaborExpansion y = synthesize(mu, x);
  if (noise_level > 0.0) {
    Rng rng(seed);
    double t0 = -1.0, t1 = 1.0, n0 = -1.0, n1 = 1.0;
    for (const auto& a : mu.atoms()) {
      t0 = std::min(t0, a.location.tau - 2.0);
      t1 = std::max(t1, a.location.tau + 2.0);
      n0 = std::min(n0, a.location.nu - 2.0);
      n1 = std::max(n1, a.location.nu + 2.0);
    }
    const int side = 8;  // 64 noise atoms
    std::vector<GaborTerm> noise;
    noise.reserve(static_cast<std::size_t>(side) * side);
    const double dt = (t1 - t0) / (side - 1), dn = (n1 - n0) / (side - 1);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        const double jt = rng.uniform(-0.25 * dt, 0.25 * dt);
        const double jn = rng.uniform(-0.25 * dn, 0.25 * dn);
        noise.push_back({rng.complex_normal(), Point(t0 + i * dt + jt, n0 + j * dn + jn)});
      }
    GaborExpansion ne{std::move(noise)};
    const double norm = m2_norm(ne);
    if (norm > 0.0) y = y + ne * Complex(noise_level / norm, 0.0);
  }
  return ChannelMeasurement{std::move(y), noise_level, seed};
}

ChannelMeasurement simulate_measurement(const DiscreteMeasure& mu, const SampledSignal& x,
                                        double noise_level, std::uint64_t seed) {
  if (!(noise_level >= 0.0)) throw std::invalid_argument("simulate_measurement: noise_level >= 0");
  std::vector<Complex> alpha;
  std::vector<Point> pts;
  for (const auto& a : mu.atoms()) {
    alpha.push_back(a.weight);
    pts.push_back(a.location);
  }
  SampledSignal y = synthesize(SupportSet(std::move(pts)), alpha, x);
  if (noise_level > 0.0) {
    Rng rng(seed);
    std::vector<Complex> noise(y.samples.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < noise.size(); ++k) {
      noise[k] = rng.complex_normal();
      const double w = (k == 0 || k + 1 == noise.size()) ? 0.5 : 1.0;
      acc += w * std::norm(noise[k]);
    }
    const double norm = std::sqrt(acc * y.dt);
    if (norm > 0.0)
      for (std::size_t k = 0; k < noise.size(); ++k)
        y.samples[k] += noise[k] * (noise_level / norm);
  }
  return ChannelMeasurement{std::move(y), noise_level, seed};
}

SupportSet detect_support(const ChannelMeasurement& y, const GaborExpansion& x,
                          const TFGrid& grid, double threshold, double min_dist) {
  if (!(threshold > 0.0)) throw std::invalid_argument("detect_support: threshold must be > 0");
  const GaborExpansion& sig = y.gabor();
  if (sig.empty()) return SupportSet();
  const std::size_t nt = grid.ntau(), nn = grid.nnu();
  std::vector<double> field(nt * nn);
  double peak = 0.0;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nn; ++j) {
      field[i * nn + j] = std::abs(inner(sig, tf_shift(x, grid.node(i, j))));
      peak = std::max(peak, field[i * nn + j]);
    }
  if (peak == 0.0) return SupportSet();
  struct Cand {
    double value;
    Point at;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nn; ++j) {
      const double v = field[i * nn + j];
      if (v < threshold * peak) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dj = -1; dj <= 1 && is_max; ++dj) {
          if (di == 0 && dj == 0) continue;
          const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(nt) || jj >= static_cast<long>(nn))
            continue;
          if (field[static_cast<std::size_t>(ii) * nn + static_cast<std::size_t>(jj)] > v)
            is_max = false;
        }
      if (is_max) cands.push_back({v, grid.node(i, j)});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.at.tau != b.at.tau) return a.at.tau < b.at.tau;
    return a.at.nu < b.at.nu;
  });
  std::vector<Point> kept;
  for (const auto& c : cands) {
    bool clear = true;
    for (const auto& k : kept)
      if (distance(c.at, k) < min_dist) { clear = false; break; }
    if (clear) kept.push_back(c.at);
  }
  std::sort(kept.begin(), kept.end(), [](const Point& a, const Point& b) {
    return a.tau != b.tau ? a.tau < b.tau : a.nu < b.nu;
  });
  return SupportSet(std::move(kept));
}

namespace {

// Weight solve at fixed positions: min ||y - sum c_j pi(l_j) x||_{M^2}.
// Returns the residual of the solution.
double solve_weights(const GaborExpansion& y, const std::vector<Point>& pos,
                     const GaborExpansion& x, double condition_limit,
                     std::vector<Complex>* weights) {
  const auto n = static_cast<Eigen::Index>(pos.size());
  Eigen::MatrixXcd g(n, n);
  Eigen::VectorXcd rhs(n);
  std::vector<GaborExpansion> shifted;
  shifted.reserve(pos.size());
  for (const auto& p : pos) shifted.push_back(tf_shift(x, p));
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = inner(y, shifted[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = inner(shifted[static_cast<std::size_t>(i)], shifted[static_cast<std::size_t>(j)]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success) throw numeric_guard_error("refine_and_solve: eigensolver failed");
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > condition_limit)
    throw numeric_guard_error("refine_and_solve: ill-conditioned weight solve");
  const Eigen::VectorXcd c = es.eigenvectors() *
                             (es.eigenvalues().cwiseInverse().asDiagonal() *
                              (es.eigenvectors().adjoint() * rhs));
  weights->assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  for (Eigen::Index i = 0; i < n; ++i) (*weights)[static_cast<std::size_t>(i)] = c(i);
  const double y2 = inner(y, y).real();
  const double r2 = y2 - 2.0 * (c.adjoint() * rhs)(0).real() + (c.adjoint() * g * c)(0).real();
  return std::sqrt(std::max(0.0, r2));
}

// Derivative-free 1-D maximization of f by repeated three-point parabola
// fits with a shrinking probe step.
double refine_coordinate(double t, const std::function<double(double)>& f, double tol) {
  double h = 0.25;
  double ft = f(t);
  while (h > tol) {
    const double fm = f(t - h), fp = f(t + h);
    const double denom = fm - 2.0 * ft + fp;
    if (std::abs(denom) > 0.0 && fm < ft && fp < ft) {
      const double step = 0.5 * h * (fm - fp) / denom;
      const double cand = t + step;
      const double fc = f(cand);
      if (fc >= ft) { t = cand; ft = fc; }
      h *= 0.5;
    } else if (fp > ft || fm > ft) {
      if (fp >= fm) { t += h; ft = fp; }
      else { t -= h; ft = fm; }
    } else {
      h *= 0.5;
    }
  }
  return t;
}

}  // namespace

RefineResult refine_and_solve(const SupportSet& candidates, const ChannelMeasurement& y,
                              const GaborExpansion& x, const RefineOptions& opts) {
  if (candidates.empty()) throw std::invalid_argument("refine_and_solve: no candidates");
  const GaborExpansion& sig = y.gabor();
  std::vector<Point> pos = candidates.points();
  std::vector<Complex> w;
  double residual = solve_weights(sig, pos, x, opts.condition_limit, &w);

  RefineResult out;
  out.converged = false;
  for (int it = 0; it < opts.max_outer; ++it) {
    std::vector<Point> next = pos;
    for (std::size_t i = 0; i < next.size(); ++i) {
      // Residual with atom i removed; its correlation peak relocates atom i.
      std::vector<GaborTerm> rest = sig.terms();
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (j == i) continue;
        const GaborExpansion gj = tf_shift(x, next[j]) * w[j];
        for (const auto& term : gj.terms()) rest.push_back({-term.coeff, term.loc});
      }
      const GaborExpansion ri{std::move(rest)};
      auto corr = [&](const Point& p) { return std::abs(inner(ri, tf_shift(x, p))); };
      Point p = next[i];
      p.tau = refine_coordinate(p.tau, [&](double t) { return corr(Point(t, p.nu)); },
                                opts.position_tol);
      p.nu = refine_coordinate(p.nu, [&](double n) { return corr(Point(p.tau, n)); },
                               opts.position_tol);
      next[i] = p;
    }
    std::vector<Complex> w_next;
    const double r_next = solve_weights(sig, next, x, opts.condition_limit, &w_next);
    if (r_next > residual) break;  // keep the residual monotone
    const double drop = residual - r_next;
    pos = std::move(next);
    w = std::move(w_next);
    residual = r_next;
    out.iterations = it + 1;
    if (drop < opts.residual_tol) {
      out.converged = true;
      break;
    }
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < pos.size(); ++i)
    if (w[i] != Complex(0.0, 0.0)) atoms.push_back({pos[i], w[i]});
  out.measure = DiscreteMeasure(std::move(atoms));
  out.residual = residual;
  return out;
}

RecoveryReport match_report(const DiscreteMeasure& target, const DiscreteMeasure& recovered,
                            double epsilon, double p, double c1, double c2, double s) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("match_report: epsilon must be > 0");
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(s > 0.0))
    throw std::invalid_argument("match_report: C1, C2, s must be > 0");
  RecoveryReport rep;
  rep.epsilon = epsilon;
  rep.p = p;
  rep.bound = 4.0 * c2 / (c1 * std::min(s, 1.0)) * epsilon;

  // Epsilon-section: smallest prefix (largest weights first) whose removal
  // leaves an ell^p tail below epsilon.
  std::vector<Atom> ordered = target.atoms();
  std::sort(ordered.begin(), ordered.end(), [](const Atom& a, const Atom& b) {
    const double wa = std::abs(a.weight), wb = std::abs(b.weight);
    if (wa != wb) return wa > wb;
    if (a.location.tau != b.location.tau) return a.location.tau < b.location.tau;
    return a.location.nu < b.location.nu;
  });
  std::size_t section = ordered.size();
  for (std::size_t k = 0; k <= ordered.size(); ++k) {
    double tail = 0.0;
    for (std::size_t j = k; j < ordered.size(); ++j) tail += std::pow(std::abs(ordered[j].weight), p);
    if (std::pow(tail, 1.0 / p) < epsilon) { section = k; break; }
  }
  const std::vector<Atom> sect(ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(section));

  // Greedy nearest-first matching within epsilon.
  struct Pair {
    double d;
    std::size_t ti, ri;
  };
  std::vector<Pair> pairs;
  const auto& rec = recovered.atoms();
  for (std::size_t ti = 0; ti < sect.size(); ++ti)
    for (std::size_t ri = 0; ri < rec.size(); ++ri) {
      const double d = distance(sect[ti].location, rec[ri].location);
      if (d <= epsilon) pairs.push_back({d, ti, ri});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.ti != b.ti) return a.ti < b.ti;
    return a.ri < b.ri;
  });
  std::vector<bool> t_used(sect.size(), false), r_used(rec.size(), false);
  for (const auto& pr : pairs) {
    if (t_used[pr.ti] || r_used[pr.ri]) continue;
    t_used[pr.ti] = true;
    r_used[pr.ri] = true;
    MatchedAtom m;
    m.target = sect[pr.ti];
    m.recovered = rec[pr.ri];
    m.position_error = pr.d;
    m.weight_error = std::abs(m.recovered.weight - m.target.weight);
    m.position_ok = m.position_error <= epsilon;
    m.weight_ok = m.weight_error <= epsilon;
    rep.matched.push_back(m);
  }
  for (std::size_t ti = 0; ti < sect.size(); ++ti)
    if (!t_used[ti]) rep.missed.push_back(sect[ti]);
  std::vector<Atom> spurious;
  for (std::size_t ri = 0; ri < rec.size(); ++ri)
    if (!r_used[ri]) spurious.push_back(rec[ri]);
  rep.spurious = DiscreteMeasure(std::move(spurious));
  rep.spurious_norm = lp_norm(rep.spurious, p);
  rep.spurious_ok = rep.spurious_norm <= rep.bound;
  return rep;
}

}  // namespace ddid
