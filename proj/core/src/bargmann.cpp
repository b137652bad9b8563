#include "ddid/bargmann.hpp"

#include <algorithm>

#include "ddid/measures.hpp"
#include "ddid/parallel.hpp"

namespace ddid {

namespace {

// Eisenstein series of the Gaussian-integer lattice. G4 = Gamma(1/4)^8/(960 pi^2);
// G8, G12 follow from the standard recursion with G6 = 0.
constexpr double kG4 = 3.1512120021538975382;
constexpr double kG8 = 3.0 / 7.0 * kG4 * kG4;
constexpr double kG12 = 42.0 / 143.0 * kG4 * kG8;

Complex cis(double x) { return Complex(std::cos(x), std::sin(x)); }

// log(1 - u) + u, by series for small |u| to dodge the cancellation.
Complex log1m_plus_u(Complex u) {
  if (std::abs(u) < 0.25) {
    Complex acc(0.0, 0.0);
    Complex pw = u * u;
    for (int k = 2; k < 64; ++k) {
      const Complex term = pw / static_cast<double>(k);
      acc -= term;
      if (std::abs(term) < 1e-20 * (1.0 + std::abs(acc))) break;
      pw *= u;
    }
    return acc;
  }
  return std::log(Complex(1.0, 0.0) - u) + u;
}

}  // namespace

LogComplex log_sum(const std::vector<LogComplex>& terms) {
  double peak = -kInf;
  for (const auto& t : terms)
    if (!t.zero) peak = std::max(peak, t.log_abs);
  if (peak == -kInf) return LogComplex();
  Complex acc(0.0, 0.0);
  for (const auto& t : terms)
    if (!t.zero) acc += std::exp(t.log_abs - peak) * cis(t.arg);
  if (acc == Complex(0.0, 0.0)) return LogComplex();
  return LogComplex(peak + std::log(std::abs(acc)), std::arg(acc));
}

LatticeProductEngine::LatticeProductEngine(const SquareLattice& lat, double radius)
    : lat_(lat), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("LatticeProductEngine: radius must be > 0");
  const double g = lat.gamma;
  const long n = static_cast<long>(std::floor(radius / g)) + 1;
  for (long m = -n; m <= n; ++m) {
    for (long k = -n; k <= n; ++k) {
      if (m == 0 && k == 0) continue;
      const Complex w = lat.site(m, k);
      if (std::abs(w) <= radius) sites_.push_back({m, k, w});
    }
  }
  std::sort(sites_.begin(), sites_.end(), [](const Site& a, const Site& b) {
    const double ra = std::norm(a.omega), rb = std::norm(b.omega);
    if (ra != rb) return ra < rb;
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });
  // Tail coefficients S_k = gamma^{-k} G_k - sum_{0<|w|<=T} w^{-k}; the inner
  // sums are real by symmetry. Long double keeps the k = 12 cancellation from
  // polluting z^12 * S_12 at small gamma.
  long double in4 = 0, in8 = 0, in12 = 0;
  for (const auto& s : sites_) {
    const std::complex<long double> w(s.omega.real(), s.omega.imag());
    const std::complex<long double> w2 = w * w;
    const std::complex<long double> w4 = w2 * w2;
    in4 += (1.0L / w4).real();
    in8 += (1.0L / (w4 * w4)).real();
    in12 += (1.0L / (w4 * w4 * w4)).real();
  }
  const long double gi = 1.0L / static_cast<long double>(g);
  const long double g4 = gi * gi * gi * gi;
  s4_ = static_cast<double>(static_cast<long double>(kG4) * g4 - in4);
  s8_ = static_cast<double>(static_cast<long double>(kG8) * g4 * g4 - in8);
  s12_ = static_cast<double>(static_cast<long double>(kG12) * g4 * g4 * g4 - in12);
}

LogComplex LatticeProductEngine::completion_log(
    Complex z, const std::vector<std::pair<long, long>>& excluded) const {
  if (radius_ < 3.0 * std::max(std::abs(z), lat_.gamma))
    throw numeric_guard_error("lattice product: truncation radius below 3*max(|z|, gamma)");
  auto is_excluded = [&](long m, long n) {
    return std::binary_search(excluded.begin(), excluded.end(), std::make_pair(m, n));
  };
  Complex acc(0.0, 0.0);
  for (const auto& s : sites_) {
    if (!excluded.empty() && is_excluded(s.m, s.n)) continue;
    if (z == s.omega) return LogComplex();  // exact zero of the completion
    const Complex u = z / s.omega;
    acc += log1m_plus_u(u) + 0.5 * u * u;
  }
  // Analytic tail over |w| > T.
  const Complex z4 = z * z * z * z;
  const Complex z8 = z4 * z4;
  acc -= z4 / 4.0 * s4_ + z8 / 8.0 * s8_ + z8 * z4 / 12.0 * s12_;
  return LogComplex(acc.real(), acc.imag());
}

SigmaFunction::SigmaFunction(const SquareLattice& lat, double truncation_radius)
    : engine_(std::make_shared<LatticeProductEngine>(lat, truncation_radius)) {}

LogComplex SigmaFunction::operator()(Complex z) const {
  if (z == Complex(0.0, 0.0)) return LogComplex();
  const LogComplex prod = engine_->completion_log(z, {});
  if (prod.zero) return LogComplex();
  return LogComplex::from(z) * prod;
}

LogComplex sigma(const SquareLattice& lat, Complex z, double truncation_radius) {
  return SigmaFunction(lat, truncation_radius)(z);
}

GtildeModel GtildeModel::build(std::vector<IndexedZero> zeros, const SquareLattice& lat,
                               const Hypotheses& hyp, double truncation_radius,
                               std::shared_ptr<const LatticeProductEngine> engine) {
  GtildeModel g;
  g.lat_ = lat;
  g.hyp_ = hyp;
  if (zeros.empty()) throw std::invalid_argument("GtildeModel: empty zero set");
  // Canonical order: (0,0) first, then by index.
  std::sort(zeros.begin(), zeros.end(), [](const IndexedZero& a, const IndexedZero& b) {
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });
  std::size_t origin_pos = zeros.size();
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (i > 0 && zeros[i].m == zeros[i - 1].m && zeros[i].n == zeros[i - 1].n)
      throw std::invalid_argument("GtildeModel: duplicate index");
    if (zeros[i].m == 0 && zeros[i].n == 0) origin_pos = i;
  }
  if (origin_pos == zeros.size() || zeros[origin_pos].lambda != Complex(0.0, 0.0))
    throw std::invalid_argument("GtildeModel: index (0,0) must carry the zero at the origin");
  std::swap(zeros[0], zeros[origin_pos]);
  std::sort(zeros.begin() + 1, zeros.end(), [](const IndexedZero& a, const IndexedZero& b) {
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });
  for (std::size_t i = 1; i < zeros.size(); ++i) {
    if (zeros[i].lambda == Complex(0.0, 0.0))
      throw std::invalid_argument("GtildeModel: only index (0,0) may vanish");
  }

  // Hypothesis (i): at most one exceptional zero besides the origin, and it
  // keeps distance rho.
  for (std::size_t i = 0; i < zeros.size(); ++i)
    if (std::abs(zeros[i].lambda) <= hyp.s / 2.0) g.exceptional_.push_back(i);
  if (g.exceptional_.size() > 2)
    throw std::invalid_argument("GtildeModel: hypothesis (i) violated, #I_s > 2");
  for (std::size_t i : g.exceptional_) {
    if (i == 0) continue;
    if (std::abs(zeros[i].lambda) < hyp.rho)
      throw std::invalid_argument(
          "GtildeModel: hypothesis (i) violated, exceptional zero closer than rho");
  }

  // Hypothesis (iii): offsets within r.
  double max_site = 0.0;
  for (const auto& zr : zeros) {
    const Complex w = lat.site(zr.m, zr.n);
    max_site = std::max(max_site, std::abs(w));
    if (std::abs(zr.lambda - w) > hyp.r + 1e-12)
      throw std::invalid_argument("GtildeModel: hypothesis (iii) violated, offset exceeds R");
  }

  // Hypothesis (ii): Rayleigh bound on a doubling ladder of window sizes
  // (a finite check of the all-R' requirement; the ladder is recorded).
  {
    std::vector<Point> pts;
    double diam = 0.0;
    for (const auto& zr : zeros) {
      pts.push_back(Point(zr.lambda));
      diam = std::max(diam, std::abs(zr.lambda));
    }
    const SupportSet zs(std::move(pts));
    double top = hyp.r;
    while (top < 2.0 * diam + hyp.r) top *= 2.0;
    for (double rr = hyp.r; rr <= top * 1.0000001; rr *= 2.0) {
      const int cnt = sliding_count(zs, rr, Boundary::Open);
      if (cnt > hyp.theta * rr * rr)
        throw std::invalid_argument(
            "GtildeModel: hypothesis (ii) violated, Rayleigh bound fails on the ladder");
      g.ladder_.push_back(rr);
    }
    if (static_cast<double>(zs.size()) > hyp.theta * top * top)
      throw std::invalid_argument("GtildeModel: hypothesis (ii) unverifiable, ladder too short");
  }

  if (truncation_radius < 3.0 * std::max(max_site, lat.gamma))
    throw std::invalid_argument("GtildeModel: truncation radius below 3*max(site radius, gamma)");
  if (engine && (engine->lattice().gamma != lat.gamma || engine->radius() < truncation_radius))
    throw std::invalid_argument("GtildeModel: supplied engine does not cover the model");
  g.engine_ = engine ? std::move(engine)
                     : std::make_shared<const LatticeProductEngine>(lat, truncation_radius);

  g.zeros_ = std::move(zeros);
  g.index_set_.reserve(g.zeros_.size());
  for (const auto& zr : g.zeros_) g.index_set_.emplace_back(zr.m, zr.n);
  std::sort(g.index_set_.begin(), g.index_set_.end());
  return g;
}

LogComplex GtildeModel::eval(Complex z) const {
  // Retained zeros vanish exactly: the factor 1 - z/lambda is computed from
  // bit-identical values.
  Complex acc(0.0, 0.0);
  for (std::size_t i = 1; i < zeros_.size(); ++i) {
    const auto& zr = zeros_[i];
    if (z == zr.lambda) return LogComplex();
    const Complex u = z / zr.lambda;
    const Complex w = lat_.site(zr.m, zr.n);
    acc += log1m_plus_u(u) + z * z / (2.0 * w * w);
  }
  for (std::size_t i : exceptional_) {
    if (i == 0) continue;  // the origin factor is divided out with g/z
    const auto& zr = zeros_[i];
    acc += z / lat_.site(zr.m, zr.n) - z / zr.lambda;
  }
  const LogComplex completion = engine_->completion_log(z, index_set_);
  if (completion.zero) return LogComplex();
  return LogComplex(acc.real(), acc.imag()) * completion;
}

GtildeModel enumerate_origin_model(const SupportSet& pts, double sep_s, const SquareLattice& lat,
                                   double theta, double r_window, double rho,
                                   double truncation_radius,
                                   std::shared_ptr<const LatticeProductEngine> engine) {
  std::size_t origin = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == Point(0.0, 0.0)) origin = i;
  if (origin == pts.size())
    throw std::invalid_argument("enumerate_origin_model: set must contain the origin");

  const auto enumeration = uniformly_close_enumeration(pts, lat.gamma, theta, r_window);
  if (!enumeration.ok)
    throw numeric_guard_error("enumerate_origin_model: " + enumeration.failure);

  std::vector<GtildeModel::IndexedZero> zeros(pts.size());
  long m0 = 0, n0 = 0;
  bool zero_zero_used = false;
  std::size_t zero_zero_holder = pts.size();
  for (const auto& pr : enumeration.pairing) {
    zeros[pr.point_index] = {pr.m, pr.n, pts[pr.point_index].to_complex()};
    if (pr.point_index == origin) { m0 = pr.m; n0 = pr.n; }
    if (pr.m == 0 && pr.n == 0) { zero_zero_used = true; zero_zero_holder = pr.point_index; }
  }
  // Re-enumeration placing the origin at index (0,0); the displaced holder
  // (if any) takes the origin's old index. Offsets grow to at most 2R'.
  if (!(m0 == 0 && n0 == 0)) {
    zeros[origin].m = 0;
    zeros[origin].n = 0;
    if (zero_zero_used) {
      zeros[zero_zero_holder].m = m0;
      zeros[zero_zero_holder].n = n0;
    }
  }
  GtildeModel::Hypotheses hyp{sep_s, theta, std::max(r_window, 2.0 * enumeration.r_prime), rho};
  return GtildeModel::build(std::move(zeros), lat, hyp, truncation_radius, std::move(engine));
}

FockFunction bargmann(const GaborExpansion& x) {
  const std::vector<GaborTerm> terms = x.terms();
  auto eval = [terms](Complex z) {
    std::vector<LogComplex> parts;
    parts.reserve(terms.size());
    for (const auto& t : terms) {
      if (t.coeff == Complex(0.0, 0.0)) continue;
      const Complex mu = t.loc.to_complex();
      // B(pi(mu) phi)(z) = e^{i pi tau nu} e^{-pi |mu|^2 / 2} e^{pi mu z}
      const Complex expo = kPi * mu * z;
      parts.push_back(LogComplex(std::log(std::abs(t.coeff)) - kPi * std::norm(mu) / 2.0 + expo.real(),
                                 std::arg(t.coeff) + kPi * t.loc.tau * t.loc.nu + expo.imag()));
    }
    return log_sum(parts);
  };
  return FockFunction{eval, "bargmann-of-signal"};
}

FockFunction bargmann(const SampledSignal& x) {
  const SampledSignal sig = x;
  auto eval = [sig](Complex z) {
    // B(f)(z) = 2^(1/4) e^{pi z^2/2} int e^{-pi (t - z)^2} f(t) dt
    Complex acc(0.0, 0.0);
    double peak = 0.0, edge = 0.0;
    const std::size_t n = sig.samples.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double t = sig.t_at(k);
      const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
      const Complex d = Complex(t, 0.0) - z;
      const Complex kern = std::exp(-kPi * d * d);
      const Complex term = sig.samples[k] * kern;
      acc += w * term;
      peak = std::max(peak, std::abs(term));
      if (k == 0 || k + 1 == n) edge = std::max(edge, std::abs(term));
    }
    if (peak > 0.0 && edge > 1e-6 * peak)
      throw numeric_guard_error("bargmann: grid too small (kernel mass at the sample boundary)");
    acc *= sig.dt;
    if (acc == Complex(0.0, 0.0)) return LogComplex();
    const Complex half = kPi * z * z / 2.0;
    return LogComplex(std::log(std::abs(acc)) + 0.25 * std::log(2.0) + half.real(),
                      std::arg(acc) + half.imag());
  };
  return FockFunction{eval, "bargmann-of-signal"};
}

double fock_norm(const FockFunction& f, double p, const TFGrid& grid) {
  if (!(p >= 1.0)) throw std::invalid_argument("fock_norm: p must be in [1, inf]");
  const std::size_t nt = grid.ntau(), nn = grid.nnu();
  if (nt < 3 || nn < 3) throw numeric_guard_error("fock_norm: grid too small");
  // Gaussian-weighted magnitudes, filled in parallel, reduced in index order.
  std::vector<double> weighted(nt * nn, -kInf);
  parallel_for(nt, [&](std::size_t i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const Complex z = grid.node(i, j).to_complex();
      const LogComplex v = f(z);
      if (!v.zero) weighted[i * nn + j] = v.log_abs - kPi * std::norm(z) / 2.0;
    }
  });
  if (p == kInf) {
    double best = -kInf;
    bool best_on_edge = false;
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nn; ++j) {
        const double g = weighted[i * nn + j];
        if (g > best) {
          best = g;
          best_on_edge = (i == 0 || j == 0 || i + 1 == nt || j + 1 == nn);
        }
      }
    if (best == -kInf) return 0.0;
    if (best_on_edge) throw numeric_guard_error("fock_norm: grid too small (sup on the boundary)");
    return std::exp(best);
  }
  double total = 0.0, boundary = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    const double wi = (i == 0 || i + 1 == nt) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < nn; ++j) {
      const double wj = (j == 0 || j + 1 == nn) ? 0.5 : 1.0;
      const double g = weighted[i * nn + j];
      if (g == -kInf) continue;
      const double cell = wi * wj * std::exp(p * g);
      total += cell;
      if (i == 0 || j == 0 || i + 1 == nt || j + 1 == nn) boundary += cell;
    }
  }
  if (total > 0.0 && boundary > 1e-6 * total)
    throw numeric_guard_error("fock_norm: grid too small (boundary mass above threshold)");
  return std::pow(total * grid.dtau * grid.dnu, 1.0 / p);
}

SupportSet union_support(const SupportSet& l1, const SupportSet& l2) {
  std::vector<Point> pts = l1.points();
  pts.insert(pts.end(), l2.points().begin(), l2.points().end());
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.tau != b.tau ? a.tau < b.tau : a.nu < b.nu;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return SupportSet(std::move(pts));
}

InterpolantResult interpolant(const SupportSet& l1, const SupportSet& l2,
                              const std::vector<Complex>& beta, double gamma, double theta,
                              double eval_margin) {
  if (!(theta > 0.0) || !(2.0 * theta < 1.0 / (gamma * gamma)) || !(gamma > 1.0))
    throw std::invalid_argument("interpolant: need 2 theta < gamma^-2 < 1");
  const SupportSet uni = union_support(l1, l2);
  if (uni.empty()) throw std::invalid_argument("interpolant: empty support");
  if (beta.size() != uni.size())
    throw std::invalid_argument("interpolant: beta must match the union support");

  const double s = std::min(separation(l1), separation(l2));
  double rho = mutual_separation(l1, l2);
  rho = std::min(rho, s / 2.0);
  if (!(rho > 0.0)) throw numeric_guard_error("interpolant: coincident supports (rho = 0)");

  // Smallest dyadic window from which both per-set Rayleigh bounds hold up
  // the whole ladder.
  double diam = 0.0;
  for (const auto& p : uni.points()) diam = std::max(diam, 2.0 * p.abs());
  double top = 1.0;
  while (top < 2.0 * diam + 1.0) top *= 2.0;
  auto set_ok_from = [&](double r0) {
    for (double rr = r0; rr <= top * 1.0000001; rr *= 2.0) {
      if (!l1.empty() && sliding_count(l1, rr, Boundary::Open) > theta * rr * rr) return false;
      if (!l2.empty() && sliding_count(l2, rr, Boundary::Open) > theta * rr * rr) return false;
    }
    return true;
  };
  double r_window = 0.0;
  for (double r0 = 1.0; r0 <= top * 1.0000001; r0 *= 2.0) {
    if (set_ok_from(r0)) { r_window = r0; break; }
  }
  if (r_window == 0.0)
    throw numeric_guard_error("interpolant: sets exceed the Rayleigh slope theta on all windows");
  if (static_cast<double>(uni.size()) > 2.0 * theta * top * top)
    throw numeric_guard_error("interpolant: ladder too short for the union size");

  const double reach = 2.0 * diam + eval_margin;
  const double radius = 3.0 * std::max(reach, gamma);
  auto engine = std::make_shared<const LatticeProductEngine>(SquareLattice(gamma), radius);

  InterpolantResult res;
  res.support = uni.points();
  res.rho = rho;
  res.gamma = gamma;
  res.theta = theta;
  res.r_window = r_window;
  res.models.reserve(uni.size());
  for (const auto& lam : uni.points()) {
    // Recentred conjugate set {conj(lambda') - conj(lambda)}.
    std::vector<Point> rec;
    rec.reserve(uni.size());
    for (const auto& q : uni.points())
      rec.push_back(Point(q.tau - lam.tau, -(q.nu - lam.nu)));
    res.models.push_back(enumerate_origin_model(SupportSet(std::move(rec)), s,
                                                SquareLattice(gamma), 2.0 * theta, r_window, rho,
                                                radius, engine));
  }

  const std::vector<Point> support = res.support;
  const std::vector<GtildeModel> models = res.models;  // value copy into the closure
  auto eval = [support, models, beta](Complex z) {
    std::vector<LogComplex> parts;
    parts.reserve(support.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (beta[k] == Complex(0.0, 0.0)) continue;
      const Complex lam = support[k].to_complex();
      const LogComplex g = models[k].eval(z - std::conj(lam));
      if (g.zero) continue;
      const Complex expo = kPi * lam * z;
      const LogComplex term(std::log(std::abs(beta[k])) + expo.real() - kPi * std::norm(lam) / 2.0 +
                                g.log_abs,
                            std::arg(beta[k]) + expo.imag() + g.arg);
      parts.push_back(term);
    }
    return log_sum(parts);
  };
  res.f = FockFunction{eval, "interpolant"};
  return res;
}

}  // namespace ddid
