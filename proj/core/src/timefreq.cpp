#include "ddid/timefreq.hpp"

#include <algorithm>

#include "ddid/parallel.hpp"

namespace ddid {

namespace {

Complex cis(double x) { return Complex(std::cos(x), std::sin(x)); }

// Iterative radix-2 FFT, in place. n must be a power of two.
void fft(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const Complex wlen = cis(ang);
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& v : a) v /= static_cast<double>(n);
}

constexpr double kBoundaryMassFraction = 1e-6;

}  // namespace

double gaussian_window(double t) { return std::pow(2.0, 0.25) * std::exp(-kPi * t * t); }

GaborExpansion::GaborExpansion(std::vector<GaborTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    require_finite(t.loc, "GaborExpansion");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw std::invalid_argument("GaborExpansion: non-finite coefficient");
  }
}

Complex GaborExpansion::eval(double t) const {
  Complex acc(0.0, 0.0);
  for (const auto& term : terms_)
    acc += term.coeff * cis(2.0 * kPi * term.loc.nu * t) * gaussian_window(t - term.loc.tau);
  return acc;
}

GaborExpansion GaborExpansion::operator*(Complex c) const {
  std::vector<GaborTerm> t = terms_;
  for (auto& term : t) term.coeff *= c;
  return GaborExpansion(std::move(t));
}

GaborExpansion GaborExpansion::operator+(const GaborExpansion& o) const {
  std::vector<GaborTerm> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return GaborExpansion(std::move(t));
}

GaborExpansion GaborExpansion::operator-(const GaborExpansion& o) const {
  std::vector<GaborTerm> t = terms_;
  t.reserve(t.size() + o.terms_.size());
  for (const auto& term : o.terms_) t.push_back({-term.coeff, term.loc});
  return GaborExpansion(std::move(t));
}

SampledSignal::SampledSignal(double t0_, double dt_, std::vector<Complex> s)
    : t0(t0_), dt(dt_), samples(std::move(s)) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
    throw std::invalid_argument("SampledSignal: require finite t0 and dt > 0");
  for (const auto& v : samples)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("SampledSignal: non-finite sample");
}

SampledSignal sample_gaussian(double lo, double hi, double dt) {
  return sample(GaborExpansion::gaussian(), lo, hi, dt);
}

SampledSignal sample(const GaborExpansion& x, double lo, double hi, double dt) {
  if (!(hi > lo)) throw std::invalid_argument("sample: empty interval");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / dt + 0.5)) + 1;
  std::vector<Complex> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = x.eval(lo + dt * static_cast<double>(k));
  return SampledSignal(lo, dt, std::move(s));
}

TFGrid::TFGrid(double t0, double t1, double n0, double n1, double dt, double dn)
    : tau0(t0), tau1(t1), nu0(n0), nu1(n1), dtau(dt), dnu(dn) {
  if (!(t1 > t0) || !(n1 > n0) || !(dt > 0.0) || !(dn > 0.0))
    throw std::invalid_argument("TFGrid: require nonempty ranges and positive steps");
}

std::size_t TFGrid::ntau() const {
  return static_cast<std::size_t>(std::floor((tau1 - tau0) / dtau + 0.5)) + 1;
}
std::size_t TFGrid::nnu() const {
  return static_cast<std::size_t>(std::floor((nu1 - nu0) / dnu + 0.5)) + 1;
}
Point TFGrid::node(std::size_t i, std::size_t j) const {
  return Point(tau0 + dtau * static_cast<double>(i), nu0 + dnu * static_cast<double>(j));
}

TFGrid auto_grid(const std::vector<Point>& pts, double margin, double step) {
  double t0 = 0, t1 = 0, n0 = 0, n1 = 0;
  bool first = true;
  for (const auto& p : pts) {
    if (first) {
      t0 = t1 = p.tau;
      n0 = n1 = p.nu;
      first = false;
    } else {
      t0 = std::min(t0, p.tau);
      t1 = std::max(t1, p.tau);
      n0 = std::min(n0, p.nu);
      n1 = std::max(n1, p.nu);
    }
  }
  return TFGrid(t0 - margin, t1 + margin, n0 - margin, n1 + margin, step, step);
}

Complex gaussian_ambiguity(double tau, double nu) {
  return cis(-kPi * tau * nu) * std::exp(-kPi * (tau * tau + nu * nu) / 2.0);
}

Complex gabor_inner(const Point& mu, const Point& la) {
  const double dt = mu.tau - la.tau, dn = mu.nu - la.nu;
  return std::exp(-kPi * (dt * dt + dn * dn) / 2.0) * cis(kPi * dn * (mu.tau + la.tau));
}

GaborExpansion tf_shift(const GaborExpansion& x, const Point& lambda) {
  require_finite(lambda, "tf_shift");
  std::vector<GaborTerm> t = x.terms();
  for (auto& term : t) {
    term.coeff *= cis(-2.0 * kPi * lambda.tau * term.loc.nu);
    term.loc = term.loc + lambda;
  }
  return GaborExpansion(std::move(t));
}

SampledSignal tf_shift(const SampledSignal& x, const Point& lambda) {
  require_finite(lambda, "tf_shift");
  if (std::abs(lambda.tau) > 0.5 * x.extent())
    throw numeric_guard_error("tf_shift: translation exceeds the sampled extent");
  SampledSignal out = x;
  if (lambda.tau != 0.0) {
    std::size_t m = 1;
    while (m < 2 * x.samples.size()) m <<= 1;
    std::vector<Complex> buf(m, Complex(0.0, 0.0));
    std::copy(x.samples.begin(), x.samples.end(), buf.begin());
    fft(buf, false);
    for (std::size_t j = 0; j < m; ++j) {
      const double fj = (j <= m / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(m)) /
                        (static_cast<double>(m) * x.dt);
      buf[j] *= cis(-2.0 * kPi * fj * lambda.tau);
    }
    fft(buf, true);
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(x.samples.size()),
              out.samples.begin());
  }
  if (lambda.nu != 0.0)
    for (std::size_t k = 0; k < out.samples.size(); ++k)
      out.samples[k] *= cis(2.0 * kPi * lambda.nu * out.t_at(k));
  return out;
}

Complex stft_at(const GaborExpansion& x, const Point& lambda) {
  Complex acc(0.0, 0.0);
  for (const auto& term : x.terms()) acc += term.coeff * gabor_inner(term.loc, lambda);
  return acc;
}

Complex stft_at(const SampledSignal& x, const Point& lambda) {
  // <x, pi(lambda) phi> by the trapezoid rule over the sample grid.
  Complex acc(0.0, 0.0);
  const std::size_t n = x.samples.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = x.t_at(k);
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    acc += w * x.samples[k] * std::conj(cis(2.0 * kPi * lambda.nu * t)) *
           gaussian_window(t - lambda.tau);
  }
  return acc * x.dt;
}

namespace {

template <typename Signal>
STFTField stft_impl(const Signal& x, const TFGrid& grid) {
  STFTField f;
  f.grid = grid;
  const std::size_t nt = grid.ntau(), nn = grid.nnu();
  f.values.resize(nt * nn);
  parallel_for(nt, [&](std::size_t i) {
    for (std::size_t j = 0; j < nn; ++j) f.values[i * nn + j] = stft_at(x, grid.node(i, j));
  });
  return f;
}

double mp_norm_of_field(const STFTField& f, double p, bool weighted) {
  const std::size_t nt = f.grid.ntau(), nn = f.grid.nnu();
  if (nt < 3 || nn < 3) throw numeric_guard_error("mp_norm: grid too small (needs >= 3 nodes per axis)");
  double total = 0.0, boundary = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    const double wi = (i == 0 || i + 1 == nt) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < nn; ++j) {
      const double wj = (j == 0 || j + 1 == nn) ? 0.5 : 1.0;
      const Point z = f.grid.node(i, j);
      double v = std::pow(std::abs(f.at(i, j)), p);
      if (weighted) v *= std::pow(1.0 + z.abs(), p);
      const double cell = wi * wj * v;
      total += cell;
      if (i == 0 || j == 0 || i + 1 == nt || j + 1 == nn) boundary += cell;
    }
  }
  if (total > 0.0 && boundary > kBoundaryMassFraction * total)
    throw numeric_guard_error("mp_norm: grid too small (boundary mass above threshold)");
  return std::pow(total * f.grid.dtau * f.grid.dnu, 1.0 / p);
}

}  // namespace

STFTField stft(const GaborExpansion& x, const TFGrid& grid) { return stft_impl(x, grid); }
STFTField stft(const SampledSignal& x, const TFGrid& grid) { return stft_impl(x, grid); }

double mp_norm(const GaborExpansion& x, double p, const TFGrid& grid, bool weighted) {
  if (!(p >= 1.0) || p == kInf) throw std::invalid_argument("mp_norm: p must be in [1, inf)");
  return mp_norm_of_field(stft(x, grid), p, weighted);
}

double mp_norm(const SampledSignal& x, double p, const TFGrid& grid, bool weighted) {
  if (!(p >= 1.0) || p == kInf) throw std::invalid_argument("mp_norm: p must be in [1, inf)");
  return mp_norm_of_field(stft(x, grid), p, weighted);
}

Complex inner(const GaborExpansion& x, const GaborExpansion& y) {
  Complex acc(0.0, 0.0);
  for (const auto& a : x.terms())
    for (const auto& b : y.terms()) acc += a.coeff * std::conj(b.coeff) * gabor_inner(a.loc, b.loc);
  return acc;
}

double m2_norm(const GaborExpansion& x) {
  return std::sqrt(std::max(0.0, inner(x, x).real()));
}

double m2_norm(const SampledSignal& x) {
  double acc = 0.0;
  const std::size_t n = x.samples.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    acc += w * std::norm(x.samples[k]);
  }
  return std::sqrt(acc * x.dt);
}

GaborExpansion synthesize(const SupportSet& s, const std::vector<Complex>& alpha,
                          const GaborExpansion& x) {
  if (s.size() != alpha.size()) throw std::invalid_argument("synthesize: |alpha| != |S|");
  std::vector<GaborTerm> terms;
  terms.reserve(s.size() * x.terms().size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const GaborExpansion shifted = tf_shift(x, s[i]);
    for (const auto& term : shifted.terms()) terms.push_back({alpha[i] * term.coeff, term.loc});
  }
  return GaborExpansion(std::move(terms));
}

SampledSignal synthesize(const SupportSet& s, const std::vector<Complex>& alpha,
                         const SampledSignal& x) {
  if (s.size() != alpha.size()) throw std::invalid_argument("synthesize: |alpha| != |S|");
  SampledSignal acc(x.t0, x.dt, std::vector<Complex>(x.samples.size(), Complex(0.0, 0.0)));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const SampledSignal shifted = tf_shift(x, s[i]);
    for (std::size_t k = 0; k < acc.samples.size(); ++k)
      acc.samples[k] += alpha[i] * shifted.samples[k];
  }
  return acc;
}

GaborExpansion synthesize(const DiscreteMeasure& mu, const GaborExpansion& x) {
  std::vector<Complex> alpha;
  std::vector<Point> pts;
  alpha.reserve(mu.size());
  pts.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    alpha.push_back(a.weight);
    pts.push_back(a.location);
  }
  return synthesize(SupportSet(std::move(pts)), alpha, x);
}

std::vector<Complex> analyze(const GaborExpansion& y, const SupportSet& s,
                             const GaborExpansion& x) {
  std::vector<Complex> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = inner(y, tf_shift(x, s[i]));
  return out;
}

std::vector<Complex> analyze(const SampledSignal& y, const SupportSet& s, const SampledSignal& x,
                             const TFGrid& grid) {
  // Dual pairing through the STFT: <y, pi(l)x> = int V_phi(y) conj(V_phi(pi(l)x)).
  const STFTField fy = stft(y, grid);
  const std::size_t nt = grid.ntau(), nn = grid.nnu();
  std::vector<Complex> out(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    const STFTField fx = stft(tf_shift(x, s[a]), grid);
    Complex acc(0.0, 0.0);
    double total = 0.0, boundary = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double wi = (i == 0 || i + 1 == nt) ? 0.5 : 1.0;
      for (std::size_t j = 0; j < nn; ++j) {
        const double wj = (j == 0 || j + 1 == nn) ? 0.5 : 1.0;
        const Complex term = wi * wj * fy.at(i, j) * std::conj(fx.at(i, j));
        acc += term;
        total += std::abs(term);
        if (i == 0 || j == 0 || i + 1 == nt || j + 1 == nn) boundary += std::abs(term);
      }
    }
    if (total > 0.0 && boundary > kBoundaryMassFraction * total)
      throw numeric_guard_error("analyze: grid too small (boundary mass above threshold)");
    out[a] = acc * grid.dtau * grid.dnu;
  }
  return out;
}

namespace {

// Quadrature of Q(eps, f) = int sqrt(eps) e^{-pi eps a^2} e^{2 pi i a f} da.
Complex averaged_kernel_1d(double eps, double f) {
  const double l = 6.0 / std::sqrt(eps);
  const double h = 1.0 / (std::abs(f) + 3.0 * std::sqrt(eps) + 3.0);
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * l / h));
  const double step = 2.0 * l / static_cast<double>(n);
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = -l + step * static_cast<double>(k);
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    acc += w * std::exp(-kPi * eps * a * a) * cis(2.0 * kPi * a * f);
  }
  return acc * step * std::sqrt(eps);
}

}  // namespace

Complex weight_extract(const GaborExpansion& y, const Point& lambda,
                       const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw std::invalid_argument("weight_extract: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("weight_extract: eps must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("weight_extract: eps list must be strictly decreasing");
  }
  const double x = lambda.tau, w = lambda.nu;
  auto averaged = [&](double eps) {
    // I(eps) = sum_m c_m e^{2 pi i tau_m w} e^{i pi (nu_m - w)(tau_m + x)}
    //          |gabor_inner| * Q(eps, nu_m - w) * Q(eps, tau_m - x);
    // the a-b cross phase of the averaging kernel cancels against the probe
    // phases, leaving one separable Gaussian quadrature per atom and axis.
    Complex acc(0.0, 0.0);
    for (const auto& term : y.terms()) {
      const double dt = term.loc.tau - x, dn = term.loc.nu - w;
      const Complex stat = cis(2.0 * kPi * term.loc.tau * w) * cis(kPi * dn * (term.loc.tau + x)) *
                           std::exp(-kPi * (dt * dt + dn * dn) / 2.0);
      acc += term.coeff * stat * averaged_kernel_1d(eps, dn) * averaged_kernel_1d(eps, dt);
    }
    return acc;
  };
  Complex extrapolated;
  if (eps_list.size() == 1) {
    extrapolated = averaged(eps_list[0]);
  } else {
    const double e1 = eps_list[eps_list.size() - 2], e2 = eps_list.back();
    const Complex i1 = averaged(e1), i2 = averaged(e2);
    extrapolated = i2 + (i2 - i1) * (e2 / (e1 - e2));
  }
  return extrapolated * cis(-2.0 * kPi * x * w);
}

GaborExpansion perturbed_synthesis(const SupportSet& s, const std::vector<Complex>& alpha,
                                   const std::vector<Point>& eps) {
  if (s.size() != alpha.size() || s.size() != eps.size())
    throw std::invalid_argument("perturbed_synthesis: size mismatch");
  std::vector<GaborTerm> terms;
  terms.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Complex phase = cis(-2.0 * kPi * s[i].tau * eps[i].nu);
    terms.push_back({alpha[i] * phase, s[i] + eps[i]});
  }
  return GaborExpansion(std::move(terms));
}

}  // namespace ddid
