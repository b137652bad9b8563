#include "ddid/measures.hpp"

#include <algorithm>
#include <map>

namespace ddid {

namespace {

void check_distinct(const std::vector<Point>& pts, const char* what) {
  std::vector<Point> sorted = pts;
  std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
    return a.tau != b.tau ? a.tau < b.tau : a.nu < b.nu;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1])
      throw std::invalid_argument(std::string(what) + ": duplicate location");
  }
}

}  // namespace

SupportSet::SupportSet(std::vector<Point> pts) : pts_(std::move(pts)) {
  for (const auto& p : pts_) require_finite(p, "SupportSet");
  check_distinct(pts_, "SupportSet");
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::vector<Point> pts;
  pts.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    require_finite(a.location, "DiscreteMeasure");
    if (!std::isfinite(a.weight.real()) || !std::isfinite(a.weight.imag()))
      throw std::invalid_argument("DiscreteMeasure: non-finite weight");
    if (a.weight == Complex(0.0, 0.0))
      throw std::invalid_argument("DiscreteMeasure: zero weight in support");
    pts.push_back(a.location);
  }
  check_distinct(pts, "DiscreteMeasure");
}

SupportSet DiscreteMeasure::support() const {
  std::vector<Point> pts;
  pts.reserve(atoms_.size());
  for (const auto& a : atoms_) pts.push_back(a.location);
  return SupportSet(std::move(pts));
}

double separation(const SupportSet& s) {
  const auto& p = s.points();
  if (p.size() <= 1) return kInf;
  double best = kInf;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      best = std::min(best, distance(p[i], p[j]));
  return best;
}

int relative_separation(const SupportSet& s) {
  const auto& p = s.points();
  if (p.empty()) return 0;
  // Slack absorbing the O(ulp) error in pair-intersection centers; the two
  // generating points sit exactly on the unit circle of their candidates.
  const double tol = 1e-9;
  auto count_at = [&](double cx, double cy) {
    int c = 0;
    for (const auto& q : p) {
      const double dx = q.tau - cx, dy = q.nu - cy;
      if (dx * dx + dy * dy <= 1.0 + tol) ++c;
    }
    return c;
  };
  int best = 0;
  for (const auto& q : p) best = std::max(best, count_at(q.tau, q.nu));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double d = distance(p[i], p[j]);
      if (d > 2.0 || d == 0.0) continue;
      // Centers of the two unit circles through p[i] and p[j].
      const double mx = 0.5 * (p[i].tau + p[j].tau), my = 0.5 * (p[i].nu + p[j].nu);
      const double h = std::sqrt(std::max(0.0, 1.0 - 0.25 * d * d));
      const double ux = (p[j].nu - p[i].nu) / d, uy = -(p[j].tau - p[i].tau) / d;
      best = std::max(best, count_at(mx + h * ux, my + h * uy));
      best = std::max(best, count_at(mx - h * ux, my - h * uy));
    }
  }
  return best;
}

double mutual_separation(const SupportSet& s1, const SupportSet& s2) {
  // Cross pairs at distinct locations; a pair of points that both belong to
  // the two sets simultaneously contributes nothing.
  auto shared_with = [](const Point& p, const SupportSet& other) {
    for (const auto& q : other.points())
      if (p == q) return true;
    return false;
  };
  std::vector<bool> a_shared(s1.size()), b_shared(s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) a_shared[i] = shared_with(s1[i], s2);
  for (std::size_t j = 0; j < s2.size(); ++j) b_shared[j] = shared_with(s2[j], s1);
  double best = kInf;
  for (std::size_t i = 0; i < s1.size(); ++i)
    for (std::size_t j = 0; j < s2.size(); ++j) {
      if (s1[i] == s2[j]) continue;
      if (a_shared[i] && b_shared[j]) continue;
      best = std::min(best, distance(s1[i], s2[j]));
    }
  return best;
}

double lp_norm(const DiscreteMeasure& mu, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (p == kInf) {
    double m = 0.0;
    for (const auto& a : mu.atoms()) m = std::max(m, std::abs(a.weight));
    return m;
  }
  double acc = 0.0;
  for (const auto& a : mu.atoms()) acc += std::pow(std::abs(a.weight), p);
  return std::pow(acc, 1.0 / p);
}

SupportSet translate(const SupportSet& s, const Point& z) {
  require_finite(z, "translate");
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (const auto& q : s.points()) pts.push_back(q + z);
  return SupportSet(std::move(pts));
}

DiscreteMeasure measure_difference(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2) {
  std::map<std::pair<double, double>, Complex> acc;
  for (const auto& a : mu1.atoms()) acc[{a.location.tau, a.location.nu}] += a.weight;
  for (const auto& a : mu2.atoms()) acc[{a.location.tau, a.location.nu}] -= a.weight;
  std::vector<Atom> atoms;
  for (const auto& [loc, w] : acc) {
    if (w == Complex(0.0, 0.0)) continue;
    atoms.push_back({Point(loc.first, loc.second), w});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure scale(const DiscreteMeasure& mu, Complex c) {
  if (c == Complex(0.0, 0.0)) return DiscreteMeasure();
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.weight *= c;
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace ddid
