#include "ddid/density.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace ddid {

double SquareLattice::distance_to(Complex z) const {
  const double mx = std::round(z.real() / gamma) * gamma;
  const double my = std::round(z.imag() / gamma) * gamma;
  return std::hypot(z.real() - mx, z.imag() - my);
}

namespace {

// Candidate 1-D anchors for the sliding maximum. Closed windows: both edge
// families (window = [a, a+R] with a = coord or a = coord - R, tested in the
// exact forms 0 <= x-a <= R and 0 <= r-x <= R). Open windows: midpoints
// between consecutive critical values of a -> #(coords in (a, a+R)).
int count_open(const std::vector<double>& xs, double a, double r) {
  int c = 0;
  for (double x : xs) {
    if (x > a && x < a + r) ++c;
  }
  return c;
}

std::vector<double> open_anchor_midpoints(const std::vector<double>& coords, double r) {
  std::vector<double> crit;
  crit.reserve(2 * coords.size());
  for (double x : coords) {
    crit.push_back(x - r);
    crit.push_back(x);
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  std::vector<double> mids;
  mids.reserve(crit.size());
  for (std::size_t i = 0; i + 1 < crit.size(); ++i) mids.push_back(0.5 * (crit[i] + crit[i + 1]));
  if (mids.empty() && !crit.empty()) mids.push_back(crit.front() - 0.5 * r);
  return mids;
}

}  // namespace

SlidingCountResult sliding_count_window(const SupportSet& s, double r, Boundary boundary) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("sliding_count: R must be > 0");
  SlidingCountResult res;
  const auto& pts = s.points();
  if (pts.empty()) return res;

  if (boundary == Boundary::Closed) {
    // x anchors: each coordinate as left edge, and each coordinate as right
    // edge. For one anchor the subset passing the x test is extracted, then
    // the y problem is solved by a sorted sweep over both y edge families.
    std::vector<double> ys_window;
    auto best_y = [&](double* y_anchor_out) {
      std::sort(ys_window.begin(), ys_window.end());
      int best = 0;
      double anchor = 0.0;
      const auto& v = ys_window;
      // bottom edge at v[j]: count y in [v[j], v[j]+r]
      for (std::size_t j = 0, k = 0; j < v.size(); ++j) {
        if (k < j) k = j;
        while (k + 1 < v.size() && v[k + 1] - v[j] <= r) ++k;
        const int c = static_cast<int>(k - j + 1);
        if (c > best) { best = c; anchor = v[j]; }
      }
      // top edge at v[j]: count y in [v[j]-r, v[j]]
      for (std::size_t j = 0, k = 0; j < v.size(); ++j) {
        if (k > j) k = j;
        while (k > 0 && v[j] - v[k - 1] <= r) --k;
        while (v[j] - v[k] > r) ++k;
        const int c = static_cast<int>(j - k + 1);
        if (c > best) { best = c; anchor = v[j] - r; }
      }
      *y_anchor_out = anchor;
      return best;
    };
    auto try_x_anchor = [&](double a) {
      ys_window.clear();
      for (const auto& p : pts) {
        const double d = p.tau - a;
        if (d >= 0.0 && d <= r) ys_window.push_back(p.nu);
      }
      if (static_cast<int>(ys_window.size()) <= res.count) return;
      double yb = 0.0;
      const int c = best_y(&yb);
      if (c > res.count) res = {c, Rect{a, yb, a + r, yb + r}};
    };
    for (const auto& p : pts) {
      try_x_anchor(p.tau);
      try_x_anchor(p.tau - r);
    }
    return res;
  }

  // Open windows: evaluate strictly-inside counts at midpoint anchors.
  std::vector<double> xs, ys;
  xs.reserve(pts.size());
  for (const auto& p : pts) xs.push_back(p.tau);
  std::sort(xs.begin(), xs.end());
  const std::vector<double> ax = open_anchor_midpoints(xs, r);
  std::vector<double> ys_window;
  for (double a : ax) {
    ys_window.clear();
    for (const auto& p : pts)
      if (p.tau > a && p.tau < a + r) ys_window.push_back(p.nu);
    if (static_cast<int>(ys_window.size()) <= res.count) continue;
    std::sort(ys_window.begin(), ys_window.end());
    for (double b : open_anchor_midpoints(ys_window, r)) {
      const int c = count_open(ys_window, b, r);
      if (c > res.count) res = {c, Rect{a, b, a + r, b + r}};
    }
  }
  return res;
}

int sliding_count(const SupportSet& s, double r, Boundary boundary) {
  return sliding_count_window(s, r, boundary).count;
}

DensityCurve density_estimate(const std::vector<SupportSet>& sets,
                              const std::vector<double>& r_list, Boundary boundary) {
  if (r_list.empty()) throw std::invalid_argument("density_estimate: empty R list");
  std::vector<double> rs = r_list;
  std::sort(rs.begin(), rs.end());
  DensityCurve curve;
  for (double r : rs) {
    if (!(r > 0.0)) throw std::invalid_argument("density_estimate: R must be > 0");
    int count = 0;
    for (const auto& s : sets) count = std::max(count, sliding_count(s, r, boundary));
    curve.entries.push_back({r, count, count / (r * r)});
  }
  const std::size_t tail_from = curve.entries.size() / 2;
  for (std::size_t i = tail_from; i < curve.entries.size(); ++i)
    curve.tail_max = std::max(curve.tail_max, curve.entries[i].ratio);
  return curve;
}

SupportSet lattice_points(const SquareLattice& lat, const Rect& box) {
  if (!(box.x1 >= box.x0) || !(box.y1 >= box.y0))
    throw std::invalid_argument("lattice_points: empty box");
  const double g = lat.gamma;
  const double nudge = 1e-12;
  const long mlo = static_cast<long>(std::ceil(box.x0 / g - nudge));
  const long mhi = static_cast<long>(std::floor(box.x1 / g + nudge));
  const long nlo = static_cast<long>(std::ceil(box.y0 / g - nudge));
  const long nhi = static_cast<long>(std::floor(box.y1 / g + nudge));
  std::vector<Point> pts;
  for (long m = mlo; m <= mhi; ++m)
    for (long n = nlo; n <= nhi; ++n) pts.push_back(Point(g * m, g * n));
  return SupportSet(std::move(pts));
}

SupportSet hexagonal_points(double r, const Rect& box) {
  if (!(r > 0.0)) throw std::invalid_argument("hexagonal_points: spacing must be > 0");
  // Generators r*(1,0) and r*(1/2, sqrt(3)/2); enumerate generously, keep box.
  const double h = r * std::sqrt(3.0) / 2.0;
  const long nlo = static_cast<long>(std::floor(box.y0 / h)) - 1;
  const long nhi = static_cast<long>(std::ceil(box.y1 / h)) + 1;
  std::vector<Point> pts;
  for (long n = nlo; n <= nhi; ++n) {
    const double y = n * h;
    const double xoff = 0.5 * r * n;
    const long mlo = static_cast<long>(std::floor((box.x0 - xoff) / r)) - 1;
    const long mhi = static_cast<long>(std::ceil((box.x1 - xoff) / r)) + 1;
    for (long m = mlo; m <= mhi; ++m) {
      const Point p(xoff + m * r, y);
      if (box.contains(p)) pts.push_back(p);
    }
  }
  return SupportSet(std::move(pts));
}

UniformClosenessResult uniformly_close_enumeration(const SupportSet& s, double gamma,
                                                   double theta, double r) {
  UniformClosenessResult res;
  if (!(gamma > 0.0) || !(theta > 0.0) || !(r > 0.0))
    throw std::invalid_argument("uniformly_close_enumeration: gamma, theta, R must be > 0");
  if (!(1.0 / (gamma * gamma) > theta)) {
    res.failure = "precondition gamma^-2 > theta violated";
    return res;
  }
  const auto rayleigh = sliding_count_window(s, r, Boundary::Open);
  if (rayleigh.count > theta * r * r) {
    res.failure = "Rayleigh bound n+(S,(0,R)^2) <= theta R^2 violated";
    res.violating_window = rayleigh.window;
    return res;
  }

  // Smallest q with (qR/gamma)^2 - 4(qR/gamma + 1) >= ((q+1) R sqrt(theta))^2.
  int q = 0;
  for (int cand = 1; cand <= 10'000'000; ++cand) {
    const double a = cand * r / gamma;
    const double lhs = a * a - 4.0 * (a + 1.0);
    const double rhs = std::pow((cand + 1) * r * std::sqrt(theta), 2);
    if (lhs >= rhs) { q = cand; break; }
  }
  if (q == 0) {
    res.failure = "no admissible tessellation scale q found";
    return res;
  }

  // Tessellate into half-open squares of side q*R; within each square assign
  // points injectively to lattice sites of that square.
  const double side = q * static_cast<double>(r);
  auto cell_of = [&](double x) { return static_cast<long>(std::floor(x / side)); };
  std::map<std::pair<long, long>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < s.size(); ++i)
    cells[{cell_of(s[i].tau), cell_of(s[i].nu)}].push_back(i);

  for (auto& [cell, members] : cells) {
    // Lattice indices with gamma*m in [k*side, (k+1)*side).
    auto index_range = [&](long k) {
      const long lo = static_cast<long>(std::ceil(k * side / gamma - 1e-12));
      long hi = static_cast<long>(std::floor((k + 1) * side / gamma + 1e-12));
      if (hi * gamma >= (k + 1) * side) --hi;  // half-open on the right
      return std::pair<long, long>(lo, hi);
    };
    const auto [mlo, mhi] = index_range(cell.first);
    const auto [nlo, nhi] = index_range(cell.second);
    const long capacity = std::max<long>(0, mhi - mlo + 1) * std::max<long>(0, nhi - nlo + 1);
    if (static_cast<long>(members.size()) > capacity) {
      res.failure = "super-square holds more points than lattice sites";
      res.violating_window = Rect{cell.first * side, cell.second * side,
                                  (cell.first + 1) * side, (cell.second + 1) * side};
      return res;
    }
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return s[a].tau != s[b].tau ? s[a].tau < s[b].tau : s[a].nu < s[b].nu;
    });
    // Prefer each point's nearest site of the square (identity on exact
    // lattice inputs); fall back to the first free site in index order.
    const long ncols = nhi - nlo + 1;
    std::vector<bool> used(static_cast<std::size_t>(capacity), false);
    auto slot = [&](long m, long n) { return static_cast<std::size_t>((m - mlo) * ncols + (n - nlo)); };
    for (std::size_t idx : members) {
      long m = std::clamp(static_cast<long>(std::llround(s[idx].tau / gamma)), mlo, mhi);
      long n = std::clamp(static_cast<long>(std::llround(s[idx].nu / gamma)), nlo, nhi);
      if (used[slot(m, n)]) {
        // nearest free site of this square, by expanding index rings
        bool found = false;
        const long max_ring = std::max(mhi - mlo, nhi - nlo);
        for (long ring = 1; ring <= max_ring && !found; ++ring)
          for (long dm = -ring; dm <= ring && !found; ++dm)
            for (long dn = -ring; dn <= ring && !found; ++dn) {
              if (std::max(std::labs(dm), std::labs(dn)) != ring) continue;
              const long mm = m + dm, nn = n + dn;
              if (mm < mlo || mm > mhi || nn < nlo || nn > nhi) continue;
              if (!used[slot(mm, nn)]) { m = mm; n = nn; found = true; }
            }
      }
      used[slot(m, n)] = true;
      res.pairing.push_back({idx, m, n});
    }
  }
  res.q = q;
  res.r_prime = std::sqrt(2.0) * side;
  res.ok = true;
  return res;
}

std::vector<NestedSquare> nested_squares(const NestedSquare& k, const SupportSet& y, int n) {
  if (n < 0) throw std::invalid_argument("nested_squares: n must be >= 0");
  const double want_side = std::sqrt(2.0) * (std::pow(2.0, n) + 1.0);
  if (std::abs(k.side - want_side) > 1e-9 * want_side)
    throw std::invalid_argument("nested_squares: square side must be sqrt(2)(2^n+1)");
  auto count_in = [&](const NestedSquare& sq) {
    int c = 0;
    for (const auto& p : y.points())
      if (sq.contains(p)) ++c;
    return c;
  };
  const long need = (1L << (2 * n)) + 1;
  if (count_in(k) < need)
    throw std::invalid_argument("nested_squares: square must contain at least 2^(2n)+1 points");

  std::vector<NestedSquare> chain(static_cast<std::size_t>(n) + 1);
  chain[static_cast<std::size_t>(n)] = k;
  NestedSquare cur = k;
  for (int j = n; j >= 1; --j) {
    const double half = 0.5 * cur.side;
    // Closed quadrants anchored at the four corners (they cover cur).
    const std::array<Point, 4> corners = {
        cur.corner,
        Point(cur.corner.tau + half, cur.corner.nu),
        Point(cur.corner.tau, cur.corner.nu + half),
        Point(cur.corner.tau + half, cur.corner.nu + half)};
    int best = -1, best_count = -1;
    for (int c = 0; c < 4; ++c) {
      const int cnt = count_in({corners[static_cast<std::size_t>(c)], half});
      if (cnt > best_count) { best_count = cnt; best = c; }
    }
    const long need_j = (1L << (2 * (j - 1))) + 1;
    if (best_count < need_j)
      throw std::logic_error("nested_squares: pigeonhole failed");
    // Expand the winning quadrant from the corner it shares with cur.
    const double next_side = std::sqrt(2.0) * (std::pow(2.0, j - 1) + 1.0);
    Point corner = corners[static_cast<std::size_t>(best)];
    if (best == 1 || best == 3) corner.tau = cur.corner.tau + cur.side - next_side;
    if (best == 2 || best == 3) corner.nu = cur.corner.nu + cur.side - next_side;
    cur = {corner, next_side};
    chain[static_cast<std::size_t>(j - 1)] = cur;
  }
  return chain;
}

double folkman_graham_bound(double area, double perimeter, double s) {
  if (!(area > 0.0) || !(perimeter > 0.0) || !(s > 0.0))
    throw std::invalid_argument("folkman_graham_bound: inputs must be > 0");
  return 2.0 / std::sqrt(3.0) * area / (s * s) + perimeter / (2.0 * s) + 1.0;
}

ClassDescriptor ClassDescriptor::separated(double s) {
  ClassDescriptor d;
  d.kind = Kind::Separated;
  d.s = s;
  d.validate();
  return d;
}

ClassDescriptor ClassDescriptor::finite(double s, int n_max) {
  ClassDescriptor d;
  d.kind = Kind::Finite;
  d.s = s;
  d.n_max = n_max;
  d.validate();
  return d;
}

ClassDescriptor ClassDescriptor::rayleigh(double s, double theta, double r) {
  ClassDescriptor d;
  d.kind = Kind::Rayleigh;
  d.s = s;
  d.theta = theta;
  d.r = r;
  d.validate();
  return d;
}

ClassDescriptor ClassDescriptor::lattice(const std::array<double, 4>& a,
                                         const std::array<double, 2>& b) {
  ClassDescriptor d;
  d.kind = Kind::Lattice;
  d.a = a;
  d.b = b;
  d.validate();
  return d;
}

void ClassDescriptor::validate() const {
  switch (kind) {
    case Kind::Separated:
      if (!(s > 0.0)) throw std::invalid_argument("ClassDescriptor: s must be > 0");
      break;
    case Kind::Finite:
      if (!(s > 0.0) || n_max < 1)
        throw std::invalid_argument("ClassDescriptor: require s > 0 and N >= 1");
      break;
    case Kind::Rayleigh:
      if (!(s > 0.0) || !(theta > 0.0) || !(r > 0.0))
        throw std::invalid_argument("ClassDescriptor: require s, theta, R > 0");
      if (!(s < 1.0 / std::sqrt(theta)))
        throw std::invalid_argument("ClassDescriptor: require s < theta^(-1/2)");
      break;
    case Kind::Lattice:
      for (double v : a)
        if (!std::isfinite(v)) throw std::invalid_argument("ClassDescriptor: non-finite matrix");
      for (double v : b)
        if (!std::isfinite(v)) throw std::invalid_argument("ClassDescriptor: non-finite offset");
      break;
  }
}

ClassVerdict classify_class(const ClassDescriptor& desc, double p) {
  if (!(p > 1.0) || !(p < kInf)) throw std::invalid_argument("classify_class: p must be in (1,inf)");
  desc.validate();
  const double critical_sep = 2.0 * std::pow(3.0, -0.25);
  switch (desc.kind) {
    case ClassDescriptor::Kind::Finite:
      return {Identifiability::IdentifiableByGaussian, ""};
    case ClassDescriptor::Kind::Separated:
      if (desc.s > critical_sep) return {Identifiability::IdentifiableByGaussian, ""};
      return {Identifiability::NotIdentifiableByAny, ""};
    case ClassDescriptor::Kind::Rayleigh:
      if (desc.theta < 0.5) return {Identifiability::IdentifiableByGaussian, ""};
      if (desc.theta > 0.5)
        return {Identifiability::NotIdentifiableByAny, "for sufficiently large R"};
      return {Identifiability::Indeterminate, "theta = 1/2 is not covered"};
    case ClassDescriptor::Kind::Lattice: {
      const double det = desc.a[0] * desc.a[3] - desc.a[1] * desc.a[2];
      if (std::abs(det) > 1.0) return {Identifiability::IdentifiableByGaussian, ""};
      return {Identifiability::NotIdentifiableByAny, ""};
    }
  }
  throw std::logic_error("classify_class: unreachable");
}

}  // namespace ddid
