#include "oracles.hpp"

#include <algorithm>

namespace oracles {

double min_pairwise_distance(const std::vector<Point>& pts) {
  double best = ddid::kInf;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, ddid::distance(pts[i], pts[j]));
  return best;
}

int max_points_in_unit_disk(const std::vector<Point>& pts) {
  if (pts.empty()) return 0;
  auto count = [&](double cx, double cy) {
    int c = 0;
    for (const auto& p : pts) {
      const double dx = p.tau - cx, dy = p.nu - cy;
      if (dx * dx + dy * dy <= 1.0 + 1e-9) ++c;
    }
    return c;
  };
  int best = 0;
  for (const auto& p : pts) best = std::max(best, count(p.tau, p.nu));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[j].tau - pts[i].tau, dy = pts[j].nu - pts[i].nu;
      const double d = std::hypot(dx, dy);
      if (d > 2.0 || d == 0.0) continue;
      const double mx = 0.5 * (pts[i].tau + pts[j].tau), my = 0.5 * (pts[i].nu + pts[j].nu);
      const double h = std::sqrt(std::max(0.0, 1.0 - 0.25 * d * d));
      best = std::max(best, count(mx + h * dy / d, my - h * dx / d));
      best = std::max(best, count(mx - h * dy / d, my + h * dx / d));
    }
  return best;
}

int sliding_count_bruteforce(const std::vector<Point>& pts, double r, bool closed) {
  if (pts.empty()) return 0;
  std::vector<double> ax, ay;
  if (closed) {
    for (const auto& p : pts) {
      ax.push_back(p.tau);
      ax.push_back(p.tau - r);
      ay.push_back(p.nu);
      ay.push_back(p.nu - r);
    }
  } else {
    std::vector<double> cx, cy;
    for (const auto& p : pts) {
      cx.push_back(p.tau);
      cx.push_back(p.tau - r);
      cy.push_back(p.nu);
      cy.push_back(p.nu - r);
    }
    std::sort(cx.begin(), cx.end());
    std::sort(cy.begin(), cy.end());
    cx.erase(std::unique(cx.begin(), cx.end()), cx.end());
    cy.erase(std::unique(cy.begin(), cy.end()), cy.end());
    for (std::size_t i = 0; i + 1 < cx.size(); ++i) ax.push_back(0.5 * (cx[i] + cx[i + 1]));
    for (std::size_t i = 0; i + 1 < cy.size(); ++i) ay.push_back(0.5 * (cy[i] + cy[i + 1]));
    if (ax.empty()) ax.push_back(pts[0].tau - 0.5 * r);
    if (ay.empty()) ay.push_back(pts[0].nu - 0.5 * r);
  }
  int best = 0;
  for (double a : ax)
    for (double b : ay) {
      int c = 0;
      for (const auto& p : pts) {
        if (closed) {
          const double dx = p.tau - a, dy = p.nu - b;
          if (dx >= 0.0 && dx <= r && dy >= 0.0 && dy <= r) ++c;
        } else {
          if (p.tau > a && p.tau < a + r && p.nu > b && p.nu < b + r) ++c;
        }
      }
      best = std::max(best, c);
    }
  return best;
}

Complex stft_quadrature(const std::function<Complex(double)>& x, const Point& lambda, double lo,
                        double hi, double dt) {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / dt + 0.5));
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = lo + dt * static_cast<double>(k);
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    const double phi = std::pow(2.0, 0.25) * std::exp(-ddid::kPi * (t - lambda.tau) * (t - lambda.tau));
    const Complex mod(std::cos(2.0 * ddid::kPi * lambda.nu * t), -std::sin(2.0 * ddid::kPi * lambda.nu * t));
    acc += w * x(t) * mod * phi;
  }
  return acc * dt;
}

Complex bargmann_quadrature(const std::function<Complex(double)>& x, Complex z, double lo,
                            double hi, double dt) {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / dt + 0.5));
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = lo + dt * static_cast<double>(k);
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    acc += w * std::exp(2.0 * ddid::kPi * t * z - ddid::kPi * t * t) * x(t);
  }
  return std::pow(2.0, 0.25) * std::exp(-ddid::kPi * z * z / 2.0) * acc * dt;
}

double single_shift_slope_quadrature(double lo, double hi, double dt) {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / dt + 0.5));
  double acc = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = lo + dt * static_cast<double>(k);
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    const double phi = std::pow(2.0, 0.25) * std::exp(-ddid::kPi * t * t);
    acc += w * t * t * phi * phi;
  }
  return 2.0 * ddid::kPi * std::sqrt(acc * dt);
}

std::vector<Point> random_separated_points(ddid::Rng& rng, std::size_t n, double sep, double box) {
  std::vector<Point> pts;
  std::size_t guard = 0;
  while (pts.size() < n) {
    if (++guard > 100000) throw std::runtime_error("random_separated_points: box too tight");
    const Point cand(rng.uniform(0.0, box), rng.uniform(0.0, box));
    bool ok = true;
    for (const auto& p : pts)
      if (ddid::distance(p, cand) < sep) { ok = false; break; }
    if (ok) pts.push_back(cand);
  }
  return pts;
}

std::vector<Point> random_points(ddid::Rng& rng, std::size_t n, double box) {
  std::vector<Point> pts(n);
  for (auto& p : pts) p = Point(rng.uniform(0.0, box), rng.uniform(0.0, box));
  return pts;
}

}  // namespace oracles
