#ifndef DDID_TYPES_HPP
#define DDID_TYPES_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddid {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when a numeric guard trips (grid too small, truncation too tight,
/// ill-conditioned solve). Distinct from std::invalid_argument so callers can
/// map contract violations and numeric failures to different exit codes.
class numeric_guard_error : public std::runtime_error {
public:
  explicit numeric_guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// A delay-Doppler location (tau seconds, nu hertz), identified with
/// the complex number tau + i*nu.
struct Point {
  double tau = 0.0;
  double nu = 0.0;

  Point() = default;
  Point(double t, double n) : tau(t), nu(n) {}
  explicit Point(Complex z) : tau(z.real()), nu(z.imag()) {}

  Complex to_complex() const { return Complex(tau, nu); }
  double abs() const { return std::hypot(tau, nu); }

  Point operator+(const Point& o) const { return {tau + o.tau, nu + o.nu}; }
  Point operator-(const Point& o) const { return {tau - o.tau, nu - o.nu}; }
  bool operator==(const Point& o) const { return tau == o.tau && nu == o.nu; }
  bool operator!=(const Point& o) const { return !(*this == o); }
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.tau - b.tau, a.nu - b.nu);
}

inline void require_finite(const Point& p, const char* what = "point") {
  if (!std::isfinite(p.tau) || !std::isfinite(p.nu))
    throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

/// A weighted Dirac mass at a delay-Doppler location.
struct Atom {
  Point location;
  Complex weight{1.0, 0.0};
};

/// Finite set of pairwise-distinct delay-Doppler locations.
class SupportSet {
public:
  SupportSet() = default;
  explicit SupportSet(std::vector<Point> pts);

  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }

private:
  std::vector<Point> pts_;
};

/// Finite discrete complex measure: atoms with nonzero weights at
/// pairwise-distinct locations.
class DiscreteMeasure {
public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  SupportSet support() const;

private:
  std::vector<Atom> atoms_;
};

}  // namespace ddid

#endif
