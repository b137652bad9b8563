#ifndef DDID_DENSITY_HPP
#define DDID_DENSITY_HPP

#include <array>
#include <optional>

#include "ddid/types.hpp"

namespace ddid {

/// Square lattice {gamma*(m + i n)} of mesh size gamma > 0.
struct SquareLattice {
  double gamma = 1.0;
  explicit SquareLattice(double g) : gamma(g) {
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::invalid_argument("SquareLattice: gamma must be > 0");
  }
  Complex site(long m, long n) const { return Complex(gamma * m, gamma * n); }
  /// Euclidean distance from z to the (infinite) lattice.
  double distance_to(Complex z) const;
};

/// Closed axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(const Point& p) const {
    return p.tau >= x0 && p.tau <= x1 && p.nu >= y0 && p.nu <= y1;
  }
};

enum class Boundary { Closed, Open };

/// Maximum number of points of s in any translate of the R x R square.
/// Closed windows anchor a square edge at a point coordinate; open windows
/// are evaluated between consecutive critical anchor values.
int sliding_count(const SupportSet& s, double r, Boundary boundary);

/// Variant reporting a window that attains the maximum.
struct SlidingCountResult {
  int count = 0;
  Rect window{};
};
SlidingCountResult sliding_count_window(const SupportSet& s, double r, Boundary boundary);

/// Finite-R evidence for the upper Beurling (class) density.
struct DensityCurve {
  struct Entry {
    double r;
    int count;
    double ratio;  // count / r^2
  };
  std::vector<Entry> entries;
  /// max ratio over the top half of the R-ladder (limsup proxy)
  double tail_max = 0.0;
};

DensityCurve density_estimate(const std::vector<SupportSet>& sets,
                              const std::vector<double>& r_list,
                              Boundary boundary = Boundary::Closed);

/// All lattice points inside the closed box.
SupportSet lattice_points(const SquareLattice& lat, const Rect& box);

/// Index-preserving enumeration of s within distance R' of the lattice,
/// built by tessellating the plane into super-squares of side q*R and
/// assigning points to lattice sites square by square.
struct LatticePairing {
  std::size_t point_index;
  long m, n;
};
struct UniformClosenessResult {
  bool ok = false;
  std::vector<LatticePairing> pairing;
  double r_prime = 0.0;
  int q = 0;
  std::string failure;           // empty when ok
  std::optional<Rect> violating_window;
};
UniformClosenessResult uniformly_close_enumeration(const SupportSet& s, double gamma,
                                                   double theta, double r);

/// Axis-aligned square given by its lower-left corner.
struct NestedSquare {
  Point corner;
  double side = 0.0;
  bool contains(const Point& p) const {
    return p.tau >= corner.tau && p.tau <= corner.tau + side && p.nu >= corner.nu &&
           p.nu <= corner.nu + side;
  }
};

/// Pigeonhole construction: from a square of side sqrt(2)(2^n+1) holding at
/// least 2^(2n)+1 points of y, produce nested squares K_0 c ... c K_n with
/// side sqrt(2)(2^j+1), shared corners, and #(K_j ^ y) >= 2^(2j)+1.
std::vector<NestedSquare> nested_squares(const NestedSquare& k, const SupportSet& y, int n);

/// Plane packing bound: (2/sqrt(3)) * area / s^2 + perimeter / (2 s) + 1.
double folkman_graham_bound(double area, double perimeter, double s);

/// Hexagonal lattice of spacing r inside the closed box (row-staggered,
/// generated by r*(1,0) and r*(1/2, sqrt(3)/2)).
SupportSet hexagonal_points(double r, const Rect& box);

// ---------------------------------------------------------------------------
// Identifiability classification of the standard class families
// ---------------------------------------------------------------------------

struct ClassDescriptor {
  enum class Kind { Separated, Finite, Rayleigh, Lattice };
  Kind kind = Kind::Separated;
  double s = 0.0;
  int n_max = 0;                   // Finite
  double theta = 0.0, r = 0.0;     // Rayleigh
  std::array<double, 4> a{};       // Lattice: row-major 2x2 generator
  std::array<double, 2> b{};       // Lattice: offset

  static ClassDescriptor separated(double s);
  static ClassDescriptor finite(double s, int n_max);
  static ClassDescriptor rayleigh(double s, double theta, double r);
  static ClassDescriptor lattice(const std::array<double, 4>& a, const std::array<double, 2>& b);
  void validate() const;
};

enum class Identifiability { IdentifiableByGaussian, NotIdentifiableByAny, Indeterminate };

struct ClassVerdict {
  Identifiability verdict;
  std::string annotation;  // e.g. "for sufficiently large R"
};

ClassVerdict classify_class(const ClassDescriptor& desc, double p);

}  // namespace ddid

#endif
