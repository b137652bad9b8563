#ifndef DDID_MEASURES_HPP
#define DDID_MEASURES_HPP

#include "ddid/types.hpp"

namespace ddid {

/// inf of pairwise distances; +inf for sets with at most one point.
double separation(const SupportSet& s);

/// Maximum number of points of s contained in any closed unit disk.
/// Exact candidate-center enumeration: every point, plus the two unit-circle
/// intersection centers of every pair at distance <= 2.
int relative_separation(const SupportSet& s);

/// inf over cross pairs at distinct locations; points shared by both sets
/// contribute nothing. +inf when no admissible pair exists.
double mutual_separation(const SupportSet& s1, const SupportSet& s2);

/// ell^p norm of the weight sequence, p in [1, inf]. p = kInf gives the sup.
double lp_norm(const DiscreteMeasure& mu, double p);

/// Every point shifted by z.
SupportSet translate(const SupportSet& s, const Point& z);

/// mu1 - mu2 as a measure: weights at shared locations merge, zero weights drop.
DiscreteMeasure measure_difference(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2);

DiscreteMeasure scale(const DiscreteMeasure& mu, Complex c);

}  // namespace ddid

#endif
