#ifndef IDEALIS_LATTICE_HPP
#define IDEALIS_LATTICE_HPP

#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace idealis {

// Row vector (u, v), read as the element u + v*theta of a quadratic order.
struct Vec2 {
  mpz_class u, v;
  bool operator==(const Vec2& o) const { return u == o.u && v == o.v; }
};

// Full-rank sublattice of Z^2 in row Hermite normal form:
//   basis rows (a, b) and (0, c) with a > 0, c > 0, 0 <= b < c.
struct Lat2 {
  mpz_class a, b, c;
  bool operator==(const Lat2& o) const { return a == o.a && b == o.b && c == o.c; }
  mpz_class det() const { return a * c; }
  static Lat2 unit() { return Lat2{1, 0, 1}; }
  Vec2 row0() const { return Vec2{a, b}; }
  Vec2 row1() const { return Vec2{0, c}; }
};

// HNF of the row span; error if the span has rank < 2.
Lat2 hnf_rows(std::vector<Vec2> rows);
std::optional<Lat2> hnf_rows_opt(std::vector<Vec2> rows);

bool lat_contains(const Lat2& l, const Vec2& w);
bool lat_subset(const Lat2& inner, const Lat2& outer);
Lat2 lat_intersect(const Lat2& l1, const Lat2& l2);
Lat2 lat_sum(const Lat2& l1, const Lat2& l2);

// canonical representative of w modulo l, with coordinates in the
// fundamental box [0,a) x [0,c)
Vec2 lat_reduce(const Lat2& l, Vec2 w);

// For inner <= outer: the integer matrix C with rows expressing the basis of
// inner in terms of the basis of outer; upper triangular with positive
// diagonal (alpha, delta) and alpha*delta = [outer : inner].
struct RelHnf {
  mpz_class alpha, beta, delta;
};
RelHnf lat_relative(const Lat2& inner, const Lat2& outer);

// Writes target = x + y with x in l1 and y in l2; error when target is not in
// the lattice sum.
std::pair<Vec2, Vec2> lat_split(const Lat2& l1, const Lat2& l2, const Vec2& target);

} // namespace idealis

#endif
