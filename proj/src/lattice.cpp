#include "lattice.hpp"

#include <algorithm>

namespace idealis {

namespace {

mpz_class fdiv_q(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row-reduce an n x 2 integer matrix to echelon form, tracking the
// unimodular transform U with H = U * rows.  Nonzero rows of H come first.
struct Echelon {
  std::vector<Vec2> h;
  std::vector<std::vector<mpz_class>> u;
  int rank = 0;
};

Echelon echelonize(std::vector<Vec2> rows) {
  size_t n = rows.size();
  Echelon e;
  e.u.assign(n, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < n; ++i) e.u[i][i] = 1;

  auto row_sub = [&](size_t j, size_t i, const mpz_class& q) {
    rows[j].u -= q * rows[i].u;
    rows[j].v -= q * rows[i].v;
    for (size_t k = 0; k < n; ++k) e.u[j][k] -= q * e.u[i][k];
  };
  auto row_swap = [&](size_t i, size_t j) {
    std::swap(rows[i], rows[j]);
    std::swap(e.u[i], e.u[j]);
  };
  auto row_neg = [&](size_t i) {
    rows[i].u = -rows[i].u;
    rows[i].v = -rows[i].v;
    for (size_t k = 0; k < n; ++k) e.u[i][k] = -e.u[i][k];
  };

  size_t top = 0;
  for (int col = 0; col < 2 && top < n; ++col) {
    auto entry = [&](size_t i) -> const mpz_class& { return col == 0 ? rows[i].u : rows[i].v; };
    while (true) {
      size_t piv = n;
      for (size_t i = top; i < n; ++i) {
        if (entry(i) == 0) continue;
        if (piv == n || abs(entry(i)) < abs(entry(piv))) piv = i;
      }
      if (piv == n) break; // column is zero below top
      bool others = false;
      for (size_t i = top; i < n; ++i) {
        if (i == piv || entry(i) == 0) continue;
        mpz_class q = fdiv_q(entry(i), entry(piv));
        if (q != 0) row_sub(i, piv, q);
        if (entry(i) != 0) others = true;
      }
      if (!others) {
        row_swap(top, piv);
        if (entry(top) < 0) row_neg(top);
        ++top;
        break;
      }
    }
  }
  e.rank = static_cast<int>(top);
  e.h = std::move(rows);
  return e;
}

} // namespace

std::optional<Lat2> hnf_rows_opt(std::vector<Vec2> rows) {
  Echelon e = echelonize(std::move(rows));
  if (e.rank < 2) return std::nullopt;
  mpz_class a = e.h[0].u, b = e.h[0].v, c = e.h[1].v;
  // reduce b into [0, c)
  mpz_class q = fdiv_q(b, c);
  b -= q * c;
  return Lat2{a, b, c};
}

Lat2 hnf_rows(std::vector<Vec2> rows) {
  auto l = hnf_rows_opt(std::move(rows));
  if (!l) fail_invalid("lattice rows do not span a full-rank lattice");
  return *l;
}

bool lat_contains(const Lat2& l, const Vec2& w) {
  if (w.u % l.a != 0) return false;
  mpz_class rest = w.v - (w.u / l.a) * l.b;
  return rest % l.c == 0;
}

bool lat_subset(const Lat2& inner, const Lat2& outer) {
  return lat_contains(outer, inner.row0()) && lat_contains(outer, inner.row1());
}

Lat2 lat_sum(const Lat2& l1, const Lat2& l2) {
  return hnf_rows({l1.row0(), l1.row1(), l2.row0(), l2.row1()});
}

Lat2 lat_intersect(const Lat2& l1, const Lat2& l2) {
  std::vector<Vec2> rows = {l1.row0(), l1.row1(),
                            Vec2{-l2.row0().u, -l2.row0().v},
                            Vec2{-l2.row1().u, -l2.row1().v}};
  Echelon e = echelonize(rows);
  std::vector<Vec2> gens;
  for (size_t i = e.rank; i < 4; ++i) {
    const auto& k = e.u[i]; // kernel row: k0*B1r0 + k1*B1r1 - k2*B2r0 - k3*B2r1 = 0
    Vec2 w{k[0] * l1.a + k[1] * mpz_class(0), k[0] * l1.b + k[1] * l1.c};
    gens.push_back(w);
  }
  return hnf_rows(std::move(gens));
}

Vec2 lat_reduce(const Lat2& l, Vec2 w) {
  mpz_class q = fdiv_q(w.u, l.a);
  w.u -= q * l.a;
  w.v -= q * l.b;
  mpz_class r = fdiv_q(w.v, l.c);
  w.v -= r * l.c;
  return w;
}

RelHnf lat_relative(const Lat2& inner, const Lat2& outer) {
  if (!lat_subset(inner, outer)) fail_invalid("lat_relative: not a sublattice");
  RelHnf r;
  r.alpha = inner.a / outer.a;
  r.beta = (inner.b - r.alpha * outer.b) / outer.c;
  r.delta = inner.c / outer.c;
  return r;
}

std::pair<Vec2, Vec2> lat_split(const Lat2& l1, const Lat2& l2, const Vec2& target) {
  std::vector<Vec2> rows = {l1.row0(), l1.row1(), l2.row0(), l2.row1()};
  Echelon e = echelonize(rows);
  if (e.rank < 2) fail_invalid("lat_split: degenerate sum");
  // target = x*h0 + y*h1
  if (target.u % e.h[0].u != 0) fail_invalid("lat_split: target not in lattice sum");
  mpz_class x = target.u / e.h[0].u;
  mpz_class rest = target.v - x * e.h[0].v;
  if (rest % e.h[1].v != 0) fail_invalid("lat_split: target not in lattice sum");
  mpz_class y = rest / e.h[1].v;
  // coefficients over the original four rows
  std::vector<mpz_class> coef(4);
  for (size_t k = 0; k < 4; ++k) coef[k] = x * e.u[0][k] + y * e.u[1][k];
  Vec2 part1{coef[0] * l1.row0().u + coef[1] * l1.row1().u,
             coef[0] * l1.row0().v + coef[1] * l1.row1().v};
  Vec2 part2{coef[2] * l2.row0().u + coef[3] * l2.row1().u,
             coef[2] * l2.row0().v + coef[3] * l2.row1().v};
  return {part1, part2};
}

} // namespace idealis
