#include "ideal.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace idealis {

namespace {

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

mpz_class zlcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

void check_same_ring(const FracIdeal& I, const FracIdeal& J) {
  if (!I.ring.same_ring(J.ring)) fail_invalid("mixed rings in ideal operation");
}

// canonical principal generator: positive for Z, monic/monic for k[t]
QElem canon_generator(const Ring& r, QElem g) {
  g = r.qcanon(std::move(g));
  if (r.q_is_zero(g)) fail_invalid("zero generator for a fractional ideal");
  switch (r.kind()) {
    case RingKind::integers: {
      if (std::get<mpz_class>(g.num.v) < 0) g.num = r.neg(g.num);
      return g;
    }
    case RingKind::poly_q:
    case RingKind::poly_fp: {
      const Poly& n = std::get<Poly>(g.num.v);
      mpq_class lead = n.c.back();
      if (lead != 1) {
        Poly nn = n;
        for (auto& c : nn.c) c /= lead;
        g.num = r.canon(Elem{nn});
      }
      return r.qcanon(std::move(g));
    }
    default: fail(errc::internal, "canon_generator on quadratic ring");
  }
}

QElem qgcd(const Ring& r, const QElem& a, const QElem& b) {
  if (r.q_is_zero(a)) return b;
  if (r.q_is_zero(b)) return a;
  if (r.kind() == RingKind::integers) {
    mpz_class n1 = std::get<mpz_class>(a.num.v), d1 = std::get<mpz_class>(a.den.v);
    mpz_class n2 = std::get<mpz_class>(b.num.v), d2 = std::get<mpz_class>(b.den.v);
    return r.qcanon(QElem{Elem{zgcd(abs(n1 * d2), abs(n2 * d1))}, Elem{d1 * d2}});
  }
  // polynomial rings
  Poly n1 = std::get<Poly>(a.num.v), d1 = std::get<Poly>(a.den.v);
  Poly n2 = std::get<Poly>(b.num.v), d2 = std::get<Poly>(b.den.v);
  Poly g = r.poly_gcd(std::get<Poly>(r.mul(Elem{n1}, Elem{d2}).v),
                      std::get<Poly>(r.mul(Elem{n2}, Elem{d1}).v));
  return r.qcanon(QElem{Elem{g}, r.mul(Elem{d1}, Elem{d2})});
}

Vec2 elem_coords(const Elem& e) {
  const auto& q = std::get<QuadInt>(e.v);
  return Vec2{q.x, q.y};
}

QuadInt coords_elem(const Vec2& w) { return QuadInt{w.u, w.v}; }

// lattice row times ring element, coordinates in the same scaled lattice
Vec2 row_mul(const Ring& r, const QuadInt& e, const Vec2& w) {
  Elem prod = r.mul(Elem{e}, Elem{coords_elem(w)});
  return elem_coords(prod);
}

Lat2 scaled_lat(const FracIdeal& I, const mpz_class& target_den) {
  mpz_class s = target_den / I.den;
  return Lat2{I.lat.a * s, I.lat.b * s, I.lat.c * s};
}

} // namespace

FracIdeal ideal_canon(FracIdeal I) {
  if (I.ring.is_pid_class()) {
    I.gen = canon_generator(I.ring, I.gen);
    return I;
  }
  mpz_class content = zgcd(I.lat.a, zgcd(I.lat.b, I.lat.c));
  mpz_class g = zgcd(content, I.den);
  if (g > 1) {
    I.lat.a /= g;
    I.lat.b /= g;
    I.lat.c /= g;
    I.den /= g;
  }
  return I;
}

FracIdeal ideal_ring(const Ring& r) {
  FracIdeal I;
  I.ring = r;
  if (r.is_pid_class()) {
    I.gen = r.qone();
  } else {
    I.lat = Lat2::unit();
    I.den = 1;
  }
  return I;
}

FracIdeal ideal_principal(const Ring& r, const QElem& g) {
  if (r.q_is_zero(g)) fail_invalid("principal ideal needs a nonzero generator");
  return ideal_from_generators(r, {g});
}

FracIdeal ideal_from_generators(const Ring& r, const std::vector<QElem>& gens) {
  bool any = false;
  for (const auto& g : gens)
    if (!r.q_is_zero(g)) any = true;
  if (gens.empty() || !any) fail_invalid("ideal_from_generators: need a nonzero generator");

  FracIdeal I;
  I.ring = r;
  if (r.is_pid_class()) {
    QElem g = r.qzero();
    for (const auto& x : gens) g = qgcd(r, g, x);
    I.gen = canon_generator(r, g);
    return I;
  }
  mpz_class D = 1;
  std::vector<QElem> cg;
  for (const auto& g0 : gens) {
    if (r.q_is_zero(g0)) continue;
    QElem g = r.qcanon(g0);
    cg.push_back(g);
    D = zlcm(D, std::get<QuadInt>(g.den.v).x);
  }
  Elem theta = r.quad(0, 1);
  std::vector<Vec2> rows;
  for (const auto& g : cg) {
    mpz_class s = D / std::get<QuadInt>(g.den.v).x;
    Elem n = r.mul(g.num, r.quad(s, 0));
    rows.push_back(elem_coords(n));
    rows.push_back(elem_coords(r.mul(n, theta)));
  }
  I.lat = hnf_rows(std::move(rows));
  I.den = D;
  return ideal_canon(std::move(I));
}

bool ideal_eq(const FracIdeal& I, const FracIdeal& J) {
  check_same_ring(I, J);
  if (I.ring.is_pid_class()) return I.ring.qeq(I.gen, J.gen);
  return I.den == J.den && I.lat == J.lat;
}

bool ideal_is_integral(const FracIdeal& I) {
  if (I.ring.is_pid_class()) return I.ring.q_integral(I.gen).has_value();
  return I.den == 1;
}

bool ideal_contains(const FracIdeal& I, const QElem& x0) {
  const Ring& r = I.ring;
  if (r.q_is_zero(x0)) return true;
  if (r.is_pid_class()) return r.q_integral(r.qdiv(x0, I.gen)).has_value();
  QElem x = r.qcanon(x0);
  const QuadInt& n = std::get<QuadInt>(x.num.v);
  const mpz_class& e = std::get<QuadInt>(x.den.v).x;
  mpz_class tu = I.den * n.x, tv = I.den * n.y;
  if (tu % e != 0 || tv % e != 0) return false;
  return lat_contains(I.lat, Vec2{tu / e, tv / e});
}

bool ideal_subset(const FracIdeal& I, const FracIdeal& J) {
  check_same_ring(I, J);
  const Ring& r = I.ring;
  if (r.is_pid_class()) return r.q_integral(r.qdiv(I.gen, J.gen)).has_value();
  mpz_class D = zlcm(I.den, J.den);
  return lat_subset(scaled_lat(I, D), scaled_lat(J, D));
}

FracIdeal ideal_mul(const FracIdeal& I, const FracIdeal& J) {
  check_same_ring(I, J);
  const Ring& r = I.ring;
  FracIdeal K;
  K.ring = r;
  if (r.is_pid_class()) {
    K.gen = canon_generator(r, r.qmul(I.gen, J.gen));
    return K;
  }
  std::vector<Vec2> rows;
  for (const Vec2& u : {I.lat.row0(), I.lat.row1()})
    for (const Vec2& v : {J.lat.row0(), J.lat.row1()})
      rows.push_back(row_mul(r, coords_elem(u), v));
  K.lat = hnf_rows(std::move(rows));
  K.den = I.den * J.den;
  return ideal_canon(std::move(K));
}

FracIdeal ideal_add(const FracIdeal& I, const FracIdeal& J) {
  check_same_ring(I, J);
  const Ring& r = I.ring;
  FracIdeal K;
  K.ring = r;
  if (r.is_pid_class()) {
    K.gen = canon_generator(r, qgcd(r, I.gen, J.gen));
    return K;
  }
  mpz_class D = zlcm(I.den, J.den);
  K.lat = lat_sum(scaled_lat(I, D), scaled_lat(J, D));
  K.den = D;
  return ideal_canon(std::move(K));
}

FracIdeal ideal_intersect(const FracIdeal& I, const FracIdeal& J) {
  check_same_ring(I, J);
  const Ring& r = I.ring;
  FracIdeal K;
  K.ring = r;
  if (r.is_pid_class()) {
    QElem g = qgcd(r, I.gen, J.gen);
    K.gen = canon_generator(r, r.qdiv(r.qmul(I.gen, J.gen), g));
    return K;
  }
  mpz_class D = zlcm(I.den, J.den);
  K.lat = lat_intersect(scaled_lat(I, D), scaled_lat(J, D));
  K.den = D;
  return ideal_canon(std::move(K));
}

FracIdeal ideal_scale(const QElem& c, const FracIdeal& I) {
  const Ring& r = I.ring;
  if (r.q_is_zero(c)) fail_invalid("ideal_scale by zero");
  FracIdeal K;
  K.ring = r;
  if (r.is_pid_class()) {
    K.gen = canon_generator(r, r.qmul(c, I.gen));
    return K;
  }
  QElem cc = r.qcanon(c);
  const QuadInt& n = std::get<QuadInt>(cc.num.v);
  const mpz_class& e = std::get<QuadInt>(cc.den.v).x;
  K.lat = hnf_rows({row_mul(r, n, I.lat.row0()), row_mul(r, n, I.lat.row1())});
  K.den = I.den * e;
  return ideal_canon(std::move(K));
}

FracIdeal ideal_colon(const FracIdeal& I, const FracIdeal& J) {
  check_same_ring(I, J);
  const Ring& r = I.ring;
  if (r.is_pid_class()) {
    FracIdeal K;
    K.ring = r;
    K.gen = canon_generator(r, r.qdiv(I.gen, J.gen));
    return K;
  }
  // (I : J) = intersection of g^{-1} I over the two module generators g of J
  auto part = [&](const Vec2& row) {
    QElem g = r.qcanon(QElem{Elem{coords_elem(row)}, r.quad(J.den, 0)});
    return ideal_scale(r.qinv(g), I);
  };
  return ideal_intersect(part(J.lat.row0()), part(J.lat.row1()));
}

FracIdeal ideal_div_closure(const FracIdeal& I) {
  FracIdeal R = ideal_ring(I.ring);
  return ideal_colon(R, ideal_colon(R, I));
}

FracIdeal ideal_inverse_scale(const Elem& c, const FracIdeal& I) {
  const Ring& r = I.ring;
  if (r.is_zero(c)) fail_invalid("inverse_scale: c must be nonzero");
  if (!ideal_is_integral(I)) fail_invalid("inverse_scale: I must be an integral ideal");
  QElem cinv = r.qinv(r.q(c));
  return ideal_intersect(ideal_scale(cinv, I), ideal_ring(r));
}

Index ideal_index(const FracIdeal& J, const FracIdeal& I) {
  check_same_ring(I, J);
  const Ring& r = I.ring;
  if (!ideal_subset(I, J)) fail_invalid("ideal_index: I is not contained in J");
  if (r.is_pid_class()) {
    QElem h = r.qdiv(I.gen, J.gen);
    auto he = r.q_integral(h);
    if (!he) fail(errc::internal, "index: subset without integral ratio");
    return r.elem_index(*he);
  }
  mpz_class num = I.lat.det() * J.den * J.den;
  mpz_class den = J.lat.det() * I.den * I.den;
  if (num % den != 0) fail(errc::internal, "index: non-integral determinant ratio");
  return Index::fin(num / den);
}

Index ideal_index_in_ring(const FracIdeal& I) {
  return ideal_index(ideal_ring(I.ring), I);
}

std::vector<QElem> ideal_coset_reps(const FracIdeal& J, const FracIdeal& I) {
  const Ring& r = I.ring;
  Index idx = ideal_index(J, I);
  if (idx.infinite) fail_invalid("coset_reps: infinite index");
  std::vector<QElem> reps;
  if (r.is_pid_class()) {
    QElem h = r.qdiv(I.gen, J.gen);
    Elem he = *r.q_integral(h);
    switch (r.kind()) {
      case RingKind::integers: {
        mpz_class m = abs(std::get<mpz_class>(he.v));
        for (mpz_class k = 0; k < m; ++k)
          reps.push_back(r.qcanon(r.qmul(J.gen, r.q(Elem{k}))));
        break;
      }
      case RingKind::poly_q: {
        reps.push_back(r.qzero()); // index 1
        break;
      }
      case RingKind::poly_fp: {
        int deg = std::get<Poly>(he.v).degree();
        long p = r.char_p().get_si();
        std::vector<long> idxv(std::max(deg, 0), 0);
        while (true) {
          std::vector<mpq_class> coeffs(idxv.size());
          for (size_t i = 0; i < idxv.size(); ++i) coeffs[i] = idxv[i];
          Elem rem = r.poly_from(coeffs);
          reps.push_back(r.qcanon(r.qmul(J.gen, r.q(rem))));
          size_t pos = 0;
          while (pos < idxv.size() && ++idxv[pos] >= p) {
            idxv[pos] = 0;
            ++pos;
          }
          if (pos >= idxv.size()) break;
          if (idxv.empty()) break;
        }
        break;
      }
      default: break;
    }
    return reps;
  }
  mpz_class D = zlcm(I.den, J.den);
  Lat2 li = scaled_lat(I, D), lj = scaled_lat(J, D);
  RelHnf rel = lat_relative(li, lj);
  for (mpz_class i = 0; i < rel.alpha; ++i)
    for (mpz_class j = 0; j < rel.delta; ++j) {
      Vec2 w{i * lj.a, i * lj.b + j * lj.c};
      reps.push_back(r.qcanon(QElem{Elem{coords_elem(w)}, r.quad(D, 0)}));
    }
  return reps;
}

Elem ideal_reduce_mod(const FracIdeal& I, const Elem& x) {
  const Ring& r = I.ring;
  if (!ideal_is_integral(I)) fail_invalid("reduce_mod: integral ideal required");
  switch (r.kind()) {
    case RingKind::integers: {
      mpz_class g = std::get<mpz_class>(I.gen.num.v);
      mpz_class out;
      mpz_fdiv_r(out.get_mpz_t(), std::get<mpz_class>(x.v).get_mpz_t(), g.get_mpz_t());
      return Elem{out};
    }
    case RingKind::poly_q:
    case RingKind::poly_fp: {
      const Poly& g = std::get<Poly>(I.gen.num.v);
      if (g.degree() == 0) return r.zero();
      return r.canon(Elem{r.poly_mod(std::get<Poly>(x.v), g)});
    }
    case RingKind::quadratic_order: {
      Vec2 w = lat_reduce(I.lat, elem_coords(x));
      return Elem{coords_elem(w)};
    }
  }
  fail(errc::internal, "unreachable");
}

std::string ideal_key(const FracIdeal& I) {
  if (I.ring.is_pid_class()) return "(" + I.ring.to_string(I.gen) + ")";
  return "[[" + I.lat.a.get_str() + "," + I.lat.b.get_str() + "],[0," + I.lat.c.get_str() +
         "]]/" + I.den.get_str();
}

namespace {

json num_or_str(const mpz_class& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

mpz_class json_to_mpz(const json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) return mpz_class(j.get<std::string>());
  fail_invalid("expected integer or integer string in JSON");
}

} // namespace

json ideal_to_json(const FracIdeal& I) {
  json j;
  if (I.ring.is_pid_class()) {
    j["repr"] = "principal";
    j["gen"] = I.ring.to_string(I.gen);
  } else {
    j["repr"] = "lattice";
    j["num"] = json::array({json::array({num_or_str(I.lat.a), num_or_str(I.lat.b)}),
                            json::array({num_or_str(mpz_class(0)), num_or_str(I.lat.c)})});
    j["den"] = num_or_str(I.den);
  }
  return j;
}

FracIdeal ideal_from_json(const Ring& r, const json& j) {
  std::string repr = j.value("repr", "");
  if (repr == "principal") {
    return ideal_principal(r, r.parse_qelem(j.at("gen").get<std::string>()));
  }
  if (repr == "lattice") {
    if (r.is_pid_class()) fail_invalid("lattice ideal representation needs a quadratic order");
    const json& num = j.at("num");
    if (!num.is_array() || num.size() != 2 || num[0].size() != 2 || num[1].size() != 2)
      fail_invalid("ideal JSON: \"num\" must be a 2x2 matrix");
    if (json_to_mpz(num[1][0]) != 0) fail_invalid("ideal JSON: matrix must be [[a,b],[0,c]]");
    FracIdeal I;
    I.ring = r;
    I.lat = hnf_rows({Vec2{json_to_mpz(num[0][0]), json_to_mpz(num[0][1])},
                      Vec2{0, json_to_mpz(num[1][1])}});
    I.den = j.contains("den") ? json_to_mpz(j.at("den")) : mpz_class(1);
    if (I.den < 1) fail_invalid("ideal JSON: den must be positive");
    // must be closed under multiplication by theta
    Elem theta = r.quad(0, 1);
    for (const Vec2& w : {I.lat.row0(), I.lat.row1()})
      if (!lat_contains(I.lat, row_mul(r, std::get<QuadInt>(theta.v), w)))
        fail_invalid("ideal JSON: lattice is not an ideal (not theta-closed)");
    return ideal_canon(std::move(I));
  }
  fail_invalid("ideal JSON: unknown repr: " + repr);
}

void ideal_enumerate_elements(const FracIdeal& I, long max_height,
                              const std::function<bool(const QElem&)>& fn) {
  const Ring& r = I.ring;
  if (r.is_pid_class()) {
    r.enumerate_elements(
        [&](const Elem& e) { return fn(r.qcanon(r.qmul(I.gen, r.q(e)))); }, max_height);
    return;
  }
  QElem dq = r.qcanon(QElem{r.one(), r.quad(I.den, 0)});
  if (!fn(r.qzero())) return;
  for (long h = 1; h <= max_height; ++h) {
    for (long i = -h; i <= h; ++i)
      for (long j = -h; j <= h; ++j) {
        if (std::max(std::abs(i), std::abs(j)) != h) continue;
        Vec2 w{i * I.lat.a, i * I.lat.b + j * I.lat.c};
        QElem e = r.qcanon(QElem{Elem{coords_elem(w)}, r.quad(I.den, 0)});
        if (!fn(e)) return;
      }
  }
}

namespace {

bool theta_closed(const Ring& r, const Lat2& l) {
  QuadInt theta{0, 1};
  return lat_contains(l, row_mul(r, theta, l.row0())) &&
         lat_contains(l, row_mul(r, theta, l.row1()));
}

} // namespace

std::vector<FracIdeal> ideal_subideals(const FracIdeal& I, long rel_bound) {
  const Ring& r = I.ring;
  std::vector<FracIdeal> out;
  std::set<std::string> seen;
  if (r.is_pid_class()) {
    if (r.kind() == RingKind::poly_q) return out; // all proper subideals have infinite index
    long height = rel_bound;
    if (r.kind() == RingKind::poly_fp) {
      long p = r.char_p().get_si(), cap = 1;
      height = 0;
      while (cap * p <= rel_bound) {
        cap *= p;
        ++height;
      }
    }
    r.enumerate_elements(
        [&](const Elem& h) {
          if (r.is_zero(h) || r.is_unit(h)) return true;
          Index idx = r.elem_index(h);
          if (!idx.infinite && idx.value <= rel_bound) {
            FracIdeal J = ideal_principal(r, r.qmul(I.gen, r.q(h)));
            if (seen.insert(ideal_key(J)).second) out.push_back(J);
          }
          return true;
        },
        height);
  } else {
    for (long m = 2; m <= rel_bound; ++m) {
      for (long alpha = 1; alpha <= m; ++alpha) {
        if (m % alpha != 0) continue;
        long delta = m / alpha;
        for (long beta = 0; beta < delta; ++beta) {
          Vec2 r0{alpha * I.lat.a, alpha * I.lat.b + beta * I.lat.c};
          Vec2 r1{0, delta * I.lat.c};
          Lat2 cand = hnf_rows({r0, r1});
          if (!theta_closed(r, cand)) continue;
          FracIdeal J;
          J.ring = r;
          J.lat = cand;
          J.den = I.den;
          J = ideal_canon(std::move(J));
          if (seen.insert(ideal_key(J)).second) out.push_back(J);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const FracIdeal& A, const FracIdeal& B) {
    Index ia = ideal_index(I, A), ib = ideal_index(I, B);
    if (ia.value != ib.value) return ia.value < ib.value;
    return ideal_key(A) < ideal_key(B);
  });
  return out;
}

SaturationResult enumerate_constructible(const Ring& r, long bound) {
  if (bound < 1) fail_invalid("enumerate_constructible: bound must be >= 1");
  SaturationResult res;
  res.bound = bound;
  std::map<std::string, FracIdeal> family;
  auto add = [&](const FracIdeal& I) -> bool {
    Index idx = ideal_index_in_ring(I);
    if (idx.infinite || idx.value > bound) return false;
    return family.emplace(ideal_key(I), I).second;
  };
  add(ideal_ring(r));

  // principal integral ideals of index <= bound, plus the scaling elements
  std::vector<Elem> scalars;
  std::set<std::string> scalar_keys;
  auto consider = [&](const Elem& e) {
    if (r.is_zero(e)) return true;
    Index idx = r.elem_index(e);
    if (idx.infinite || idx.value > bound) return true;
    FracIdeal I = ideal_principal(r, r.q(e));
    add(I);
    if (!r.is_unit(e) && scalar_keys.insert(ideal_key(I)).second) scalars.push_back(e);
    return true;
  };
  switch (r.kind()) {
    case RingKind::integers:
      r.enumerate_elements(consider, bound);
      break;
    case RingKind::poly_q:
      break; // only R itself has finite index
    case RingKind::poly_fp: {
      long p = r.char_p().get_si();
      long maxdeg = 0;
      long cap = 1;
      while (cap * p <= bound) {
        cap *= p;
        ++maxdeg;
      }
      r.enumerate_elements(consider, maxdeg);
      break;
    }
    case RingKind::quadratic_order: {
      // |N(x + y*theta)| <= bound forces bounded coordinates
      mpz_class absdisc = abs(r.discriminant());
      mpz_class ylim_sq = 4 * bound / absdisc + 1;
      mpz_class ylim;
      mpz_sqrt(ylim.get_mpz_t(), ylim_sq.get_mpz_t());
      mpz_class xpad;
      mpz_sqrt(xpad.get_mpz_t(), mpz_class(bound).get_mpz_t());
      long H = mpz_class(ylim + xpad + abs(r.theta_t()) * ylim / 2 + 2).get_si();
      r.enumerate_elements(consider, H);
      break;
    }
  }

  // bounded saturation under intersections and inverse scalings
  int rounds = 0;
  bool changed = true;
  while (changed && rounds < 32) {
    changed = false;
    ++rounds;
    std::vector<FracIdeal> snapshot;
    snapshot.reserve(family.size());
    for (const auto& [k, v] : family) snapshot.push_back(v);
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j) {
        FracIdeal K = ideal_intersect(snapshot[i], snapshot[j]);
        if (add(K)) changed = true;
      }
    for (const Elem& c : scalars)
      for (const auto& I : snapshot) {
        FracIdeal K = ideal_inverse_scale(c, I);
        if (add(K)) changed = true;
      }
  }
  res.rounds = rounds;
  for (const auto& [k, v] : family) res.ideals.push_back(v);
  std::sort(res.ideals.begin(), res.ideals.end(), [](const FracIdeal& A, const FracIdeal& B) {
    mpz_class ia = ideal_index_in_ring(A).value, ib = ideal_index_in_ring(B).value;
    if (ia != ib) return ia < ib;
    return ideal_key(A) < ideal_key(B);
  });
  return res;
}

} // namespace idealis
