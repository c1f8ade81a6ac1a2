#include "ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace idealis {

mpz_class mpq_num(const mpq_class& q) { return mpz_class(q.get_num()); }
mpz_class mpq_den(const mpq_class& q) { return mpz_class(q.get_den()); }

namespace {

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool is_prime_z(const mpz_class& p) {
  if (p < 2) return false;
  mpz_class i = 2;
  while (i * i <= p) {
    if (p % i == 0) return false;
    ++i;
  }
  return true;
}

bool is_squarefree_z(const mpz_class& d0) {
  mpz_class d = abs(d0);
  if (d == 0) return false;
  mpz_class i = 2;
  while (i * i <= d) {
    if (d % (i * i) == 0) return false;
    if (d % i == 0) d /= i;
    ++i;
  }
  return true;
}

mpz_class mod4(const mpz_class& d) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), d.get_mpz_t(), 4);
  return r;
}

} // namespace

Ring Ring::integers() {
  Ring r;
  r.kind_ = RingKind::integers;
  return r;
}

Ring Ring::quadratic(const mpz_class& d, const mpz_class& conductor) {
  if (d == 0 || d == 1) fail_invalid("quadratic order: d must be a squarefree integer != 0, 1");
  if (!is_squarefree_z(d)) fail_invalid("quadratic order: d must be squarefree");
  if (d > 0)
    fail_unsupported("real quadratic orders (d > 0) are rejected: the unit group is infinite");
  if (conductor < 1) fail_invalid("quadratic order: conductor must be >= 1");
  Ring r;
  r.kind_ = RingKind::quadratic_order;
  r.d_ = d;
  r.f_ = conductor;
  if (mod4(d) == 1) {
    // omega = (1+sqrt(d))/2, theta = f*omega, theta^2 = f*theta + f^2*(d-1)/4
    r.t_ = conductor;
    r.n_ = conductor * conductor * (d - 1) / 4;
  } else {
    // omega = sqrt(d), theta = f*sqrt(d), theta^2 = f^2*d
    r.t_ = 0;
    r.n_ = conductor * conductor * d;
  }
  r.disc_ = r.t_ * r.t_ + 4 * r.n_;
  return r;
}

Ring Ring::poly_over_q() {
  Ring r;
  r.kind_ = RingKind::poly_q;
  return r;
}

Ring Ring::poly_over_fp(const mpz_class& p) {
  if (!is_prime_z(p)) fail_invalid("poly ring: p must be prime");
  Ring r;
  r.kind_ = RingKind::poly_fp;
  r.p_ = p;
  return r;
}

Ring Ring::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) fail_invalid("ring descriptor: missing \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "integers") return integers();
  if (kind == "quadratic_order") {
    if (!j.contains("d") || !j.contains("conductor"))
      fail_invalid("quadratic_order descriptor needs \"d\" and \"conductor\"");
    return quadratic(mpz_class(j.at("d").get<long>()), mpz_class(j.at("conductor").get<long>()));
  }
  if (kind == "poly") {
    std::string base = j.value("base", "");
    if (base == "Q") return poly_over_q();
    if (base == "Fp") {
      if (!j.contains("p")) fail_invalid("poly/Fp descriptor needs \"p\"");
      return poly_over_fp(mpz_class(j.at("p").get<long>()));
    }
    fail_invalid("poly descriptor: base must be \"Q\" or \"Fp\"");
  }
  fail_invalid("unknown ring kind: " + kind);
}

json Ring::to_json() const {
  json j;
  switch (kind_) {
    case RingKind::integers:
      j["kind"] = "integers";
      break;
    case RingKind::quadratic_order:
      j["kind"] = "quadratic_order";
      j["d"] = static_cast<long>(d_.get_si());
      j["conductor"] = static_cast<long>(f_.get_si());
      break;
    case RingKind::poly_q:
      j["kind"] = "poly";
      j["base"] = "Q";
      break;
    case RingKind::poly_fp:
      j["kind"] = "poly";
      j["base"] = "Fp";
      j["p"] = static_cast<long>(p_.get_si());
      break;
  }
  return j;
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::integers: return "Z";
    case RingKind::quadratic_order:
      return "Z-order(d=" + d_.get_str() + ",f=" + f_.get_str() + ")";
    case RingKind::poly_q: return "Q[t]";
    case RingKind::poly_fp: return "F" + p_.get_str() + "[t]";
  }
  return "?";
}

bool Ring::same_ring(const Ring& o) const {
  return kind_ == o.kind_ && d_ == o.d_ && f_ == o.f_ && p_ == o.p_;
}

// ---------------- element arithmetic ----------------

mpq_class Ring::fp_reduce(const mpq_class& a) const {
  mpz_class num = mpq_num(a);
  mpz_class den = mpq_den(a);
  if (den != 1) {
    mpz_class inv;
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p_.get_mpz_t()))
      fail_invalid("F_p coefficient with denominator divisible by p");
    num *= inv;
  }
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), p_.get_mpz_t());
  return mpq_class(r);
}

Poly Ring::poly_canon(Poly a) const {
  if (kind_ == RingKind::poly_fp)
    for (auto& c : a.c) c = fp_reduce(c);
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  return a;
}

Elem Ring::zero() const {
  switch (kind_) {
    case RingKind::integers: return Elem{mpz_class(0)};
    case RingKind::quadratic_order: return Elem{QuadInt{0, 0}};
    default: return Elem{Poly{}};
  }
}

Elem Ring::one() const { return from_int(1); }

Elem Ring::from_int(long v) const {
  switch (kind_) {
    case RingKind::integers: return Elem{mpz_class(v)};
    case RingKind::quadratic_order: return Elem{QuadInt{v, 0}};
    default: {
      Poly p;
      p.c.push_back(mpq_class(v));
      return Elem{poly_canon(std::move(p))};
    }
  }
}

Elem Ring::quad(const mpz_class& x, const mpz_class& y) const {
  if (kind_ != RingKind::quadratic_order) fail_invalid("quad() on non-quadratic ring");
  return Elem{QuadInt{x, y}};
}

Elem Ring::poly_from(const std::vector<mpq_class>& coeffs) const {
  if (!is_poly()) fail_invalid("poly_from() on non-polynomial ring");
  Poly p;
  p.c = coeffs;
  return Elem{poly_canon(std::move(p))};
}

Elem Ring::canon(Elem a) const {
  if (is_poly()) return Elem{poly_canon(std::get<Poly>(std::move(a.v)))};
  return a;
}

Elem Ring::add(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case RingKind::integers:
      return Elem{std::get<mpz_class>(a.v) + std::get<mpz_class>(b.v)};
    case RingKind::quadratic_order: {
      const auto& u = std::get<QuadInt>(a.v);
      const auto& v = std::get<QuadInt>(b.v);
      return Elem{QuadInt{u.x + v.x, u.y + v.y}};
    }
    default: {
      const auto& u = std::get<Poly>(a.v).c;
      const auto& v = std::get<Poly>(b.v).c;
      Poly r;
      r.c.resize(std::max(u.size(), v.size()));
      for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < u.size()) r.c[i] += u[i];
        if (i < v.size()) r.c[i] += v[i];
      }
      return Elem{poly_canon(std::move(r))};
    }
  }
}

Elem Ring::neg(const Elem& a) const {
  switch (kind_) {
    case RingKind::integers: return Elem{-std::get<mpz_class>(a.v)};
    case RingKind::quadratic_order: {
      const auto& u = std::get<QuadInt>(a.v);
      return Elem{QuadInt{-u.x, -u.y}};
    }
    default: {
      Poly r = std::get<Poly>(a.v);
      for (auto& c : r.c) c = -c;
      return Elem{poly_canon(std::move(r))};
    }
  }
}

Elem Ring::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem Ring::mul(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case RingKind::integers:
      return Elem{std::get<mpz_class>(a.v) * std::get<mpz_class>(b.v)};
    case RingKind::quadratic_order: {
      // (x1+y1*th)(x2+y2*th) = x1x2 + n*y1y2 + (x1y2 + x2y1 + t*y1y2)*th
      const auto& u = std::get<QuadInt>(a.v);
      const auto& v = std::get<QuadInt>(b.v);
      return Elem{QuadInt{u.x * v.x + n_ * u.y * v.y,
                          u.x * v.y + u.y * v.x + t_ * u.y * v.y}};
    }
    default: {
      const auto& u = std::get<Poly>(a.v).c;
      const auto& v = std::get<Poly>(b.v).c;
      Poly r;
      if (u.empty() || v.empty()) return Elem{r};
      r.c.assign(u.size() + v.size() - 1, mpq_class(0));
      for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r.c[i + j] += u[i] * v[j];
      return Elem{poly_canon(std::move(r))};
    }
  }
}

bool Ring::eq(const Elem& a, const Elem& b) const { return a.v == b.v; }

bool Ring::is_zero(const Elem& a) const {
  switch (kind_) {
    case RingKind::integers: return std::get<mpz_class>(a.v) == 0;
    case RingKind::quadratic_order: {
      const auto& u = std::get<QuadInt>(a.v);
      return u.x == 0 && u.y == 0;
    }
    default: return std::get<Poly>(a.v).is_zero();
  }
}

Elem Ring::conj(const Elem& a) const {
  if (kind_ != RingKind::quadratic_order) return a;
  const auto& u = std::get<QuadInt>(a.v);
  // conjugate of theta is t - theta
  return Elem{QuadInt{u.x + t_ * u.y, -u.y}};
}

mpz_class Ring::norm_z(const Elem& a) const {
  switch (kind_) {
    case RingKind::integers: return abs(std::get<mpz_class>(a.v));
    case RingKind::quadratic_order: {
      const auto& u = std::get<QuadInt>(a.v);
      // N(x+y*theta) = x^2 + t*x*y - n*y^2, positive definite for d < 0
      return u.x * u.x + t_ * u.x * u.y - n_ * u.y * u.y;
    }
    default: fail_invalid("norm_z undefined for polynomial rings");
  }
}

Index Ring::elem_index(const Elem& a) const {
  if (is_zero(a)) fail_invalid("elem_index of zero");
  switch (kind_) {
    case RingKind::integers:
    case RingKind::quadratic_order: return Index::fin(norm_z(a));
    case RingKind::poly_fp: {
      mpz_class r;
      mpz_pow_ui(r.get_mpz_t(), p_.get_mpz_t(),
                 static_cast<unsigned long>(std::get<Poly>(a.v).degree()));
      return Index::fin(r);
    }
    case RingKind::poly_q:
      return std::get<Poly>(a.v).degree() == 0 ? Index::fin(1) : Index::inf();
  }
  fail(errc::internal, "unreachable");
}

bool Ring::is_unit(const Elem& a) const {
  if (is_zero(a)) return false;
  switch (kind_) {
    case RingKind::integers: {
      const auto& z = std::get<mpz_class>(a.v);
      return z == 1 || z == -1;
    }
    case RingKind::quadratic_order: return norm_z(a) == 1;
    default: return std::get<Poly>(a.v).degree() == 0;
  }
}

std::optional<Elem> Ring::unit_inverse(const Elem& a) const {
  if (!is_unit(a)) return std::nullopt;
  switch (kind_) {
    case RingKind::integers: return a;
    case RingKind::quadratic_order: return conj(a); // a * conj(a) = N(a) = 1
    default: {
      mpq_class c = std::get<Poly>(a.v).c[0];
      Poly r;
      r.c.push_back(1 / c);
      return Elem{poly_canon(std::move(r))};
    }
  }
}

std::vector<Elem> Ring::unit_list() const {
  switch (kind_) {
    case RingKind::integers: return {one(), from_int(-1)};
    case RingKind::quadratic_order: {
      std::vector<Elem> out;
      for (long x = -2; x <= 2; ++x)
        for (long y = -2; y <= 2; ++y) {
          Elem e = quad(x, y);
          if (!is_zero(e) && norm_z(e) == 1) out.push_back(e);
        }
      return out;
    }
    case RingKind::poly_fp: {
      std::vector<Elem> out;
      for (mpz_class c = 1; c < p_; ++c) out.push_back(poly_from({mpq_class(c)}));
      return out;
    }
    case RingKind::poly_q: fail_invalid("unit_list: unit group of Q[t] is infinite");
  }
  fail(errc::internal, "unreachable");
}

UnitGroupInfo Ring::unit_group() const {
  UnitGroupInfo info;
  switch (kind_) {
    case RingKind::integers:
      info.tag = UnitGroupInfo::Tag::order2;
      info.generators = {from_int(-1)};
      info.order = 2;
      info.description = "{1,-1}";
      return info;
    case RingKind::quadratic_order: {
      auto units = unit_list();
      info.order = static_cast<long>(units.size());
      if (units.size() == 2) {
        info.tag = UnitGroupInfo::Tag::order2;
        info.generators = {from_int(-1)};
        info.description = "{1,-1}";
      } else if (units.size() == 4) {
        info.tag = UnitGroupInfo::Tag::order4;
        info.generators = {quad(0, 1)};
        info.description = "cyclic of order 4, generated by theta";
      } else if (units.size() == 6) {
        info.tag = UnitGroupInfo::Tag::order6;
        info.generators = {quad(0, 1)};
        info.description = "cyclic of order 6, generated by theta";
      } else {
        fail(errc::internal, "unexpected torsion unit count");
      }
      return info;
    }
    case RingKind::poly_fp: {
      info.tag = UnitGroupInfo::Tag::base_field_units;
      info.order = p_ - 1;
      // smallest primitive root mod p
      mpz_class g = 1;
      if (p_ > 2) {
        for (g = 2; g < p_; ++g) {
          bool primitive = true;
          mpz_class x = 1;
          for (mpz_class k = 1; k < p_ - 1; ++k) {
            x = (x * g) % p_;
            if (x == 1) { primitive = false; break; }
          }
          if (primitive) break;
        }
      }
      info.generators = {poly_from({mpq_class(g)})};
      info.description = "F" + p_.get_str() + "^*";
      return info;
    }
    case RingKind::poly_q:
      info.tag = UnitGroupInfo::Tag::base_field_units;
      info.order = 0;
      info.description = "Q^*, the nonzero constants";
      return info;
  }
  fail(errc::internal, "unreachable");
}

RingPredicates Ring::predicates() const {
  RingPredicates p;
  p.is_field = false;
  p.is_noetherian = true;
  switch (kind_) {
    case RingKind::integers:
      p.contains_infinite_field = false;
      p.jacobson_radical_zero = true;
      p.is_integrally_closed = true;
      p.is_dedekind = true;
      p.justifications = {
          {"is_field", "2 has no inverse in Z"},
          {"contains_infinite_field", "the prime ring is Z and no subfield exists"},
          {"jacobson_radical_zero", "infinitely many primes p, and the ideals pZ intersect in 0"},
          {"is_integrally_closed", "Z is a PID, hence integrally closed"},
          {"is_noetherian", "Z is a PID"},
          {"is_dedekind", "Z is a PID"},
      };
      break;
    case RingKind::quadratic_order: {
      p.contains_infinite_field = false;
      p.jacobson_radical_zero = true;
      p.is_integrally_closed = (f_ == 1);
      p.is_dedekind = (f_ == 1);
      std::string closed_why =
          f_ == 1 ? "conductor 1: the order is the maximal order of its field"
                  : "conductor " + f_.get_str() + " > 1: theta/" + f_.get_str() +
                        " generates the maximal order and is integral over the order";
      p.justifications = {
          {"is_field", "rational primes are non-invertible"},
          {"contains_infinite_field", "finite Z-module, so any subfield would be a number field "
                                      "acting on it; only Q qualifies and Q is not contained"},
          {"jacobson_radical_zero",
           "infinitely many maximal ideals (one above each rational prime); their intersection "
           "meets Z in 0"},
          {"is_integrally_closed", closed_why},
          {"is_noetherian", "finitely generated Z-module"},
          {"is_dedekind", f_ == 1 ? "noetherian, dimension one, integrally closed"
                                  : "not integrally closed"},
      };
      break;
    }
    case RingKind::poly_q:
      p.contains_infinite_field = true;
      p.jacobson_radical_zero = true;
      p.is_integrally_closed = true;
      p.is_dedekind = true;
      p.justifications = {
          {"is_field", "t has no inverse"},
          {"contains_infinite_field", "contains the constants Q"},
          {"jacobson_radical_zero",
           "infinitely many maximal ideals (t-a), a in Q, with trivial intersection"},
          {"is_integrally_closed", "Q[t] is a PID"},
          {"is_noetherian", "Q[t] is a PID"},
          {"is_dedekind", "Q[t] is a PID"},
      };
      break;
    case RingKind::poly_fp:
      p.contains_infinite_field = false;
      p.jacobson_radical_zero = true;
      p.is_integrally_closed = true;
      p.is_dedekind = true;
      p.justifications = {
          {"is_field", "t has no inverse"},
          {"contains_infinite_field", "the constants form the finite field F" + p_.get_str()},
          {"jacobson_radical_zero",
           "infinitely many monic irreducibles with trivial intersection of the ideals they "
           "generate"},
          {"is_integrally_closed", "F_p[t] is a PID"},
          {"is_noetherian", "F_p[t] is a PID"},
          {"is_dedekind", "F_p[t] is a PID"},
      };
      break;
  }
  return p;
}

// ---------------- quotient field ----------------

QElem Ring::q(const Elem& a) const { return QElem{a, one()}; }

QElem Ring::qcanon(QElem a) const {
  if (is_zero(a.den)) fail_invalid("zero denominator");
  switch (kind_) {
    case RingKind::integers: {
      mpz_class n = std::get<mpz_class>(a.num.v);
      mpz_class d = std::get<mpz_class>(a.den.v);
      if (d < 0) { n = -n; d = -d; }
      mpz_class g = zgcd(abs(n), d);
      if (g > 1) { n /= g; d /= g; }
      if (n == 0) d = 1;
      return QElem{Elem{n}, Elem{d}};
    }
    case RingKind::quadratic_order: {
      QuadInt n = std::get<QuadInt>(a.num.v);
      QuadInt dq = std::get<QuadInt>(a.den.v);
      if (dq.y != 0) fail_invalid("quadratic denominator must be a rational integer");
      mpz_class d = dq.x;
      if (d < 0) { n.x = -n.x; n.y = -n.y; d = -d; }
      mpz_class g = zgcd(zgcd(abs(n.x), abs(n.y)), d);
      if (g > 1) { n.x /= g; n.y /= g; d /= g; }
      if (n.x == 0 && n.y == 0) d = 1;
      return QElem{Elem{n}, Elem{QuadInt{d, 0}}};
    }
    default: {
      Poly n = std::get<Poly>(a.num.v);
      Poly d = std::get<Poly>(a.den.v);
      if (n.is_zero()) {
        Poly o; o.c.push_back(1);
        return QElem{Elem{Poly{}}, Elem{poly_canon(std::move(o))}};
      }
      Poly g = poly_gcd(n, d);
      if (g.degree() > 0) {
        n = poly_divexact(n, g);
        d = poly_divexact(d, g);
      }
      // make the denominator monic
      mpq_class lead = d.c.back();
      if (lead != 1) {
        for (auto& c : n.c) c /= lead;
        for (auto& c : d.c) c /= lead;
      }
      return QElem{Elem{poly_canon(std::move(n))}, Elem{poly_canon(std::move(d))}};
    }
  }
}

QElem Ring::q_div(const Elem& a, const Elem& b) const {
  if (is_zero(b)) fail_invalid("division by zero");
  switch (kind_) {
    case RingKind::quadratic_order: {
      // a/b = a*conj(b) / N(b) with integer denominator N(b) > 0
      Elem num = mul(a, conj(b));
      mpz_class den = norm_z(b);
      return qcanon(QElem{num, Elem{QuadInt{den, 0}}});
    }
    default: return qcanon(QElem{a, b});
  }
}

QElem Ring::qmul(const QElem& a, const QElem& b) const {
  return qcanon(QElem{mul(a.num, b.num), mul(a.den, b.den)});
}

QElem Ring::qadd(const QElem& a, const QElem& b) const {
  Elem num = add(mul(a.num, b.den), mul(b.num, a.den));
  return qcanon(QElem{num, mul(a.den, b.den)});
}

QElem Ring::qneg(const QElem& a) const { return QElem{neg(a.num), a.den}; }

QElem Ring::qsub(const QElem& a, const QElem& b) const { return qadd(a, qneg(b)); }

QElem Ring::qinv(const QElem& a) const {
  if (is_zero(a.num)) fail_invalid("inverse of zero");
  return q_div(a.den, a.num);
}

QElem Ring::qdiv(const QElem& a, const QElem& b) const { return qmul(a, qinv(b)); }

bool Ring::qeq(const QElem& a, const QElem& b) const {
  return eq(mul(a.num, b.den), mul(b.num, a.den));
}

bool Ring::q_is_zero(const QElem& a) const { return is_zero(a.num); }

std::optional<Elem> Ring::q_integral(const QElem& a) const {
  QElem c = qcanon(a);
  if (eq(c.den, one())) return c.num;
  return std::nullopt;
}

// ---------------- polynomial helpers ----------------

Poly Ring::poly_monic(const Poly& a) const {
  if (a.is_zero()) return a;
  Poly r = a;
  mpq_class lead = r.c.back();
  for (auto& c : r.c) c /= lead;
  return poly_canon(std::move(r));
}

Poly Ring::poly_mod(const Poly& a, const Poly& b) const {
  if (b.is_zero()) fail_invalid("poly_mod by zero");
  Poly r = poly_canon(a);
  int db = b.degree();
  while (!r.is_zero() && r.degree() >= db) {
    mpq_class factor = r.c.back() / b.c.back();
    if (kind_ == RingKind::poly_fp) factor = fp_reduce(factor);
    int shift = r.degree() - db;
    for (int i = 0; i <= db; ++i) r.c[i + shift] -= factor * b.c[i];
    r = poly_canon(std::move(r));
  }
  return r;
}

Poly Ring::poly_divexact(const Poly& a, const Poly& b) const {
  if (b.is_zero()) fail_invalid("poly_divexact by zero");
  Poly r = poly_canon(a);
  int db = b.degree();
  Poly q;
  if (r.is_zero()) return q;
  if (r.degree() < db) fail_invalid("poly_divexact: not divisible");
  q.c.assign(r.degree() - db + 1, mpq_class(0));
  while (!r.is_zero() && r.degree() >= db) {
    mpq_class factor = r.c.back() / b.c.back();
    if (kind_ == RingKind::poly_fp) factor = fp_reduce(factor);
    int shift = r.degree() - db;
    q.c[shift] = factor;
    for (int i = 0; i <= db; ++i) r.c[i + shift] -= factor * b.c[i];
    r = poly_canon(std::move(r));
  }
  if (!r.is_zero()) fail_invalid("poly_divexact: not divisible");
  return poly_canon(std::move(q));
}

bool Ring::poly_divides(const Poly& a, const Poly& b) const {
  if (a.is_zero()) return b.is_zero();
  if (b.is_zero()) return true;
  if (b.degree() < a.degree()) return false;
  return poly_mod(b, a).is_zero();
}

Poly Ring::poly_gcd(const Poly& a, const Poly& b) const {
  Poly u = poly_canon(a), v = poly_canon(b);
  while (!v.is_zero()) {
    Poly r = poly_mod(u, v);
    u = std::move(v);
    v = std::move(r);
  }
  return poly_monic(u);
}

// ---------------- printing ----------------

namespace {

void append_term(std::string& out, const mpq_class& coeff, const char* sym, int k) {
  if (coeff == 0) return;
  mpq_class c = coeff;
  bool negative = c < 0;
  if (negative) c = -c;
  if (out.empty()) {
    if (negative) out += "-";
  } else {
    out += negative ? "-" : "+";
  }
  if (k == 0) {
    out += c.get_str();
    return;
  }
  if (c != 1) {
    out += c.get_str();
    out += "*";
  }
  out += sym;
  if (k > 1) {
    out += "^";
    out += std::to_string(k);
  }
}

} // namespace

std::string Ring::to_string(const Elem& a) const {
  switch (kind_) {
    case RingKind::integers: return std::get<mpz_class>(a.v).get_str();
    case RingKind::quadratic_order: {
      const auto& u = std::get<QuadInt>(a.v);
      std::string out;
      append_term(out, mpq_class(u.x), "w", 0);
      append_term(out, mpq_class(u.y), "w", 1);
      return out.empty() ? "0" : out;
    }
    default: {
      const auto& p = std::get<Poly>(a.v);
      std::string out;
      for (int k = p.degree(); k >= 0; --k) append_term(out, p.c[k], "t", k);
      return out.empty() ? "0" : out;
    }
  }
}

std::string Ring::to_string(const QElem& a0) const {
  QElem a = qcanon(a0);
  if (eq(a.den, one())) {
    if (kind_ == RingKind::integers) return to_string(a.num);
    return to_string(a.num);
  }
  std::string num = to_string(a.num);
  std::string den = to_string(a.den);
  if (kind_ == RingKind::integers) return num + "/" + den;
  return "(" + num + ")/(" + den + ")";
}

// ---------------- parsing ----------------

namespace {

std::string strip_ws(const std::string& s) {
  std::string r;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) r += ch;
  return r;
}

struct Term {
  mpq_class coeff;
  int power = 0;
};

// Parse "coeff", "coeff*sym^k", "sym^k", "sym"; coeff may be "a" or "a/b".
Term parse_term(const std::string& s, char sym) {
  Term t;
  t.coeff = 1;
  std::string rest = s;
  auto star = rest.find('*');
  std::string coeff_str, sym_str;
  if (star != std::string::npos) {
    coeff_str = rest.substr(0, star);
    sym_str = rest.substr(star + 1);
  } else if (!rest.empty() && rest.find(sym) != std::string::npos) {
    auto pos = rest.find(sym);
    coeff_str = rest.substr(0, pos);
    sym_str = rest.substr(pos);
  } else {
    coeff_str = rest;
  }
  if (!coeff_str.empty()) {
    try {
      t.coeff = mpq_class(coeff_str);
      t.coeff.canonicalize();
    } catch (...) {
      fail_invalid("cannot parse coefficient: " + coeff_str);
    }
  }
  if (!sym_str.empty()) {
    if (sym_str[0] != sym) fail_invalid("unexpected symbol in: " + s);
    if (sym_str.size() == 1) {
      t.power = 1;
    } else {
      if (sym_str[1] != '^') fail_invalid("malformed power in: " + s);
      t.power = std::stoi(sym_str.substr(2));
      if (t.power < 0) fail_invalid("negative power in: " + s);
    }
  }
  return t;
}

std::vector<Term> parse_sum(const std::string& s, char sym) {
  std::vector<Term> terms;
  if (s.empty()) fail_invalid("empty element string");
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    if (j == i) fail_invalid("malformed element string: " + s);
    Term t = parse_term(s.substr(i, j - i), sym);
    t.coeff *= sign;
    terms.push_back(t);
    i = j;
  }
  return terms;
}

} // namespace

Elem Ring::parse_elem(const std::string& raw) const {
  std::string s = strip_ws(raw);
  switch (kind_) {
    case RingKind::integers: {
      try {
        return Elem{mpz_class(s)};
      } catch (...) {
        fail_invalid("cannot parse integer: " + s);
      }
    }
    case RingKind::quadratic_order: {
      auto terms = parse_sum(s, 'w');
      QuadInt u{0, 0};
      for (const auto& t : terms) {
        if (mpq_den(t.coeff) != 1) fail_invalid("quadratic coordinates must be integers: " + s);
        if (t.power == 0)
          u.x += mpq_num(t.coeff);
        else if (t.power == 1)
          u.y += mpq_num(t.coeff);
        else
          fail_invalid("w^k with k > 1 is not in canonical form: " + s);
      }
      return Elem{u};
    }
    default: {
      auto terms = parse_sum(s, 't');
      Poly p;
      for (const auto& t : terms) {
        if (p.c.size() <= static_cast<size_t>(t.power)) p.c.resize(t.power + 1);
        p.c[t.power] += t.coeff;
      }
      return Elem{poly_canon(std::move(p))};
    }
  }
}

QElem Ring::parse_qelem(const std::string& raw) const {
  std::string s = strip_ws(raw);
  if (s.empty()) fail_invalid("empty element string");
  if (s[0] == '(') {
    // "(num)/(den)" or "(num)/intden"
    int depth = 0;
    size_t close = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') {
        --depth;
        if (depth == 0) { close = i; break; }
      }
    }
    if (close == std::string::npos) fail_invalid("unbalanced parentheses: " + s);
    std::string num = s.substr(1, close - 1);
    if (close + 1 >= s.size()) return qcanon(q(parse_elem(num)));
    if (s[close + 1] != '/') fail_invalid("malformed quotient: " + s);
    std::string den = s.substr(close + 2);
    if (!den.empty() && den.front() == '(') {
      if (den.back() != ')') fail_invalid("malformed quotient: " + s);
      den = den.substr(1, den.size() - 2);
    }
    Elem d = kind_ == RingKind::quadratic_order && den.find('w') == std::string::npos
                 ? quad(mpz_class(den), 0)
                 : parse_elem(den);
    return q_div(parse_elem(num), d);
  }
  if (kind_ == RingKind::integers) {
    try {
      mpq_class v(s);
      v.canonicalize();
      return qcanon(QElem{Elem{mpq_num(v)}, Elem{mpq_den(v)}});
    } catch (...) {
      fail_invalid("cannot parse rational: " + s);
    }
  }
  return qcanon(q(parse_elem(s)));
}

// ---------------- enumeration ----------------

void Ring::enumerate_elements(const std::function<bool(const Elem&)>& fn, long max_height) const {
  switch (kind_) {
    case RingKind::integers: {
      if (!fn(zero())) return;
      for (long h = 1; h <= max_height; ++h) {
        if (!fn(from_int(h))) return;
        if (!fn(from_int(-h))) return;
      }
      return;
    }
    case RingKind::quadratic_order: {
      if (!fn(zero())) return;
      for (long h = 1; h <= max_height; ++h) {
        for (long x = -h; x <= h; ++x)
          for (long y = -h; y <= h; ++y) {
            if (std::max(std::abs(x), std::abs(y)) != h) continue;
            if (!fn(quad(x, y))) return;
          }
      }
      return;
    }
    case RingKind::poly_fp: {
      if (!fn(zero())) return;
      long p = p_.get_si();
      for (long deg = 0; deg <= max_height; ++deg) {
        std::vector<long> idx(deg + 1, 0);
        idx[deg] = 1;
        while (true) {
          std::vector<mpq_class> coeffs(deg + 1);
          for (long i = 0; i <= deg; ++i) coeffs[i] = idx[i];
          if (!fn(poly_from(coeffs))) return;
          long pos = 0;
          while (pos <= deg) {
            ++idx[pos];
            if (idx[pos] < p) break;
            idx[pos] = (pos == deg) ? 1 : 0;
            ++pos;
          }
          if (pos > deg) break;
        }
      }
      return;
    }
    case RingKind::poly_q: {
      if (!fn(zero())) return;
      // shells: a polynomial of degree deg with integer coefficients of
      // maximal absolute value m sits in shell max(deg+1, m)
      for (long h = 1; h <= max_height; ++h) {
        for (long deg = 0; deg < h; ++deg) {
          std::vector<long> idx(deg + 1, -h);
          while (true) {
            long maxabs = 0;
            for (long v : idx) maxabs = std::max(maxabs, std::abs(v));
            bool in_shell = (idx[deg] != 0) && (maxabs == h || deg + 1 == h);
            if (in_shell) {
              std::vector<mpq_class> coeffs(deg + 1);
              for (long i = 0; i <= deg; ++i) coeffs[i] = idx[i];
              if (!fn(poly_from(coeffs))) return;
            }
            long pos = 0;
            while (pos <= deg && ++idx[pos] > h) {
              idx[pos] = -h;
              ++pos;
            }
            if (pos > deg) break;
          }
        }
      }
      return;
    }
  }
}

void Ring::enumerate_qelements(const std::function<bool(const QElem&)>& fn,
                               long max_height) const {
  switch (kind_) {
    case RingKind::integers: {
      for (long h = 1; h <= max_height; ++h) {
        for (long n = -h; n <= h; ++n)
          for (long d = 1; d <= h; ++d) {
            if (n == 0) continue;
            if (std::max(std::abs(n), d) != h) continue;
            if (zgcd(abs(mpz_class(n)), mpz_class(d)) != 1) continue;
            if (!fn(qcanon(QElem{Elem{mpz_class(n)}, Elem{mpz_class(d)}}))) return;
          }
      }
      return;
    }
    case RingKind::quadratic_order: {
      for (long h = 1; h <= max_height; ++h) {
        for (long x = -h; x <= h; ++x)
          for (long y = -h; y <= h; ++y)
            for (long d = 1; d <= h; ++d) {
              if (x == 0 && y == 0) continue;
              if (std::max({std::abs(x), std::abs(y), d}) != h) continue;
              mpz_class g = zgcd(zgcd(abs(mpz_class(x)), abs(mpz_class(y))), mpz_class(d));
              if (g != 1) continue;
              if (!fn(QElem{quad(x, y), quad(d, 0)})) return;
            }
      }
      return;
    }
    default: {
      // numerator and monic denominator, coprime, ordered by combined height
      std::vector<Elem> elems;
      enumerate_elements(
          [&](const Elem& e) {
            elems.push_back(e);
            return elems.size() < 4000;
          },
          max_height);
      for (size_t hi = 1; hi < elems.size(); ++hi) {
        for (size_t di = 0; di <= hi; ++di) {
          for (int which = 0; which < 2; ++which) {
            size_t ni = which == 0 ? hi : di;
            size_t dj = which == 0 ? di : hi;
            if (which == 1 && ni == dj) continue;
            const Elem& n = elems[ni];
            const Elem& d = elems[dj];
            if (is_zero(n) || is_zero(d)) continue;
            const Poly& dp = std::get<Poly>(d.v);
            if (dp.c.back() != 1) continue; // monic denominators only
            QElem v = qcanon(QElem{n, d});
            if (!eq(v.den, d) || !eq(v.num, n)) continue; // lowest terms only
            if (!fn(v)) return;
          }
        }
      }
      return;
    }
  }
}

} // namespace idealis
