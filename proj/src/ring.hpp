#ifndef IDEALIS_RING_HPP
#define IDEALIS_RING_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "error.hpp"

namespace idealis {

using json = nlohmann::ordered_json;

enum class RingKind { integers, quadratic_order, poly_q, poly_fp };

// Quadratic-order elements are coordinates w.r.t. the basis {1, theta},
// theta = f*omega with omega = sqrt(d) for d != 1 (mod 4) and
// omega = (1+sqrt(d))/2 for d = 1 (mod 4).  theta satisfies
// theta^2 = t*theta + n with (t, n) as stored in the ring.
struct QuadInt {
  mpz_class x, y; // x + y*theta
  bool operator==(const QuadInt& o) const { return x == o.x && y == o.y; }
};

// Dense univariate polynomial, lowest degree first, no trailing zeros.
// Over F_p the coefficients are integers in [0, p) with denominator 1.
struct Poly {
  std::vector<mpq_class> c;
  bool operator==(const Poly& o) const { return c == o.c; }
  int degree() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
  bool is_zero() const { return c.empty(); }
};

using ElemRep = std::variant<mpz_class, QuadInt, Poly>;

struct Elem {
  ElemRep v;
};

// Element of the quotient field Q.  The denominator is a positive integer
// for the integers and quadratic-order kinds, and a monic polynomial for
// the polynomial kinds.  Always kept in lowest terms.
struct QElem {
  Elem num;
  Elem den;
};

// Finite or infinite cardinality (indices of ideals, group orders).
struct Index {
  mpz_class value;
  bool infinite = false;
  static Index inf() { return Index{0, true}; }
  static Index fin(mpz_class v) { return Index{std::move(v), false}; }
  bool operator==(const Index& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

struct UnitGroupInfo {
  enum class Tag { trivial, order2, order4, order6, base_field_units };
  Tag tag;
  std::vector<Elem> generators;
  mpz_class order; // 0 = infinite
  std::string description;
};

struct RingPredicates {
  bool is_field = false;
  bool contains_infinite_field = false;
  bool jacobson_radical_zero = false;
  bool is_integrally_closed = false;
  bool is_noetherian = false;
  bool is_dedekind = false;
  std::vector<std::pair<std::string, std::string>> justifications;
};

class Ring {
public:
  Ring() = default; // the ring of integers
  static Ring integers();
  static Ring quadratic(const mpz_class& d, const mpz_class& conductor);
  static Ring poly_over_q();
  static Ring poly_over_fp(const mpz_class& p);
  static Ring from_json(const json& j);
  json to_json() const;
  std::string name() const;

  RingKind kind() const { return kind_; }
  bool is_pid_class() const { return kind_ != RingKind::quadratic_order; }
  bool is_poly() const { return kind_ == RingKind::poly_q || kind_ == RingKind::poly_fp; }
  bool same_ring(const Ring& o) const;

  const mpz_class& d() const { return d_; }
  const mpz_class& conductor() const { return f_; }
  const mpz_class& char_p() const { return p_; }
  // theta^2 = t*theta + n
  const mpz_class& theta_t() const { return t_; }
  const mpz_class& theta_n() const { return n_; }
  // discriminant of the order: t^2 + 4n
  const mpz_class& discriminant() const { return disc_; }

  // --- element arithmetic over R ---
  Elem zero() const;
  Elem one() const;
  Elem from_int(long v) const;
  Elem quad(const mpz_class& x, const mpz_class& y) const;
  Elem poly_from(const std::vector<mpq_class>& coeffs) const;
  Elem canon(Elem a) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  bool eq(const Elem& a, const Elem& b) const;
  bool is_zero(const Elem& a) const;
  Elem conj(const Elem& a) const; // quadratic conjugate; identity elsewhere

  // |R / aR|; infinite only over Q[t] with deg a >= 1.
  Index elem_index(const Elem& a) const;
  // Integer absolute norm for integers/quadratic kinds (error for poly).
  mpz_class norm_z(const Elem& a) const;

  bool is_unit(const Elem& a) const;
  std::optional<Elem> unit_inverse(const Elem& a) const;
  UnitGroupInfo unit_group() const;
  std::vector<Elem> unit_list() const; // finite unit groups only
  RingPredicates predicates() const;

  // --- quotient field ---
  QElem q(const Elem& a) const;
  QElem q_div(const Elem& a, const Elem& b) const;
  QElem qcanon(QElem a) const;
  QElem qadd(const QElem& a, const QElem& b) const;
  QElem qsub(const QElem& a, const QElem& b) const;
  QElem qmul(const QElem& a, const QElem& b) const;
  QElem qneg(const QElem& a) const;
  QElem qinv(const QElem& a) const;
  QElem qdiv(const QElem& a, const QElem& b) const;
  bool qeq(const QElem& a, const QElem& b) const;
  bool q_is_zero(const QElem& a) const;
  std::optional<Elem> q_integral(const QElem& a) const;
  QElem qzero() const { return q(zero()); }
  QElem qone() const { return q(one()); }

  // --- polynomial helpers (poly kinds) ---
  Poly poly_mod(const Poly& a, const Poly& b) const;
  Poly poly_divexact(const Poly& a, const Poly& b) const;
  bool poly_divides(const Poly& a, const Poly& b) const; // a | b
  Poly poly_gcd(const Poly& a, const Poly& b) const; // monic
  Poly poly_monic(const Poly& a) const;

  // --- parsing / printing ---
  std::string to_string(const Elem& a) const;
  std::string to_string(const QElem& a) const;
  Elem parse_elem(const std::string& s) const;
  QElem parse_qelem(const std::string& s) const;

  // Deterministic enumeration of ring elements by height shells.
  // Calls fn for each element; stop when fn returns false.
  void enumerate_elements(const std::function<bool(const Elem&)>& fn, long max_height) const;
  // Deterministic enumeration of nonzero quotient-field elements.
  void enumerate_qelements(const std::function<bool(const QElem&)>& fn, long max_height) const;

private:
  RingKind kind_ = RingKind::integers;
  mpz_class d_, f_, p_, t_, n_, disc_;

  mpq_class fp_reduce(const mpq_class& a) const;
  Poly poly_canon(Poly a) const;
};

mpz_class mpq_num(const mpq_class& q);
mpz_class mpq_den(const mpq_class& q);

} // namespace idealis

#endif
