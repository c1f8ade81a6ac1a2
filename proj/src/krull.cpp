#include "krull.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

namespace idealis {

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

std::vector<std::pair<mpz_class, long>> factor_z(mpz_class n) {
  if (n == 0) fail_invalid("factor_z of zero");
  if (n < 0) n = -n;
  std::vector<std::pair<mpz_class, long>> out;
  mpz_class cap = 2000000;
  for (mpz_class p = 2; p * p <= n; ++p) {
    if (p > cap) fail_exhausted("integer factorization: trial division cap exceeded");
    if (n % p == 0) {
      long e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

void require_dedekind(const Ring& r, const char* what) {
  if (!r.predicates().is_dedekind)
    fail_unsupported(std::string(what) +
                     ": divisorial prime structure of non-maximal orders is unsupported");
}

} // namespace

std::string PrimeIdeal::key() const {
  switch (kind) {
    case Kind::rational: return p.get_str();
    case Kind::inert: return p.get_str();
    case Kind::split:
    case Kind::ramified: return p.get_str() + "," + root.get_str();
    case Kind::polynomial: return ring.to_string(gen);
  }
  fail(errc::internal, "unreachable");
}

Index PrimeIdeal::norm() const {
  switch (kind) {
    case Kind::rational: return Index::fin(p);
    case Kind::inert: return Index::fin(p * p);
    case Kind::split:
    case Kind::ramified: return Index::fin(p);
    case Kind::polynomial: return ring.elem_index(gen);
  }
  fail(errc::internal, "unreachable");
}

namespace {

std::vector<PrimeIdeal> primes_above(const Ring& r, const mpz_class& p) {
  // factor x^2 - t x - n modulo p
  std::vector<mpz_class> roots;
  for (mpz_class x = 0; x < p; ++x) {
    mpz_class v = x * x - r.theta_t() * x - r.theta_n();
    mpz_class rem;
    mpz_fdiv_r(rem.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    if (rem == 0) roots.push_back(x);
  }
  std::vector<PrimeIdeal> out;
  if (roots.empty()) {
    PrimeIdeal P;
    P.ring = r;
    P.kind = PrimeIdeal::Kind::inert;
    P.p = p;
    P.residue_degree = 2;
    P.ideal = ideal_principal(r, r.q(r.quad(p, 0)));
    out.push_back(std::move(P));
    return out;
  }
  for (const mpz_class& root : roots) {
    PrimeIdeal P;
    P.ring = r;
    P.kind = roots.size() == 2 ? PrimeIdeal::Kind::split : PrimeIdeal::Kind::ramified;
    P.p = p;
    P.root = root;
    P.residue_degree = 1;
    P.ideal = ideal_from_generators(
        r, {r.q(r.quad(p, 0)), r.q(r.quad(-root, 1))}); // (p, theta - root)
    out.push_back(std::move(P));
  }
  return out;
}

// monic irreducibles over F_p of degree <= maxdeg, by degree then lex
std::vector<Poly> fp_irreducibles(const Ring& r, long maxdeg) {
  long p = r.char_p().get_si();
  std::vector<Poly> irr;
  for (long deg = 1; deg <= maxdeg; ++deg) {
    std::vector<long> idx(deg, 0);
    while (true) {
      std::vector<mpq_class> coeffs(deg + 1);
      for (long i = 0; i < deg; ++i) coeffs[i] = idx[i];
      coeffs[deg] = 1;
      Poly cand = std::get<Poly>(r.poly_from(coeffs).v);
      bool reducible = false;
      for (const Poly& q : irr) {
        if (2 * q.degree() > deg) break;
        if (r.poly_divides(q, cand)) {
          reducible = true;
          break;
        }
      }
      if (!reducible) irr.push_back(cand);
      long pos = 0;
      while (pos < deg && ++idx[pos] >= p) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos >= deg) break;
    }
  }
  return irr;
}

bool has_rational_root(const Ring& r, const Poly& f) {
  // monic integer polynomial: rational roots are integers dividing f(0)
  mpz_class c0 = mpq_num(f.c[0]);
  if (c0 == 0) return true;
  std::set<mpz_class> divisors = {1};
  for (auto& [p, e] : factor_z(c0)) {
    std::set<mpz_class> next;
    for (const auto& d : divisors) {
      mpz_class acc = d;
      for (long k = 0; k <= e; ++k) {
        next.insert(acc);
        acc *= p;
      }
    }
    divisors = next;
  }
  auto eval = [&](const mpz_class& x) {
    mpq_class acc = 0;
    for (int k = f.degree(); k >= 0; --k) acc = acc * x + f.c[k];
    return acc;
  };
  for (const auto& d : divisors) {
    if (eval(d) == 0 || eval(-d) == 0) return true;
  }
  return false;
}

bool is_integer_poly(const Poly& f) {
  for (const auto& c : f.c)
    if (mpq_den(c) != 1) return false;
  return true;
}

// exact irreducibility over Q for monic integer polynomials of degree <= 5
bool q_poly_irreducible(const Ring& r, const Poly& f) {
  int deg = f.degree();
  if (deg <= 0) return false;
  if (deg == 1) return true;
  if (has_rational_root(r, f)) return false;
  if (deg <= 3) return true;
  if (deg > 5) fail_exhausted("Q[t] irreducibility implemented up to degree 5");
  // no root: the only possible factors are monic integer quadratics (Gauss)
  mpz_class B = 1;
  for (const auto& c : f.c) B = std::max(B, mpz_class(abs(mpq_num(c))));
  B += 1;
  for (mpz_class u = -2 * B; u <= 2 * B; ++u)
    for (mpz_class v = -B * B; v <= B * B; ++v) {
      Poly quad = std::get<Poly>(r.poly_from({mpq_class(v), mpq_class(u), 1}).v);
      if (r.poly_divides(quad, f)) return false;
    }
  return true;
}

} // namespace

std::vector<PrimeIdeal> primes_up_to(const Ring& r, long bound, const PolyBox& box) {
  std::vector<PrimeIdeal> out;
  switch (r.kind()) {
    case RingKind::integers: {
      for (mpz_class p = 2; p <= bound; ++p)
        if (is_prime_z(p)) {
          PrimeIdeal P;
          P.ring = r;
          P.kind = PrimeIdeal::Kind::rational;
          P.p = p;
          P.gen = Elem{p};
          P.ideal = ideal_principal(r, r.q(Elem{p}));
          out.push_back(std::move(P));
        }
      return out;
    }
    case RingKind::quadratic_order: {
      require_dedekind(r, "primes_up_to");
      for (mpz_class p = 2; p <= bound; ++p)
        if (is_prime_z(p))
          for (auto& P : primes_above(r, p)) out.push_back(std::move(P));
      return out;
    }
    case RingKind::poly_fp: {
      for (const Poly& q : fp_irreducibles(r, bound)) {
        PrimeIdeal P;
        P.ring = r;
        P.kind = PrimeIdeal::Kind::polynomial;
        P.gen = Elem{q};
        P.ideal = ideal_principal(r, r.q(Elem{q}));
        out.push_back(std::move(P));
      }
      return out;
    }
    case RingKind::poly_q: {
      long maxdeg = std::min(bound, box.max_degree);
      for (long deg = 1; deg <= maxdeg; ++deg) {
        std::vector<long> idx(deg, -box.height);
        while (true) {
          std::vector<mpq_class> coeffs(deg + 1);
          for (long i = 0; i < deg; ++i) coeffs[i] = idx[i];
          coeffs[deg] = 1;
          Poly cand = std::get<Poly>(r.poly_from(coeffs).v);
          if (q_poly_irreducible(r, cand)) {
            PrimeIdeal P;
            P.ring = r;
            P.kind = PrimeIdeal::Kind::polynomial;
            P.gen = Elem{cand};
            P.ideal = ideal_principal(r, r.q(Elem{cand}));
            out.push_back(std::move(P));
          }
          long pos = 0;
          while (pos < deg && ++idx[pos] > box.height) {
            idx[pos] = -box.height;
            ++pos;
          }
          if (pos >= deg) break;
        }
      }
      return out;
    }
  }
  fail(errc::internal, "unreachable");
}

PrimeIdeal prime_from_key(const Ring& r, const std::string& key) {
  switch (r.kind()) {
    case RingKind::integers: {
      mpz_class p(key);
      if (!is_prime_z(p)) fail_invalid("not a prime: " + key);
      PrimeIdeal P;
      P.ring = r;
      P.kind = PrimeIdeal::Kind::rational;
      P.p = p;
      P.gen = Elem{p};
      P.ideal = ideal_principal(r, r.q(Elem{p}));
      return P;
    }
    case RingKind::quadratic_order: {
      require_dedekind(r, "prime_from_key");
      auto comma = key.find(',');
      mpz_class p(key.substr(0, comma));
      if (!is_prime_z(p)) fail_invalid("not a prime: " + key);
      auto above = primes_above(r, p);
      if (comma == std::string::npos) {
        if (above.size() != 1 || above[0].kind != PrimeIdeal::Kind::inert)
          fail_invalid("prime key " + key + " is ambiguous; use \"p,r\"");
        return above[0];
      }
      mpz_class root(key.substr(comma + 1));
      for (const auto& P : above)
        if (P.kind != PrimeIdeal::Kind::inert && P.root == root) return P;
      fail_invalid("no prime above " + p.get_str() + " with theta = " + root.get_str());
    }
    case RingKind::poly_q:
    case RingKind::poly_fp: {
      Elem g = Elem{r.poly_monic(std::get<Poly>(r.parse_elem(key).v))};
      PrimeIdeal P;
      P.ring = r;
      P.kind = PrimeIdeal::Kind::polynomial;
      P.gen = g;
      P.ideal = ideal_principal(r, r.q(g));
      if (!prime_certify(P)) fail_invalid("polynomial is not irreducible: " + key);
      return P;
    }
  }
  fail(errc::internal, "unreachable");
}

bool prime_certify(const PrimeIdeal& P) {
  const Ring& r = P.ring;
  switch (P.kind) {
    case PrimeIdeal::Kind::rational: return is_prime_z(P.p);
    case PrimeIdeal::Kind::polynomial: {
      const Poly& g = std::get<Poly>(P.gen.v);
      if (r.kind() == RingKind::poly_fp) {
        for (const Poly& q : fp_irreducibles(r, g.degree() / 2))
          if (r.poly_divides(q, g)) return false;
        return g.degree() >= 1;
      }
      return q_poly_irreducible(r, g);
    }
    default: {
      // finite quotient without zero divisors: check all products of nonzero
      // coset representatives of R modulo the prime
      FracIdeal R = ideal_ring(r);
      auto reps = ideal_coset_reps(R, P.ideal);
      for (const auto& x : reps) {
        if (ideal_contains(P.ideal, x)) continue;
        for (const auto& y : reps) {
          if (ideal_contains(P.ideal, y)) continue;
          if (ideal_contains(P.ideal, r.qmul(x, y))) return false;
        }
      }
      return !ideal_eq(P.ideal, R);
    }
  }
}

namespace {

long poly_val(const Ring& r, const PrimeIdeal& P, const Poly& f) {
  const Poly& g = std::get<Poly>(P.gen.v);
  Poly cur = f;
  long v = 0;
  while (!cur.is_zero() && r.poly_divides(g, cur)) {
    cur = r.poly_divexact(cur, g);
    ++v;
  }
  return v;
}

long integral_ideal_valuation(const PrimeIdeal& P, const FracIdeal& J) {
  // largest k with J contained in P^k (ordinary power = divisorial power here)
  FracIdeal power = P.ideal;
  long k = 0;
  while (ideal_subset(J, power)) {
    ++k;
    power = ideal_mul(power, P.ideal);
  }
  return k;
}

} // namespace

long valuation(const PrimeIdeal& P, const QElem& x) {
  const Ring& r = P.ring;
  if (r.q_is_zero(x)) fail_invalid("valuation of zero");
  switch (r.kind()) {
    case RingKind::integers: {
      mpz_class n = std::get<mpz_class>(x.num.v), d = std::get<mpz_class>(x.den.v);
      mpz_class tmp;
      long vn = static_cast<long>(
          mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), P.p.get_mpz_t()));
      long vd = static_cast<long>(
          mpz_remove(tmp.get_mpz_t(), d.get_mpz_t(), P.p.get_mpz_t()));
      return vn - vd;
    }
    case RingKind::poly_q:
    case RingKind::poly_fp:
      return poly_val(r, P, std::get<Poly>(x.num.v)) - poly_val(r, P, std::get<Poly>(x.den.v));
    case RingKind::quadratic_order: {
      QElem c = r.qcanon(x);
      FracIdeal num = ideal_principal(r, r.q(c.num));
      long v = integral_ideal_valuation(P, num);
      const mpz_class& den = std::get<QuadInt>(c.den.v).x;
      if (den != 1) {
        FracIdeal dI = ideal_principal(r, r.q(r.quad(den, 0)));
        v -= integral_ideal_valuation(P, dI);
      }
      return v;
    }
  }
  fail(errc::internal, "unreachable");
}

long valuation_ideal(const PrimeIdeal& P, const FracIdeal& I) {
  const Ring& r = P.ring;
  if (r.is_pid_class()) return valuation(P, I.gen);
  // scale to an integral ideal: I * (den) is integral with lattice I.lat
  FracIdeal J;
  J.ring = r;
  J.lat = I.lat;
  J.den = 1;
  long v = integral_ideal_valuation(P, J);
  if (I.den != 1) {
    FracIdeal dI = ideal_principal(r, r.q(r.quad(I.den, 0)));
    v -= integral_ideal_valuation(P, dI);
  }
  return v;
}

long DivisorVector::exponent_of(const std::string& key) const {
  for (const auto& [P, e] : terms)
    if (P.key() == key) return e;
  return 0;
}

namespace {

void dv_add(std::map<std::string, std::pair<PrimeIdeal, long>>& acc, const PrimeIdeal& P,
            long e) {
  if (e == 0) return;
  auto it = acc.find(P.key());
  if (it == acc.end()) {
    acc.emplace(P.key(), std::make_pair(P, e));
  } else {
    it->second.second += e;
    if (it->second.second == 0) acc.erase(it);
  }
}

DivisorVector dv_from_map(std::map<std::string, std::pair<PrimeIdeal, long>>& acc) {
  DivisorVector dv;
  for (auto& [k, pe] : acc) dv.terms.push_back(pe);
  return dv;
}

// cached box irreducibles for Q[t] (the enumeration is the expensive part)
const std::vector<PrimeIdeal>& q_box_primes(const Ring& r, const PolyBox& box) {
  static std::map<std::pair<long, long>, std::vector<PrimeIdeal>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(box.max_degree, box.height);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, primes_up_to(r, box.max_degree, box)).first;
  return it->second;
}

// factor a monic polynomial over Q into monic irreducibles: trial division by
// the box-enumerated irreducibles, then a bounded exact fallback
void factor_poly_q(const Ring& r, Poly f, const PolyBox& box,
                   std::map<std::string, std::pair<PrimeIdeal, long>>& acc, long sign) {
  f = r.poly_monic(f);
  if (f.degree() <= 0) return;
  const auto& primes = q_box_primes(r, box);
  for (const auto& P : primes) {
    if (std::get<Poly>(P.gen.v).degree() > f.degree()) continue;
    const Poly& g = std::get<Poly>(P.gen.v);
    long v = 0;
    while (f.degree() >= g.degree() && r.poly_divides(g, f)) {
      f = r.poly_divexact(f, g);
      ++v;
    }
    if (v > 0) dv_add(acc, P, sign * v);
    if (f.degree() == 0) return;
  }
  // leftover outside the box: factor exactly when the degree allows it
  while (f.degree() > 0) {
    if (!is_integer_poly(f) || f.degree() > 5)
      fail_exhausted("Q[t] factorization: irreducible factors fall outside the configured box");
    if (q_poly_irreducible(r, f)) {
      PrimeIdeal P;
      P.ring = r;
      P.kind = PrimeIdeal::Kind::polynomial;
      P.gen = Elem{f};
      P.ideal = ideal_principal(r, r.q(Elem{f}));
      dv_add(acc, P, sign);
      return;
    }
    // find a factor: linear via rational roots, else quadratic search
    bool split = false;
    mpz_class B = 1;
    for (const auto& c : f.c) B = std::max(B, mpz_class(abs(mpq_num(c))));
    B += 1;
    for (mpz_class a = -B; a <= B && !split; ++a) {
      Poly lin = std::get<Poly>(r.poly_from({mpq_class(a), 1}).v);
      if (r.poly_divides(lin, f)) {
        PrimeIdeal P;
        P.ring = r;
        P.kind = PrimeIdeal::Kind::polynomial;
        P.gen = Elem{lin};
        P.ideal = ideal_principal(r, r.q(Elem{lin}));
        long v = 0;
        while (r.poly_divides(lin, f)) {
          f = r.poly_divexact(f, lin);
          ++v;
        }
        dv_add(acc, P, sign * v);
        split = true;
      }
    }
    if (split) continue;
    for (mpz_class u = -2 * B; u <= 2 * B && !split; ++u)
      for (mpz_class v = -B * B; v <= B * B && !split; ++v) {
        Poly quad = std::get<Poly>(r.poly_from({mpq_class(v), mpq_class(u), 1}).v);
        if (!q_poly_irreducible(r, quad)) continue;
        if (r.poly_divides(quad, f)) {
          PrimeIdeal P;
          P.ring = r;
          P.kind = PrimeIdeal::Kind::polynomial;
          P.gen = Elem{quad};
          P.ideal = ideal_principal(r, r.q(Elem{quad}));
          long e = 0;
          while (r.poly_divides(quad, f)) {
            f = r.poly_divexact(f, quad);
            ++e;
          }
          dv_add(acc, P, sign * e);
          split = true;
        }
      }
    if (!split)
      fail_exhausted("Q[t] factorization: no factor found within the exact search bounds");
  }
}

void factor_poly_fp(const Ring& r, Poly f,
                    std::map<std::string, std::pair<PrimeIdeal, long>>& acc, long sign) {
  f = r.poly_monic(f);
  long p = r.char_p().get_si();
  auto emit = [&](const Poly& g, long v) {
    PrimeIdeal P;
    P.ring = r;
    P.kind = PrimeIdeal::Kind::polynomial;
    P.gen = Elem{g};
    P.ideal = ideal_principal(r, r.q(Elem{g}));
    dv_add(acc, P, sign * v);
  };
  // strip divisors degree by degree; once all factors of degree < d are
  // gone, any degree-d divisor is irreducible
  for (long d = 1; f.degree() > 0; ++d) {
    if (2 * d > f.degree()) {
      emit(f, 1);
      return;
    }
    std::vector<long> idx(d, 0);
    while (true) {
      std::vector<mpq_class> coeffs(d + 1);
      for (long i = 0; i < d; ++i) coeffs[i] = idx[i];
      coeffs[d] = 1;
      Poly g = std::get<Poly>(r.poly_from(coeffs).v);
      long v = 0;
      while (f.degree() >= d && r.poly_divides(g, f)) {
        f = r.poly_divexact(f, g);
        ++v;
      }
      if (v > 0) emit(g, v);
      if (f.degree() == 0) return;
      if (2 * d > f.degree()) break;
      long pos = 0;
      while (pos < d && ++idx[pos] >= p) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos >= d) break;
    }
  }
}

void factor_quadratic_integral(const Ring& r, const FracIdeal& J,
                               std::map<std::string, std::pair<PrimeIdeal, long>>& acc,
                               long sign) {
  Index N = ideal_index_in_ring(J);
  if (N.value == 1) return;
  for (auto& [p, e] : factor_z(N.value)) {
    for (const PrimeIdeal& P : primes_above(r, p)) {
      long v = integral_ideal_valuation(P, J);
      if (v > 0) dv_add(acc, P, sign * v);
    }
  }
}

} // namespace

DivisorVector factor_divisorial(const FracIdeal& I, const PolyBox& box) {
  const Ring& r = I.ring;
  require_dedekind(r, "factor_divisorial");
  std::map<std::string, std::pair<PrimeIdeal, long>> acc;
  switch (r.kind()) {
    case RingKind::integers: {
      mpz_class n = std::get<mpz_class>(I.gen.num.v), d = std::get<mpz_class>(I.gen.den.v);
      for (auto& [p, e] : factor_z(n)) {
        PrimeIdeal P;
        P.ring = r;
        P.kind = PrimeIdeal::Kind::rational;
        P.p = p;
        P.gen = Elem{p};
        P.ideal = ideal_principal(r, r.q(Elem{p}));
        dv_add(acc, P, e);
      }
      if (d != 1)
        for (auto& [p, e] : factor_z(d)) {
          PrimeIdeal P;
          P.ring = r;
          P.kind = PrimeIdeal::Kind::rational;
          P.p = p;
          P.gen = Elem{p};
          P.ideal = ideal_principal(r, r.q(Elem{p}));
          dv_add(acc, P, -e);
        }
      break;
    }
    case RingKind::poly_q: {
      factor_poly_q(r, std::get<Poly>(I.gen.num.v), box, acc, +1);
      factor_poly_q(r, std::get<Poly>(I.gen.den.v), box, acc, -1);
      break;
    }
    case RingKind::poly_fp: {
      factor_poly_fp(r, std::get<Poly>(I.gen.num.v), acc, +1);
      factor_poly_fp(r, std::get<Poly>(I.gen.den.v), acc, -1);
      break;
    }
    case RingKind::quadratic_order: {
      FracIdeal J;
      J.ring = r;
      J.lat = I.lat;
      J.den = 1;
      factor_quadratic_integral(r, J, acc, +1);
      if (I.den != 1)
        factor_quadratic_integral(r, ideal_principal(r, r.q(r.quad(I.den, 0))), acc, -1);
      break;
    }
  }
  return dv_from_map(acc);
}

FracIdeal recompose(const Ring& r, const DivisorVector& dv) {
  FracIdeal K = ideal_ring(r);
  for (const auto& [P, e] : dv.terms) {
    FracIdeal base = e > 0 ? P.ideal : ideal_colon(ideal_ring(r), P.ideal);
    for (long k = 0; k < std::abs(e); ++k) K = ideal_div_closure(ideal_mul(K, base));
  }
  return K;
}

json divisor_to_json(const DivisorVector& dv) {
  json j = json::array();
  for (const auto& [P, e] : dv.terms) j.push_back(json::array({P.key(), e}));
  return j;
}

bool membership_by_valuations(const QElem& x, const FracIdeal& I, const PolyBox& box) {
  const Ring& r = I.ring;
  require_dedekind(r, "membership_by_valuations");
  if (r.q_is_zero(x)) return true; // zero belongs to every ideal
  DivisorVector dvI = factor_divisorial(I, box);
  DivisorVector dvx = factor_divisorial(ideal_principal(r, x), box);
  std::set<std::string> keys;
  for (const auto& [P, e] : dvI.terms) keys.insert(P.key());
  for (const auto& [P, e] : dvx.terms) keys.insert(P.key());
  for (const auto& k : keys)
    if (dvx.exponent_of(k) < dvI.exponent_of(k)) return false;
  return true;
}

namespace {

QElem qpow(const Ring& r, const QElem& x, long e) {
  QElem acc = r.qone();
  QElem base = e >= 0 ? x : r.qinv(x);
  long n = std::abs(e);
  for (long i = 0; i < n; ++i) acc = r.qmul(acc, base);
  return acc;
}

FracIdeal ideal_pow(const Ring& r, const FracIdeal& I, long e) {
  FracIdeal acc = ideal_ring(r);
  for (long i = 0; i < e; ++i) acc = ideal_mul(acc, I);
  return acc;
}

// 1 = a + b with a in A, b in B, for comaximal integral ideals of a
// quadratic order
std::pair<Elem, Elem> split_one(const Ring& r, const FracIdeal& A, const FracIdeal& B) {
  if (A.den != 1 || B.den != 1) fail_invalid("split_one: integral ideals required");
  auto [va, vb] = lat_split(A.lat, B.lat, Vec2{1, 0});
  return {Elem{QuadInt{va.u, va.v}}, Elem{QuadInt{vb.u, vb.v}}};
}

Elem find_uniformizer(const Ring& r, const PrimeIdeal& P) {
  Elem out = r.zero();
  bool found = false;
  ideal_enumerate_elements(P.ideal, 24, [&](const QElem& x) {
    if (r.q_is_zero(x)) return true;
    if (valuation(P, x) == 1) {
      out = *r.q_integral(x);
      found = true;
      return false;
    }
    return true;
  });
  if (!found) fail_exhausted("no uniformizer found in the search box");
  return out;
}

} // namespace

QElem approximate(const Ring& r,
                  const std::vector<std::pair<PrimeIdeal, long>>& prescriptions) {
  require_dedekind(r, "approximate");
  std::set<std::string> seen;
  for (const auto& [P, n] : prescriptions) {
    if (!P.ring.same_ring(r)) fail_invalid("approximate: prime from a different ring");
    if (!seen.insert(P.key()).second) fail_invalid("approximate: duplicate primes");
  }
  if (prescriptions.empty()) return r.qone();

  if (r.is_pid_class()) {
    QElem x = r.qone();
    for (const auto& [P, n] : prescriptions) x = r.qmul(x, qpow(r, r.q(P.gen), n));
    return x;
  }

  // quadratic maximal order: CRT construction with a correction pass
  long M = 2;
  for (const auto& [P, n] : prescriptions) M = std::max(M, std::abs(n) + 2);

  std::vector<FracIdeal> powers;
  for (const auto& [P, n] : prescriptions) powers.push_back(ideal_pow(r, P.ideal, M));

  QElem x = r.qone();
  for (size_t i = 0; i < prescriptions.size(); ++i) {
    Elem pi = find_uniformizer(r, prescriptions[i].first);
    Elem u;
    if (prescriptions.size() == 1) {
      u = pi;
    } else {
      FracIdeal B = ideal_ring(r);
      bool first = true;
      for (size_t j = 0; j < prescriptions.size(); ++j) {
        if (j == i) continue;
        B = first ? powers[j] : ideal_mul(B, powers[j]);
        first = false;
      }
      auto [a, b] = split_one(r, powers[i], B);
      // u = pi*b + a: v_{p_i}(u) = 1 exactly, v_{p_j}(u) = 0 for j != i
      u = r.add(r.mul(pi, b), a);
    }
    x = r.qmul(x, qpow(r, r.q(u), prescriptions[i].second));
  }

  // correction pass: kill negative valuations at primes outside the
  // prescription (they can only come from negative prescribed exponents).
  // These live in the denominator ideal; strip the prescribed primes from it
  // and absorb what remains via an element that is 1 mod every prescribed
  // prime.  No factorization of the (large) numerator is needed.
  FracIdeal J = denominator_ideal(r, x);
  for (const auto& [P, n] : prescriptions) {
    long e = valuation_ideal(P, J);
    if (e > 0) J = ideal_colon(J, ideal_pow(r, P.ideal, e));
  }
  if (!ideal_eq(J, ideal_ring(r))) {
    FracIdeal Pprod = ideal_ring(r);
    for (const auto& [P, n] : prescriptions) Pprod = ideal_mul(Pprod, P.ideal);
    auto [jj, pp] = split_one(r, J, Pprod);
    // c = jj = 1 - pp lies in J and is 1 mod every prescribed prime
    x = r.qmul(x, r.q(jj));
  }

  // final exact re-verification of the prescription
  for (const auto& [P, n] : prescriptions)
    if (valuation(P, x) != n) fail(errc::internal, "approximate: prescription failed");
  FracIdeal den = denominator_ideal(r, x);
  for (const auto& [P, n] : prescriptions) {
    long e = valuation_ideal(P, den);
    if (e > 0) den = ideal_colon(den, ideal_pow(r, P.ideal, e));
  }
  if (!ideal_eq(den, ideal_ring(r))) fail(errc::internal, "approximate: stray denominator");
  return x;
}

FracIdeal denominator_ideal(const Ring& r, const QElem& x) {
  if (r.q_is_zero(x)) fail_invalid("denominator_ideal of zero");
  FracIdeal X = ideal_principal(r, x);
  return ideal_intersect(ideal_colon(ideal_ring(r), X), ideal_ring(r));
}

// ---------------- class group ----------------

namespace {

// elements of an integral quadratic ideal with a given norm
std::vector<Elem> elements_of_norm(const Ring& r, const FracIdeal& J, const mpz_class& N) {
  std::vector<Elem> out;
  mpz_class absdisc = abs(r.discriminant());
  mpz_class ylim_sq = 4 * N / absdisc + 1;
  mpz_class ylim;
  mpz_sqrt(ylim.get_mpz_t(), ylim_sq.get_mpz_t());
  mpz_class xlim;
  mpz_sqrt(xlim.get_mpz_t(), N.get_mpz_t());
  xlim += abs(r.theta_t()) * ylim / 2 + 2;
  for (mpz_class y = -ylim; y <= ylim; ++y)
    for (mpz_class x = -xlim; x <= xlim; ++x) {
      Elem e = r.quad(x, y);
      if (r.norm_z(e) != N) continue;
      if (!ideal_contains(J, r.q(e))) continue;
      out.push_back(e);
    }
  return out;
}

} // namespace

std::optional<QElem> principal_generator(const FracIdeal& I) {
  const Ring& r = I.ring;
  if (r.is_pid_class()) return I.gen;
  // scale to an integral ideal and search for an element of the right norm
  FracIdeal J;
  J.ring = r;
  J.lat = I.lat;
  J.den = 1;
  mpz_class N = ideal_index_in_ring(J).value;
  auto elems = elements_of_norm(r, J, N);
  if (elems.empty()) return std::nullopt;
  // deterministic pick: smallest (|y|, |x|, y, x)
  std::sort(elems.begin(), elems.end(), [&](const Elem& A, const Elem& B) {
    const auto& a = std::get<QuadInt>(A.v);
    const auto& b = std::get<QuadInt>(B.v);
    auto ka = std::make_tuple(abs(a.y), abs(a.x), a.y, a.x);
    auto kb = std::make_tuple(abs(b.y), abs(b.x), b.y, b.x);
    return ka < kb;
  });
  QElem g = r.qcanon(QElem{elems.front(), r.quad(I.den, 0)});
  return g;
}

QForm form_of_ideal(const FracIdeal& I) {
  const Ring& r = I.ring;
  if (r.kind() != RingKind::quadratic_order) fail_invalid("form_of_ideal: quadratic order only");
  require_dedekind(r, "form_of_ideal");
  // the form class only depends on the ideal class, so pass to the integral
  // scaling with basis alpha = a + b*theta, beta = c*theta
  Elem alpha = r.quad(I.lat.a, I.lat.b);
  Elem beta = r.quad(0, I.lat.c);
  mpz_class N = I.lat.det();
  mpz_class A = r.norm_z(alpha);
  mpz_class C = r.norm_z(beta);
  Elem prod = r.mul(alpha, r.conj(beta));
  const QuadInt& pq = std::get<QuadInt>(prod.v);
  mpz_class B = 2 * pq.x + r.theta_t() * pq.y; // trace
  if (A % N != 0 || B % N != 0 || C % N != 0)
    fail(errc::internal, "form_of_ideal: norm form not divisible by the ideal norm");
  QForm f{A / N, B / N, C / N};
  mpz_class g = zgcd(zgcd(abs(f.a), abs(f.b)), abs(f.c));
  if (g > 1) {
    f.a /= g;
    f.b /= g;
    f.c /= g;
  }
  if (f.disc() != r.discriminant()) fail(errc::internal, "form_of_ideal: wrong discriminant");
  return form_reduce(f);
}

ClassGroup class_group(const Ring& r, long enumeration_bound) {
  ClassGroup cg;
  switch (r.kind()) {
    case RingKind::integers:
    case RingKind::poly_q:
    case RingKind::poly_fp: {
      cg.representatives = {ideal_ring(r)};
      cg.inverse_class = {0};
      cg.table = {{0}};
      cg.methods_agree = true;
      cg.minkowski_bound = 1;
      return cg;
    }
    case RingKind::quadratic_order: break;
  }
  require_dedekind(r, "class_group");
  mpz_class absdisc = abs(r.discriminant());
  mpz_class mb;
  mpz_class scaled = 41 * absdisc / 100 + 1;
  mpz_sqrt(mb.get_mpz_t(), scaled.get_mpz_t());
  mb += 1; // now mb >= (2/pi) sqrt(|D|)
  cg.minkowski_bound = mb;
  if (enumeration_bound < mb)
    fail_invalid("class_group: enumeration bound " + std::to_string(enumeration_bound) +
                 " is below the reduction bound " + mb.get_str());

  // all integral ideals of norm <= mb, partitioned by principal equivalence
  std::vector<FracIdeal> pool = {ideal_ring(r)};
  for (auto& J : ideal_subideals(ideal_ring(r), mb.get_si())) pool.push_back(std::move(J));

  FracIdeal R = ideal_ring(r);
  auto equivalent = [&](const FracIdeal& A, const FracIdeal& B) {
    return principal_generator(ideal_mul(A, ideal_colon(R, B))).has_value();
  };

  std::vector<FracIdeal>& reps = cg.representatives;
  for (const auto& J : pool) {
    bool fresh = true;
    for (const auto& rep : reps)
      if (equivalent(J, rep)) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(J);
  }

  size_t n = reps.size();
  auto find_class = [&](const FracIdeal& J) -> size_t {
    for (size_t k = 0; k < n; ++k)
      if (equivalent(J, reps[k])) return k;
    fail(errc::internal, "class_group: class not represented");
  };

  cg.table.assign(n, std::vector<size_t>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) cg.table[i][j] = find_class(ideal_mul(reps[i], reps[j]));

  cg.invariants = abelian_invariants(n, 0, [&](size_t a, size_t b) { return cg.table[a][b]; });
  cg.inverse_class.assign(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (cg.table[i][j] == 0) cg.inverse_class[i] = j;

  // cross-validation against the reduced-forms route
  cg.forms = form_class_group(r.discriminant());
  cg.methods_agree = (cg.forms.h() == static_cast<long>(n)) &&
                     (cg.forms.invariants == cg.invariants);
  if (cg.methods_agree) {
    // the two routes must induce the same equivalence on prime representatives
    auto primes = primes_up_to(r, std::min<long>(enumeration_bound, 16));
    for (size_t i = 0; i < primes.size() && cg.methods_agree; ++i)
      for (size_t j = i; j < primes.size() && cg.methods_agree; ++j) {
        bool ideal_eqv = equivalent(primes[i].ideal, primes[j].ideal);
        bool form_eqv = form_of_ideal(primes[i].ideal) == form_of_ideal(primes[j].ideal);
        if (ideal_eqv != form_eqv) cg.methods_agree = false;
      }
  }
  return cg;
}

PrimeDichotomy classify_prime(const PrimeIdeal& P, int max_i) {
  const Ring& r = P.ring;
  PrimeDichotomy out;
  if (r.kind() == RingKind::poly_q) {
    out.fin = false;
    for (int i = 1; i <= max_i; ++i) out.indices.push_back(Index::inf());
    out.class_level = "R/p is an infinite-dimensional Q-vector space, so [R:p^(i)] is "
                      "infinite for every i";
    return out;
  }
  FracIdeal power = ideal_ring(r);
  for (int i = 1; i <= max_i; ++i) {
    power = ideal_div_closure(ideal_mul(power, P.ideal));
    out.indices.push_back(ideal_index_in_ring(power));
  }
  out.fin = true;
  for (const auto& idx : out.indices)
    if (idx.infinite) out.fin = false;
  switch (r.kind()) {
    case RingKind::integers:
      out.class_level = "Z/p^i is finite of order p^i for every i";
      break;
    case RingKind::poly_fp:
      out.class_level = "R/p^(i) is a finite F_p-vector space of dimension i*deg(p)";
      break;
    case RingKind::quadratic_order:
      out.class_level = "R/p^(i) is a finite abelian group of order N(p)^i";
      break;
    default: break;
  }
  return out;
}

StabilizerReport orbit_stabilizer(const FracIdeal& I, long sample_count) {
  const Ring& r = I.ring;
  StabilizerReport out;
  out.units = r.unit_group();
  out.all_units_fix = true;
  if (r.kind() == RingKind::poly_q) {
    // the unit group Q^* is infinite; sample constants
    for (long k = 2; k <= 12; ++k) {
      QElem c = r.qcanon(QElem{r.poly_from({mpq_class(k)}), r.one()});
      QElem cinv = r.qinv(c);
      if (!ideal_eq(ideal_scale(c, I), I) || !ideal_eq(ideal_scale(cinv, I), I))
        out.all_units_fix = false;
    }
  } else {
    for (const Elem& u : r.unit_list())
      if (!ideal_eq(ideal_scale(r.q(u), I), I)) out.all_units_fix = false;
  }
  long moved = 0;
  r.enumerate_qelements(
      [&](const QElem& a) {
        auto integral = r.q_integral(a);
        if (integral && r.is_unit(*integral)) return true; // skip units of R
        if (ideal_eq(ideal_scale(a, I), I))
          fail(errc::internal, "orbit_stabilizer: non-unit fixed the ideal");
        ++moved;
        return moved < sample_count;
      },
      64);
  out.nonunit_samples_moved = moved;
  return out;
}

KDecomposition ktheory_decomposition(const Ring& r, long bound) {
  KDecomposition out;
  ClassGroup cg = class_group(r, bound);
  out.stabilizer = r.unit_group();
  FracIdeal R = ideal_ring(r);
  auto make_summand = [&](size_t k) {
    KSummand s;
    s.class_label = "class " + std::to_string(k);
    s.rep = cg.representatives[k];
    s.inverse_rep = ideal_colon(R, s.rep);
    FracIdeal pairing = ideal_div_closure(ideal_mul(s.rep, s.inverse_rep));
    auto gen = principal_generator(pairing);
    s.pairing_principal = gen.has_value();
    if (gen) s.pairing_generator = *gen;
    return s;
  };
  for (size_t k = 0; k < cg.representatives.size(); ++k) {
    out.left.push_back(make_summand(k));
    KSummand rs = make_summand(cg.inverse_class[k]);
    rs.class_label = "class " + std::to_string(k) + " (inverse-class representative)";
    out.right.push_back(rs);
  }
  out.index_sets_coincide = out.left.size() == out.right.size();
  return out;
}

} // namespace idealis
