#include "forms.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace idealis {

namespace {

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

void check_form(const QForm& f) {
  if (f.a <= 0 || f.disc() >= 0) fail_invalid("form must be positive definite");
  if (!form_is_primitive(f)) fail_invalid("form must be primitive");
}

QForm normalize(QForm f) {
  // bring b into (-a, a]
  mpz_class two_a = 2 * f.a;
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), f.b.get_mpz_t(), two_a.get_mpz_t()); // r in [0, 2a)
  if (r > f.a) r -= two_a;
  mpz_class D = f.disc();
  f.b = r;
  f.c = (f.b * f.b - D) / (4 * f.a);
  return f;
}

// generalized CRT: x = r1 (mod m1), x = r2 (mod m2); moduli need not be coprime
mpz_class crt(const mpz_class& r1, const mpz_class& m1, const mpz_class& r2,
              const mpz_class& m2) {
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
  mpz_class diff = r2 - r1;
  if (diff % g != 0) fail(errc::internal, "crt: incompatible congruences");
  mpz_class lcm = m1 / g * m2;
  mpz_class x = r1 + m1 * ((diff / g * s) % (m2 / g));
  mpz_class out;
  mpz_fdiv_r(out.get_mpz_t(), x.get_mpz_t(), lcm.get_mpz_t());
  return out;
}

} // namespace

bool form_is_primitive(const QForm& f) {
  return zgcd(zgcd(abs(f.a), abs(f.b)), abs(f.c)) == 1;
}

QForm form_reduce(QForm f) {
  check_form(f);
  f = normalize(f);
  while (f.a > f.c || (f.a == f.c && f.b < 0)) {
    // rho step: (a, b, c) -> (c, -b, a), then normalize
    QForm g{f.c, -f.b, f.a};
    f = normalize(g);
  }
  return f;
}

QForm form_identity(const mpz_class& D) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), D.get_mpz_t(), 4);
  if (r == 0) return QForm{1, 0, -D / 4};
  if (r == 1) return QForm{1, 1, (1 - D) / 4};
  fail_invalid("discriminant must be 0 or 1 mod 4");
}

QForm form_inverse(const QForm& f) { return form_reduce(QForm{f.a, -f.b, f.c}); }

QForm form_compose(const QForm& f0, const QForm& g0) {
  check_form(f0);
  check_form(g0);
  if (f0.disc() != g0.disc()) fail_invalid("composition needs equal discriminants");
  mpz_class D = f0.disc();
  QForm f = f0, g = g0;

  // replace g by an equivalent form whose first coefficient is coprime to a1
  if (zgcd(f.a, g.a) != 1) {
    bool found = false;
    for (long box = 1; box <= 64 && !found; box *= 2) {
      for (long x = -box; x <= box && !found; ++x)
        for (long y = -box; y <= box && !found; ++y) {
          if (zgcd(mpz_class(x), mpz_class(y)) != 1) continue;
          mpz_class val = g.a * x * x + g.b * x * y + g.c * y * y;
          if (val <= 0 || zgcd(val, f.a) != 1) continue;
          // complete (x, y) to a unimodular matrix [[x, beta], [y, delta]]
          mpz_class d0, delta, beta;
          mpz_gcdext(d0.get_mpz_t(), delta.get_mpz_t(), beta.get_mpz_t(),
                     mpz_class(x).get_mpz_t(), mpz_class(y).get_mpz_t());
          beta = -beta; // x*delta - y*beta = 1
          mpz_class a2 = val;
          mpz_class b2 = 2 * (g.a * x * beta + g.c * y * delta) +
                         g.b * (x * delta + y * beta);
          mpz_class c2 = g.a * beta * beta + g.b * beta * delta + g.c * delta * delta;
          g = QForm{a2, b2, c2};
          found = true;
        }
    }
    if (!found) fail_exhausted("form composition: no coprime representative found");
  }

  // Dirichlet composition for gcd(a1, a2) = 1: B = b1 (mod 2a1), B = b2 (mod 2a2)
  mpz_class B = crt(f.b, 2 * f.a, g.b, 2 * g.a);
  mpz_class A = f.a * g.a;
  mpz_class C = (B * B - D) / (4 * A);
  return form_reduce(QForm{A, B, C});
}

QForm form_pow(const QForm& f, const mpz_class& e0) {
  mpz_class e = e0;
  QForm base = form_reduce(f);
  QForm acc = form_identity(f.disc());
  if (e < 0) {
    base = form_inverse(base);
    e = -e;
  }
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = form_compose(acc, base);
    base = form_compose(base, base);
    e /= 2;
  }
  return acc;
}

std::vector<QForm> reduced_forms(const mpz_class& D) {
  if (D >= 0) fail_invalid("reduced_forms: discriminant must be negative");
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), D.get_mpz_t(), 4);
  if (r != 0 && r != 1) fail_invalid("discriminant must be 0 or 1 mod 4");
  std::vector<QForm> out;
  mpz_class alim;
  mpz_class bound = -D / 3;
  mpz_sqrt(alim.get_mpz_t(), bound.get_mpz_t());
  for (mpz_class a = 1; a <= alim; ++a) {
    for (mpz_class b = -a + 1; b <= a; ++b) {
      mpz_class num = b * b - D;
      if (num % (4 * a) != 0) continue;
      mpz_class c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      QForm f{a, b, c};
      if (!form_is_primitive(f)) continue;
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<long> abelian_invariants(size_t n, size_t id,
                                     const std::function<size_t(size_t, size_t)>& mul) {
  if (n == 0) fail_invalid("abelian_invariants: empty group");
  if (n == 1) return {};
  // element orders
  std::vector<long> order(n, 0);
  for (size_t g = 0; g < n; ++g) {
    size_t x = g;
    long k = 1;
    while (x != id) {
      x = mul(x, g);
      ++k;
      if (k > static_cast<long>(n)) fail(errc::internal, "order exceeds group size");
    }
    order[g] = k;
  }
  // primes dividing the exponent
  long expn = 1;
  for (long o : order) expn = std::lcm(expn, o);
  std::vector<long> primes;
  long e = expn;
  for (long p = 2; p * p <= e; ++p)
    if (e % p == 0) {
      primes.push_back(p);
      while (e % p == 0) e /= p;
    }
  if (e > 1) primes.push_back(e);

  // per-prime partition lambda: #parts >= k equals log_p of the ratio of
  // solution counts of x^(p^k) = id
  std::map<long, std::vector<long>> partitions;
  for (long p : primes) {
    std::vector<long> counts; // counts[k] = #solutions of x^(p^k) = e
    counts.push_back(1);
    for (long k = 1;; ++k) {
      long pk = 1;
      for (long i = 0; i < k; ++i) pk *= p;
      long cnt = 0;
      for (size_t g = 0; g < n; ++g)
        if (pk % order[g] == 0) ++cnt;
      counts.push_back(cnt);
      if (cnt == counts[k - 1]) break; // stabilized
    }
    std::vector<long> parts; // multiplicities of parts >= k
    for (size_t k = 1; k < counts.size(); ++k) {
      long ratio = counts[k] / counts[k - 1];
      long logp = 0;
      while (ratio > 1) {
        ratio /= p;
        ++logp;
      }
      if (logp == 0) break;
      parts.push_back(logp); // number of parts with size >= k
    }
    // convert "number of parts >= k" profile to the partition itself
    std::vector<long> lambda;
    for (size_t k = 0; k < parts.size(); ++k) {
      long next = (k + 1 < parts.size()) ? parts[k + 1] : 0;
      long here = parts[k] - next;
      for (long i = 0; i < here; ++i) lambda.push_back(static_cast<long>(k + 1));
    }
    std::sort(lambda.rbegin(), lambda.rend());
    partitions[p] = lambda;
  }

  // merge partitions into invariant factors d_1 | d_2 | ...
  size_t maxlen = 0;
  for (auto& [p, lam] : partitions) maxlen = std::max(maxlen, lam.size());
  std::vector<long> inv(maxlen, 1);
  for (auto& [p, lam] : partitions)
    for (size_t i = 0; i < lam.size(); ++i) {
      long pk = 1;
      for (long k = 0; k < lam[i]; ++k) pk *= p;
      inv[maxlen - 1 - i] *= pk; // biggest parts go to the last invariant
    }
  // drop trivial factors and sanity-check the total order
  std::vector<long> out;
  long prod = 1;
  for (long d : inv)
    if (d > 1) {
      out.push_back(d);
      prod *= d;
    }
  if (prod != static_cast<long>(n)) fail(errc::internal, "invariant factors do not multiply up");
  return out;
}

FormClassGroup form_class_group(const mpz_class& D) {
  FormClassGroup g;
  g.discriminant = D;
  g.forms = reduced_forms(D);
  std::map<QForm, size_t> pos;
  for (size_t i = 0; i < g.forms.size(); ++i) pos[g.forms[i]] = i;
  QForm id = form_reduce(form_identity(D));
  auto it = pos.find(id);
  if (it == pos.end()) fail(errc::internal, "identity form missing from reduced list");
  g.invariants = abelian_invariants(g.forms.size(), it->second, [&](size_t x, size_t y) {
    QForm h = form_compose(g.forms[x], g.forms[y]);
    auto jt = pos.find(h);
    if (jt == pos.end()) fail(errc::internal, "composition left the reduced list");
    return jt->second;
  });
  return g;
}

} // namespace idealis
