#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "krull.hpp"

using namespace idealis;

namespace {

const Ring Z = Ring::integers();
const Ring ZI = Ring::quadratic(-1, 1);
const Ring O5 = Ring::quadratic(-5, 1); // maximal order of Q(sqrt(-5))
const Ring QT = Ring::poly_over_q();
const Ring F2 = Ring::poly_over_fp(2);
const Ring F3 = Ring::poly_over_fp(3);

FracIdeal zideal(long n) { return ideal_principal(Z, Z.q(Z.from_int(n))); }

PrimeIdeal prime_of(const Ring& r, const std::vector<PrimeIdeal>& ps, const std::string& key) {
  for (const auto& P : ps)
    if (P.key() == key) return P;
  FAIL("prime not found: " << key);
  return ps.front();
}

DivisorVector random_divisor(const Ring& r, const std::vector<PrimeIdeal>& ps,
                             std::mt19937_64& rng, int max_terms, int max_exp,
                             bool allow_negative) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<size_t> which(0, ps.size() - 1);
  std::uniform_int_distribution<int> expd(allow_negative ? -max_exp : 1, max_exp);
  DivisorVector dv;
  std::set<std::string> used;
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    const PrimeIdeal& P = ps[which(rng)];
    if (!used.insert(P.key()).second) continue;
    int e = expd(rng);
    if (e == 0) e = 1;
    dv.terms.emplace_back(P, e);
  }
  std::sort(dv.terms.begin(), dv.terms.end(),
            [](const auto& a, const auto& b) { return a.first.key() < b.first.key(); });
  return dv;
}

} // namespace

TEST_CASE("reduced forms oracle") {
  auto f20 = reduced_forms(-20);
  REQUIRE(f20.size() == 2);
  CHECK(f20[0] == QForm{1, 0, 5});
  CHECK(f20[1] == QForm{2, 2, 3});
  CHECK(reduced_forms(-4).size() == 1);
  CHECK(reduced_forms(-8).size() == 1);
  CHECK(reduced_forms(-3).size() == 1);
  CHECK(reduced_forms(-23).size() == 3);

  // composition: identity and inverses
  for (long D : {-20L, -23L, -15L, -24L}) {
    auto fs = reduced_forms(D);
    QForm id = form_reduce(form_identity(D));
    for (const auto& f : fs) {
      CHECK(form_compose(f, id) == f);
      CHECK(form_compose(f, form_inverse(f)) == id);
    }
  }
  // the class group of disc -23 is cyclic of order 3
  auto g23 = form_class_group(-23);
  CHECK(g23.invariants == std::vector<long>{3});
}

TEST_CASE("primes_up_to examples") {
  auto zp = primes_up_to(Z, 10);
  REQUIRE(zp.size() == 4);
  CHECK(zp[0].p == 2);
  CHECK(zp[3].p == 7);

  // Z[i]: 2 ramified, 3 inert, 5 split (two primes), 7 inert
  auto ip = primes_up_to(ZI, 10);
  std::map<long, std::vector<PrimeIdeal::Kind>> seen;
  for (const auto& P : ip) seen[P.p.get_si()].push_back(P.kind);
  CHECK(seen[2].size() == 1);
  CHECK(seen[2][0] == PrimeIdeal::Kind::ramified);
  CHECK(seen[3].size() == 1);
  CHECK(seen[3][0] == PrimeIdeal::Kind::inert);
  CHECK(seen[5].size() == 2);
  CHECK(seen[5][0] == PrimeIdeal::Kind::split);
  CHECK(seen[7].size() == 1);
  CHECK(seen[7][0] == PrimeIdeal::Kind::inert);
  // oracle: root counts of x^2 + 1 mod p
  for (long p : {2L, 3L, 5L, 7L}) {
    int roots = 0;
    for (long x = 0; x < p; ++x)
      if ((x * x + 1) % p == 0) ++roots;
    CHECK(seen[p].size() == std::max(roots, 1));
  }
  for (const auto& P : ip) CHECK(prime_certify(P));

  // F2[t], degree 2: t, t+1, t^2+t+1
  auto fp = primes_up_to(F2, 2);
  REQUIRE(fp.size() == 3);
  CHECK(fp[0].key() == "t");
  CHECK(fp[1].key() == "t+1");
  CHECK(fp[2].key() == "t^2+t+1");
  for (const auto& P : fp) CHECK(prime_certify(P));

  // non-maximal orders rejected
  CHECK_THROWS_AS(primes_up_to(Ring::quadratic(-3, 2), 10), error);
}

TEST_CASE("valuation examples") {
  auto zp = primes_up_to(Z, 10);
  PrimeIdeal two = prime_of(Z, zp, "2");
  PrimeIdeal three = prime_of(Z, zp, "3");
  CHECK(valuation(two, Z.q(Z.from_int(12))) == 2);
  // v_3(9/2) = 2
  CHECK(valuation(three, Z.parse_qelem("9/2")) == 2);
  CHECK(valuation(two, Z.parse_qelem("9/2")) == -1);

  // v_{(1+i)}(2) = 2 in Z[i]; oracle: (2) = (1+i)^2 by lattice equality
  auto ip = primes_up_to(ZI, 3);
  PrimeIdeal p2 = prime_of(ZI, ip, "2,1");
  CHECK(valuation(p2, ZI.q(ZI.from_int(2))) == 2);
  FracIdeal sq = ideal_mul(p2.ideal, p2.ideal);
  CHECK(ideal_eq(sq, ideal_principal(ZI, ZI.q(ZI.from_int(2)))));

  CHECK_THROWS_AS(valuation(two, Z.qzero()), error);
}

TEST_CASE("factor_divisorial examples") {
  DivisorVector f12 = factor_divisorial(zideal(12));
  REQUIRE(f12.terms.size() == 2);
  CHECK(f12.exponent_of("2") == 2);
  CHECK(f12.exponent_of("3") == 1);

  // (2) in Z[i] factors as (1+i)^2; oracle: recomposition returns (2)
  FracIdeal two_zi = ideal_principal(ZI, ZI.q(ZI.from_int(2)));
  DivisorVector f2 = factor_divisorial(two_zi);
  REQUIRE(f2.terms.size() == 1);
  CHECK(f2.terms[0].second == 2);
  CHECK(ideal_eq(recompose(ZI, f2), two_zi));

  // R -> empty vector
  CHECK(factor_divisorial(ideal_ring(ZI)).terms.empty());
  CHECK(factor_divisorial(ideal_ring(Z)).terms.empty());

  // non-Dedekind rejected
  CHECK_THROWS_AS(factor_divisorial(ideal_ring(Ring::quadratic(-3, 2))), error);
}

TEST_CASE("factor/recompose round trip on random divisorial ideals") {
  std::mt19937_64 rng(11);
  for (const Ring& r : {Z, ZI, O5, F2, F3, QT}) {
    long bound = r.kind() == RingKind::poly_q ? 2 : (r.is_poly() ? 3 : 12);
    auto ps = primes_up_to(r, bound);
    REQUIRE(!ps.empty());
    for (int iter = 0; iter < 60; ++iter) {
      DivisorVector dv = random_divisor(r, ps, rng, 3, 3, true);
      FracIdeal I = recompose(r, dv);
      DivisorVector back = factor_divisorial(I);
      REQUIRE(back.terms.size() == dv.terms.size());
      for (size_t i = 0; i < dv.terms.size(); ++i) {
        CHECK(back.terms[i].first.key() == dv.terms[i].first.key());
        CHECK(back.terms[i].second == dv.terms[i].second);
      }
      CHECK(ideal_eq(recompose(r, back), I));
    }
  }
}

TEST_CASE("membership by valuations") {
  // (9/2, (1/2)Z) -> true
  FracIdeal halfZ = ideal_principal(Z, Z.parse_qelem("1/2"));
  CHECK(membership_by_valuations(Z.parse_qelem("9/2"), halfZ));
  // (3, 9Z) -> false
  CHECK(!membership_by_valuations(Z.q(Z.from_int(3)), zideal(9)));
  // (1+i, (2)) in Z[i] -> false, cross-checked with contains
  FracIdeal two_zi = ideal_principal(ZI, ZI.q(ZI.from_int(2)));
  QElem onei = ZI.q(ZI.quad(1, 1));
  CHECK(!membership_by_valuations(onei, two_zi));
  CHECK(!ideal_contains(two_zi, onei));
  // zero belongs to every ideal
  CHECK(membership_by_valuations(Z.qzero(), zideal(9)));

  // agreement with direct membership on random pairs
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<long> d(-40, 40);
  std::uniform_int_distribution<long> dd(1, 12);
  for (const Ring& r : {Z, ZI, O5, F2}) {
    auto ps = primes_up_to(r, r.is_poly() ? 3 : 12);
    for (int iter = 0; iter < 500; ++iter) {
      DivisorVector dv = random_divisor(r, ps, rng, 2, 2, true);
      FracIdeal I = recompose(r, dv);
      QElem x;
      switch (r.kind()) {
        case RingKind::integers: {
          long n = d(rng);
          x = Z.qcanon(QElem{Z.from_int(n), Z.from_int(dd(rng))});
          break;
        }
        case RingKind::quadratic_order:
          x = r.qcanon(QElem{r.quad(d(rng), d(rng)), r.quad(dd(rng), 0)});
          break;
        default: {
          std::vector<mpq_class> c(2);
          for (auto& q : c) q = d(rng);
          x = r.q(r.poly_from(c));
          break;
        }
      }
      CHECK(membership_by_valuations(x, I) == ideal_contains(I, x));
    }
  }
}

TEST_CASE("approximation lemma examples") {
  auto zp = primes_up_to(Z, 10);
  PrimeIdeal two = prime_of(Z, zp, "2");
  PrimeIdeal three = prime_of(Z, zp, "3");

  QElem x = approximate(Z, {{two, -1}, {three, 2}});
  CHECK(valuation(two, x) == -1);
  CHECK(valuation(three, x) == 2);
  // v >= 0 at every other prime of the support
  DivisorVector dv = factor_divisorial(ideal_principal(Z, x));
  for (const auto& [P, e] : dv.terms)
    if (P.key() != "2" && P.key() != "3") CHECK(e >= 0);
  CHECK(Z.qeq(x, Z.parse_qelem("9/2")));

  CHECK(Z.qeq(approximate(Z, {}), Z.qone()));

  auto ip = primes_up_to(ZI, 3);
  PrimeIdeal p2 = prime_of(ZI, ip, "2,1");
  QElem y = approximate(ZI, {{p2, 3}});
  CHECK(valuation(p2, y) == 3);
  DivisorVector dy = factor_divisorial(ideal_principal(ZI, y));
  for (const auto& [P, e] : dy.terms)
    if (P.key() != p2.key()) CHECK(e >= 0);

  CHECK_THROWS_AS(approximate(Z, {{two, 1}, {two, 2}}), error);
}

TEST_CASE("approximation lemma on random prescriptions") {
  std::mt19937_64 rng(33);
  for (const Ring& r : {Z, ZI, O5, F2, F3}) {
    auto ps = primes_up_to(r, r.is_poly() ? 3 : 12);
    for (int iter = 0; iter < 40; ++iter) {
      DivisorVector want = random_divisor(r, ps, rng, 4, 3, true);
      std::vector<std::pair<PrimeIdeal, long>> pres(want.terms.begin(), want.terms.end());
      QElem x = approximate(r, pres);
      for (const auto& [P, n] : pres) CHECK(valuation(P, x) == n);
      // no negative valuation outside the prescription: the denominator
      // ideal must be exhausted by the prescribed primes
      FracIdeal den = denominator_ideal(r, x);
      for (const auto& [P, n] : pres) {
        long e = valuation_ideal(P, den);
        for (long k = 0; k < e; ++k) den = ideal_colon(den, P.ideal);
      }
      CHECK(ideal_eq(den, ideal_ring(r)));
    }
  }
}

TEST_CASE("class group examples") {
  auto zc = class_group(Z, 24);
  CHECK(zc.order() == 1);
  CHECK(zc.invariants.empty());

  auto ic = class_group(ZI, 24);
  CHECK(ic.order() == 1);
  CHECK(ic.methods_agree);

  auto oc = class_group(O5, 24);
  CHECK(oc.order() == 2);
  CHECK(oc.invariants == std::vector<long>{2});
  CHECK(oc.methods_agree);
  CHECK(oc.forms.h() == 2);
  // representatives: R and a non-principal ideal of norm 2
  CHECK(ideal_eq(oc.representatives[0], ideal_ring(O5)));
  CHECK(ideal_index_in_ring(oc.representatives[1]).value == 2);
  CHECK(!principal_generator(oc.representatives[1]).has_value());

  // bound below the reduction bound is reported
  CHECK_THROWS_AS(class_group(O5, 1), error);

  // k[t]: trivial
  CHECK(class_group(F2, 8).order() == 1);
  CHECK(class_group(QT, 8).order() == 1);
}

TEST_CASE("class group two routes agree on more discriminants") {
  for (long d : {-1L, -2L, -3L, -5L, -7L, -11L, -13L, -15L, -23L}) {
    Ring r = Ring::quadratic(d, 1);
    long bound = 24;
    auto cg = class_group(r, bound);
    CHECK(cg.methods_agree);
    CHECK(cg.order() == cg.forms.h());
    CHECK(cg.invariants == cg.forms.invariants);
  }
}

TEST_CASE("classify_prime examples") {
  auto zp = primes_up_to(Z, 3);
  auto d = classify_prime(prime_of(Z, zp, "2"), 3);
  CHECK(d.fin);
  REQUIRE(d.indices.size() == 3);
  CHECK(d.indices[0].value == 2);
  CHECK(d.indices[1].value == 4);
  CHECK(d.indices[2].value == 8);

  auto qp = primes_up_to(QT, 1);
  auto dq = classify_prime(qp.front(), 3);
  CHECK(!dq.fin);
  CHECK(dq.indices[0].infinite);

  auto ip = primes_up_to(ZI, 3);
  auto di = classify_prime(prime_of(ZI, ip, "2,1"), 3);
  CHECK(di.fin);
  CHECK(di.indices[0].value == 2);
  CHECK(di.indices[1].value == 4);
  CHECK(di.indices[2].value == 8);
}

TEST_CASE("orbit stabilizer examples") {
  auto s = orbit_stabilizer(zideal(6), 100);
  CHECK(s.units.order == 2);
  CHECK(s.all_units_fix);
  CHECK(s.nonunit_samples_moved == 100);

  auto ip = primes_up_to(ZI, 3);
  PrimeIdeal p2 = prime_of(ZI, ip, "2,1");
  auto si = orbit_stabilizer(p2.ideal, 100);
  CHECK(si.units.order == 4);
  CHECK(si.all_units_fix);

  FracIdeal t = ideal_principal(QT, QT.q(QT.poly_from({0, 1})));
  auto sq = orbit_stabilizer(t, 50);
  CHECK(sq.units.tag == UnitGroupInfo::Tag::base_field_units);
  CHECK(sq.all_units_fix);
  CHECK(sq.nonunit_samples_moved == 50);
}

TEST_CASE("ktheory decomposition examples") {
  auto kz = ktheory_decomposition(Z, 24);
  REQUIRE(kz.left.size() == 1);
  CHECK(ideal_eq(kz.left[0].rep, ideal_ring(Z)));
  CHECK(kz.left[0].pairing_principal);
  CHECK(kz.stabilizer.order == 2);
  CHECK(kz.index_sets_coincide);

  auto ki = ktheory_decomposition(ZI, 24);
  REQUIRE(ki.left.size() == 1);
  CHECK(ki.stabilizer.order == 4);

  auto ko = ktheory_decomposition(O5, 24);
  REQUIRE(ko.left.size() == 2);
  REQUIRE(ko.right.size() == 2);
  for (const auto& s : ko.left) {
    CHECK(s.pairing_principal);
    FracIdeal prod = ideal_div_closure(ideal_mul(s.rep, s.inverse_rep));
    CHECK(ideal_eq(prod, ideal_ring(O5)));
  }
  // in the order-2 group every class is its own inverse, so left = right
  for (size_t k = 0; k < 2; ++k) CHECK(ideal_eq(ko.left[k].rep, ko.right[k].rep));
}

TEST_CASE("valuation arithmetic properties") {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<long> d(-50, 50);
  for (const Ring& r : {Z, ZI, O5}) {
    auto ps = primes_up_to(r, 8);
    for (int iter = 0; iter < 200; ++iter) {
      Elem a = r.kind() == RingKind::integers ? r.from_int(d(rng)) : r.quad(d(rng), d(rng));
      Elem b = r.kind() == RingKind::integers ? r.from_int(d(rng)) : r.quad(d(rng), d(rng));
      if (r.is_zero(a) || r.is_zero(b)) continue;
      const PrimeIdeal& P = ps[iter % ps.size()];
      long va = valuation(P, r.q(a));
      long vb = valuation(P, r.q(b));
      CHECK(valuation(P, r.q(r.mul(a, b))) == va + vb);
      Elem s = r.add(a, b);
      if (!r.is_zero(s)) CHECK(valuation(P, r.q(s)) >= std::min(va, vb));
    }
  }
}

TEST_CASE("Krull axioms on samples") {
  // (K2): finitely many nonzero valuations; (K1): x in R iff v >= 0 everywhere
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<long> d(-60, 60);
  std::uniform_int_distribution<long> dd(1, 30);
  for (int iter = 0; iter < 200; ++iter) {
    long n = d(rng);
    if (n == 0) continue;
    QElem x = Z.qcanon(QElem{Z.from_int(n), Z.from_int(dd(rng))});
    DivisorVector dv = factor_divisorial(ideal_principal(Z, x));
    CHECK(dv.terms.size() <= 12); // finite support
    bool all_nonneg = true;
    for (const auto& [P, e] : dv.terms)
      if (e < 0) all_nonneg = false;
    CHECK(all_nonneg == Z.q_integral(x).has_value());
  }
}
