#include <doctest.h>

#include <random>
#include <set>

#include "ideal.hpp"

using namespace idealis;

namespace {

const Ring Z = Ring::integers();
const Ring O3 = Ring::quadratic(-3, 2); // Z[i*sqrt(3)], theta = 1 + i*sqrt(3)
const Ring ZI = Ring::quadratic(-1, 1);
const Ring QT = Ring::poly_over_q();
const Ring F2 = Ring::poly_over_fp(2);

FracIdeal zideal(long n) { return ideal_principal(Z, Z.q(Z.from_int(n))); }

// M = <2, 1+i*sqrt(3)> = <2, theta>
FracIdeal ideal_M() {
  return ideal_from_generators(O3, {O3.q(O3.from_int(2)), O3.q(O3.quad(0, 1))});
}

FracIdeal random_integral_ideal(const Ring& r, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-9, 9);
  for (;;) {
    std::vector<QElem> gens;
    for (int i = 0; i < 2; ++i) {
      Elem e;
      switch (r.kind()) {
        case RingKind::integers: e = r.from_int(d(rng)); break;
        case RingKind::quadratic_order: e = r.quad(d(rng), d(rng)); break;
        default: {
          std::uniform_int_distribution<int> dd(0, 2);
          std::vector<mpq_class> c(dd(rng) + 1);
          for (auto& x : c) x = d(rng);
          e = r.poly_from(c);
          break;
        }
      }
      gens.push_back(r.q(e));
    }
    bool ok = false;
    for (auto& g : gens)
      if (!r.q_is_zero(g)) ok = true;
    if (ok) return ideal_from_generators(r, gens);
  }
}

} // namespace

TEST_CASE("ideal_from_generators examples") {
  // (Z, [4,6]) -> 2Z
  CHECK(ideal_eq(ideal_from_generators(Z, {Z.q(Z.from_int(4)), Z.q(Z.from_int(6))}), zideal(2)));

  // (Z[i sqrt 3], [2, 1+i sqrt 3]) -> lattice of index 2, derived by HNF of
  // the module spanned by the generators and their theta-multiples
  FracIdeal M = ideal_M();
  CHECK(ideal_index_in_ring(M).value == 2);
  // oracle: brute-force membership over a coordinate grid; M = {x + y*theta : x even}
  for (long x = -4; x <= 4; ++x)
    for (long y = -4; y <= 4; ++y) {
      bool in_M = ideal_contains(M, O3.q(O3.quad(x, y)));
      bool expected = (x % 2 == 0);
      CHECK(in_M == expected);
    }

  // (Q[t], [t^2, t^3]) -> (t^2)
  FracIdeal T2 = ideal_from_generators(QT, {QT.q(QT.poly_from({0, 0, 1})),
                                            QT.q(QT.poly_from({0, 0, 0, 1}))});
  CHECK(ideal_eq(T2, ideal_principal(QT, QT.q(QT.poly_from({0, 0, 1})))));

  CHECK_THROWS_AS(ideal_from_generators(Z, {Z.qzero()}), error);
}

TEST_CASE("ideal multiplication examples") {
  CHECK(ideal_eq(ideal_mul(zideal(2), zideal(3)), zideal(6)));

  // M*M = 2M, oracle: elementwise lattice comparison
  FracIdeal M = ideal_M();
  FracIdeal MM = ideal_mul(M, M);
  FracIdeal twoM = ideal_scale(O3.q(O3.from_int(2)), M);
  CHECK(ideal_eq(MM, twoM));
  CHECK(ideal_subset(MM, twoM));
  CHECK(ideal_subset(twoM, MM));

  // I * R = I
  FracIdeal R = ideal_ring(O3);
  CHECK(ideal_eq(ideal_mul(M, R), M));
  CHECK(ideal_eq(ideal_mul(zideal(5), ideal_ring(Z)), zideal(5)));
}

TEST_CASE("ideal intersection examples") {
  CHECK(ideal_eq(ideal_intersect(zideal(4), zideal(6)), zideal(12)));

  FracIdeal t = ideal_principal(QT, QT.q(QT.poly_from({0, 1})));
  FracIdeal t1 = ideal_principal(QT, QT.q(QT.poly_from({1, 1})));
  FracIdeal prod = ideal_principal(QT, QT.q(QT.poly_from({0, 1, 1})));
  CHECK(ideal_eq(ideal_intersect(t, t1), prod));

  // 2R cap (1+i sqrt 3)R = 2M in Z[i sqrt 3]
  FracIdeal M = ideal_M();
  Elem isqrt3 = O3.sub(O3.quad(0, 1), O3.one());
  FracIdeal a = ideal_principal(O3, O3.q(O3.from_int(2)));
  FracIdeal b = ideal_principal(O3, O3.q(O3.add(O3.one(), isqrt3)));
  FracIdeal inter = ideal_intersect(a, b);
  FracIdeal twoM = ideal_scale(O3.q(O3.from_int(2)), M);
  CHECK(ideal_eq(inter, twoM));
  // cross-check by sampling membership
  for (long x = -6; x <= 6; ++x)
    for (long y = -6; y <= 6; ++y) {
      QElem e = O3.q(O3.quad(x, y));
      CHECK(ideal_contains(inter, e) == (ideal_contains(a, e) && ideal_contains(b, e)));
    }
}

TEST_CASE("colon examples") {
  // (Z : 2Z) = (1/2)Z
  FracIdeal half = ideal_principal(Z, Z.qcanon(QElem{Z.one(), Z.from_int(2)}));
  CHECK(ideal_eq(ideal_colon(ideal_ring(Z), zideal(2)), half));

  // (R : R) = R
  CHECK(ideal_eq(ideal_colon(ideal_ring(O3), ideal_ring(O3)), ideal_ring(O3)));

  // (R : M) = (1/2)M
  FracIdeal M = ideal_M();
  FracIdeal colon = ideal_colon(ideal_ring(O3), M);
  FracIdeal halfM = ideal_scale(O3.qcanon(QElem{O3.one(), O3.quad(2, 0)}), M);
  CHECK(ideal_eq(colon, halfM));
  // verify x*M <= R for small x in the result
  ideal_enumerate_elements(colon, 1, [&](const QElem& x) {
    if (!O3.q_is_zero(x)) {
      FracIdeal xM = ideal_scale(x, M);
      CHECK(ideal_subset(xM, ideal_ring(O3)));
    }
    return true;
  });
}

TEST_CASE("divisorial closure examples") {
  // principal ideals are divisorial
  FracIdeal p = zideal(12);
  CHECK(ideal_eq(ideal_div_closure(p), p));
  FracIdeal pq = ideal_principal(O3, O3.q(O3.quad(3, 2)));
  CHECK(ideal_eq(ideal_div_closure(pq), pq));

  // every nonzero fractional ideal of Z[i sqrt 3] is divisorial; check M
  FracIdeal M = ideal_M();
  CHECK(ideal_eq(ideal_div_closure(M), M));
}

TEST_CASE("inverse_scale examples") {
  CHECK(ideal_eq(ideal_inverse_scale(Z.from_int(2), zideal(12)), zideal(6)));

  // (4, 6Z) -> 3Z, oracle: brute force over residues 0..11
  CHECK(ideal_eq(ideal_inverse_scale(Z.from_int(4), zideal(6)), zideal(3)));
  std::set<long> sol;
  for (long r = 0; r < 12; ++r)
    if ((4 * r) % 6 == 0) sol.insert(r);
  CHECK(sol == std::set<long>{0, 3, 6, 9}); // multiples of 3 mod 12

  // (1+i sqrt 3, 2R) -> M; oracle: elementwise check c*r in 2R over a grid
  Elem c = O3.quad(0, 1); // theta = 1 + i*sqrt(3)
  FracIdeal twoR = ideal_principal(O3, O3.q(O3.from_int(2)));
  FracIdeal res = ideal_inverse_scale(c, twoR);
  CHECK(ideal_eq(res, ideal_M()));
  for (long x = -5; x <= 5; ++x)
    for (long y = -5; y <= 5; ++y) {
      QElem e = O3.q(O3.quad(x, y));
      bool lhs = ideal_contains(res, e);
      bool rhs = ideal_contains(twoR, O3.qmul(O3.q(c), e));
      CHECK(lhs == rhs);
    }

  CHECK_THROWS_AS(ideal_inverse_scale(Z.zero(), zideal(6)), error);
}

TEST_CASE("contains and index examples") {
  CHECK(ideal_index(ideal_ring(Z), zideal(6)).value == 6);

  // [R : (1+i sqrt 3) R] = 4 (norm of 1 + i sqrt 3)
  Elem theta = O3.quad(0, 1);
  FracIdeal thetaR = ideal_principal(O3, O3.q(theta));
  CHECK(ideal_index_in_ring(thetaR).value == 4);
  CHECK(O3.norm_z(theta) == 4);

  // [Q[t] : (t)] infinite
  FracIdeal t = ideal_principal(QT, QT.q(QT.poly_from({0, 1})));
  CHECK(ideal_index(ideal_ring(QT), t).infinite);

  CHECK_THROWS_AS(ideal_index(zideal(6), zideal(5)), error);
  CHECK(ideal_contains(zideal(3), Z.q(Z.from_int(9))));
  CHECK(!ideal_contains(zideal(3), Z.q(Z.from_int(2))));
  CHECK(ideal_contains(zideal(3), Z.qzero()));
}

TEST_CASE("enumerate_constructible examples") {
  auto zres = enumerate_constructible(Z, 4);
  REQUIRE(zres.ideals.size() == 4);
  CHECK(ideal_eq(zres.ideals[0], ideal_ring(Z)));
  CHECK(ideal_eq(zres.ideals[1], zideal(2)));
  CHECK(ideal_eq(zres.ideals[2], zideal(3)));
  CHECK(ideal_eq(zres.ideals[3], zideal(4)));

  // Z[i sqrt 3] with bound 4 contains the non-principal M of index 2
  auto ores = enumerate_constructible(O3, 4);
  bool found = false;
  for (const auto& I : ores.ideals)
    if (ideal_eq(I, ideal_M())) found = true;
  CHECK(found);

  // F2[t] bound 4: ideals generated by polynomials of degree <= 2
  auto fres = enumerate_constructible(F2, 4);
  CHECK(fres.ideals.size() == 7);
  for (const auto& I : fres.ideals) {
    Index idx = ideal_index_in_ring(I);
    CHECK(!idx.infinite);
    CHECK(idx.value <= 4);
  }

  // Q[t]: only R itself has finite index
  auto qres = enumerate_constructible(QT, 50);
  CHECK(qres.ideals.size() == 1);
}

TEST_CASE("coset reps examples") {
  auto reps = ideal_coset_reps(ideal_ring(Z), zideal(3));
  REQUIRE(reps.size() == 3);

  FracIdeal M = ideal_M();
  FracIdeal twoM = ideal_scale(O3.q(O3.from_int(2)), M);
  auto mreps = ideal_coset_reps(M, twoM);
  REQUIRE(mreps.size() == 4);
  // pairwise incongruent and all inside M
  for (size_t i = 0; i < mreps.size(); ++i) {
    CHECK(ideal_contains(M, mreps[i]));
    for (size_t j = i + 1; j < mreps.size(); ++j) {
      QElem diff = O3.qsub(mreps[i], mreps[j]);
      CHECK(!ideal_contains(twoM, diff));
    }
  }

  auto self = ideal_coset_reps(M, M);
  REQUIRE(self.size() == 1);
  CHECK(O3.q_is_zero(self[0]));

  FracIdeal t = ideal_principal(QT, QT.q(QT.poly_from({0, 1})));
  CHECK_THROWS_AS(ideal_coset_reps(ideal_ring(QT), t), error);
}

TEST_CASE("mixed rings rejected") {
  CHECK_THROWS_AS(ideal_mul(zideal(2), ideal_ring(O3)), error);
  CHECK_THROWS_AS(ideal_intersect(zideal(2), ideal_ring(ZI)), error);
}

TEST_CASE("algebraic properties on random ideals") {
  std::mt19937_64 rng(4242);
  for (const Ring& r : {Z, O3, ZI, F2}) {
    FracIdeal R = ideal_ring(r);
    for (int iter = 0; iter < 60; ++iter) {
      FracIdeal A = random_integral_ideal(r, rng);
      FracIdeal B = random_integral_ideal(r, rng);
      FracIdeal C = random_integral_ideal(r, rng);
      CHECK(ideal_eq(ideal_mul(A, B), ideal_mul(B, A)));
      CHECK(ideal_eq(ideal_intersect(A, B), ideal_intersect(B, A)));
      CHECK(ideal_eq(ideal_mul(ideal_mul(A, B), C), ideal_mul(A, ideal_mul(B, C))));
      CHECK(ideal_eq(ideal_intersect(ideal_intersect(A, B), C),
                     ideal_intersect(A, ideal_intersect(B, C))));
      CHECK(ideal_eq(ideal_mul(A, R), A));

      // divisorial closure: extensive, idempotent, monotone
      FracIdeal Ac = ideal_div_closure(A);
      CHECK(ideal_subset(A, Ac));
      CHECK(ideal_eq(ideal_div_closure(Ac), Ac));
      if (ideal_subset(A, B)) CHECK(ideal_subset(Ac, ideal_div_closure(B)));
    }
  }
}

TEST_CASE("inverse_scale equals scaled intersection") {
  std::mt19937_64 rng(515);
  std::uniform_int_distribution<long> d(-8, 8);
  for (const Ring& r : {Z, O3, ZI, F2}) {
    for (int iter = 0; iter < 40; ++iter) {
      FracIdeal I = random_integral_ideal(r, rng);
      Elem c;
      do {
        c = r.kind() == RingKind::quadratic_order
                ? r.quad(d(rng), d(rng))
                : (r.is_poly() ? r.poly_from({mpq_class(d(rng)), mpq_class(d(rng))})
                               : r.from_int(d(rng)));
      } while (r.is_zero(c));
      FracIdeal lhs = ideal_inverse_scale(c, I);
      FracIdeal rhs = ideal_intersect(ideal_scale(r.qinv(r.q(c)), I), ideal_ring(r));
      CHECK(ideal_eq(lhs, rhs));
    }
  }
}

TEST_CASE("index is multiplicative in towers") {
  std::mt19937_64 rng(616);
  for (const Ring& r : {Z, O3, ZI, F2}) {
    for (int iter = 0; iter < 40; ++iter) {
      FracIdeal K = random_integral_ideal(r, rng);
      FracIdeal J = ideal_mul(K, random_integral_ideal(r, rng));
      FracIdeal I = ideal_mul(J, random_integral_ideal(r, rng));
      Index ki = ideal_index(K, I);
      Index kj = ideal_index(K, J);
      Index ji = ideal_index(J, I);
      if (!ki.infinite && !kj.infinite && !ji.infinite)
        CHECK(ki.value == kj.value * ji.value);
    }
  }
}

TEST_CASE("every enumerated constructible ideal is module-closed and divisorial") {
  for (const Ring& r : {Z, O3, ZI, F2}) {
    auto res = enumerate_constructible(r, 12);
    CHECK(res.rounds >= 1);
    for (const auto& I : res.ideals) {
      CHECK(ideal_is_integral(I));
      CHECK(ideal_eq(ideal_div_closure(I), I));
      if (r.kind() == RingKind::quadratic_order) {
        Elem theta = r.quad(0, 1);
        ideal_enumerate_elements(I, 1, [&](const QElem& e) {
          CHECK(ideal_contains(I, r.qmul(e, r.q(theta))));
          return true;
        });
      }
    }
  }
}

TEST_CASE("subideal enumeration") {
  FracIdeal M = ideal_M();
  auto subs = ideal_subideals(M, 4);
  for (const auto& J : subs) {
    CHECK(ideal_subset(J, M));
    Index idx = ideal_index(M, J);
    CHECK(idx.value >= 2);
    CHECK(idx.value <= 4);
  }
  // the three index-2 subideals of M known from the cover of M
  long count2 = 0;
  for (const auto& J : subs)
    if (ideal_index(M, J).value == 2) ++count2;
  CHECK(count2 == 3);
}

TEST_CASE("ideal JSON round trip") {
  std::mt19937_64 rng(717);
  for (const Ring& r : {Z, O3, ZI, QT, F2}) {
    for (int iter = 0; iter < 25; ++iter) {
      FracIdeal I = random_integral_ideal(r, rng);
      FracIdeal J = ideal_from_json(r, ideal_to_json(I));
      CHECK(ideal_eq(I, J));
    }
  }
  // explicit forms
  FracIdeal M = ideal_M();
  json j = ideal_to_json(M);
  CHECK(j["repr"] == "lattice");
  CHECK(j["den"] == 1);
  FracIdeal M2 =
      ideal_from_json(O3, json::parse(R"({"repr":"lattice","num":[[2,0],[0,1]],"den":1})"));
  CHECK(ideal_eq(M, M2));
  // non-ideal lattice rejected
  CHECK_THROWS_AS(
      ideal_from_json(O3, json::parse(R"({"repr":"lattice","num":[[3,0],[0,1]],"den":1})")),
      error);
}
