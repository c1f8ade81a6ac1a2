#include <doctest.h>

#include <random>

#include "indep.hpp"

using namespace idealis;

namespace {

const Ring Z = Ring::integers();
const Ring O3 = Ring::quadratic(-3, 2); // Z[i*sqrt(3)]
const Ring QT = Ring::poly_over_q();
const Ring F2 = Ring::poly_over_fp(2);

FracIdeal zideal(long n) { return ideal_principal(Z, Z.q(Z.from_int(n))); }

FracIdeal ideal_M() {
  return ideal_from_generators(O3, {O3.q(O3.from_int(2)), O3.q(O3.quad(0, 1))});
}

} // namespace

TEST_CASE("is_union_cover examples") {
  // Z is not 2Z union 3Z: 1 is in neither
  CHECK(!is_union_cover(ideal_ring(Z), {zideal(2), zideal(3)}));

  // I = union {I}
  FracIdeal M = ideal_M();
  CHECK(is_union_cover(M, {M}));
  CHECK(is_union_cover(zideal(6), {zideal(6)}));

  // M = 2R u (1+isqrt3)R u (1-isqrt3)R, derived via the coset oracle over M/2M
  Elem theta = O3.quad(0, 1);          // 1 + i sqrt 3
  Elem theta_bar = O3.quad(2, -1);     // 2 - theta = 1 - i sqrt 3
  FracIdeal twoR = ideal_principal(O3, O3.q(O3.from_int(2)));
  FracIdeal tR = ideal_principal(O3, O3.q(theta));
  FracIdeal tbR = ideal_principal(O3, O3.q(theta_bar));
  CHECK(is_union_cover(M, {twoR, tR, tbR}));
  // independent oracle: every coset of M/2M lies in one of the three parts
  FracIdeal twoM = ideal_scale(O3.q(O3.from_int(2)), M);
  for (const QElem& rep : ideal_coset_reps(M, twoM)) {
    bool hit = ideal_contains(twoR, rep) || ideal_contains(tR, rep) || ideal_contains(tbR, rep);
    CHECK(hit);
  }
  // no two of the three parts suffice
  CHECK(!is_union_cover(M, {twoR, tR}));
  CHECK(!is_union_cover(M, {twoR, tbR}));
  CHECK(!is_union_cover(M, {tR, tbR}));

  // part not inside I is rejected
  CHECK_THROWS_AS(is_union_cover(zideal(4), {zideal(6)}), error);
}

TEST_CASE("infinite-index parts are discarded") {
  FracIdeal R = ideal_ring(QT);
  FracIdeal t = ideal_principal(QT, QT.q(QT.poly_from({0, 1})));
  FracIdeal t1 = ideal_principal(QT, QT.q(QT.poly_from({1, 1})));
  CoverNote note;
  CHECK(!is_union_cover(R, {t, t1}, &note));
  CHECK(note.dropped_infinite_index.size() == 2);
}

TEST_CASE("independence_check on Z") {
  auto res = independence_check(Z, 12);
  CHECK(res.independent);
  CHECK(res.ideals_tested == 12);
  CHECK(!res.witness.has_value());
}

TEST_CASE("independence_check on F2[t]") {
  auto res = independence_check(F2, 16);
  CHECK(res.independent);
}

TEST_CASE("independence fails for Z[i sqrt 3] with an explicit witness") {
  auto res = independence_check(O3, 16);
  REQUIRE(!res.independent);
  REQUIRE(res.witness.has_value());
  const auto& w = *res.witness;

  // minimal witness: I = M of index 2, three parts of relative index 2
  CHECK(ideal_eq(w.I, ideal_M()));
  REQUIRE(w.parts.size() == 3);
  for (const auto& p : w.parts) {
    CHECK(ideal_subset(p, w.I));
    CHECK(!ideal_eq(p, w.I));
    CHECK(ideal_index(w.I, p).value == 2);
  }

  // certificate is exhaustive: every coset of I modulo the meet is assigned
  Index n = ideal_index(w.I, w.certificate.meet);
  CHECK(mpz_class(w.certificate.assignments.size()) == n.value);
  for (const auto& [rep, who] : w.certificate.assignments) {
    REQUIRE(who < w.parts.size());
    CHECK(ideal_contains(w.parts[who], O3.q(rep)));
  }

  // independent brute-force re-verification on 10^4 random elements of I
  CHECK(verify_witness_by_sampling(w, 10000, 20260810));

  // witness JSON has the advertised shape
  json j = witness_to_json(w);
  CHECK(j.contains("I"));
  CHECK(j["parts"].size() == 3);
  CHECK(j["certificate"]["cosets"].size() == w.certificate.assignments.size());
}

TEST_CASE("maximal order of Q(sqrt(-3)) stays independent at the same bound") {
  auto res = independence_check(Ring::quadratic(-3, 1), 16);
  CHECK(res.independent);
}

TEST_CASE("cover test is monotone in the parts") {
  std::mt19937_64 rng(808);
  FracIdeal M = ideal_M();
  auto subs = ideal_subideals(M, 8);
  std::uniform_int_distribution<size_t> pick(0, subs.size() - 1);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<FracIdeal> parts;
    int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) parts.push_back(subs[pick(rng)]);
    bool before = is_union_cover(M, parts);
    parts.push_back(subs[pick(rng)]);
    bool after = is_union_cover(M, parts);
    if (before) CHECK(after);
  }
}

TEST_CASE("lift of the trivial witness") {
  FracIdeal I = zideal(6);
  IndependenceWitness w;
  w.I = I;
  w.parts = {I};
  w.certificate.meet = I;
  w.certificate.assignments = {{Z.zero(), 0}};
  auto cover = lift_to_semigroup_cover(w);
  REQUIRE(cover.cosets.size() == 1);
  CHECK(Z.is_zero(cover.cosets[0].residue));
  CHECK(ideal_eq(cover.cosets[0].ideal, I));
  CHECK(cover.verified);
}

TEST_CASE("lift of the Z[i sqrt 3] witness") {
  auto res = independence_check(O3, 16);
  REQUIRE(res.witness.has_value());
  auto cover = lift_to_semigroup_cover(*res.witness);
  // cover size = sum of [I : I_i] = 2 + 2 + 2
  mpz_class expected = 0;
  for (const auto& p : res.witness->parts) expected += ideal_index(res.witness->I, p).value;
  CHECK(mpz_class(cover.cosets.size()) == expected);
  CHECK(cover.cosets.size() == 6);
  CHECK(cover.verified);
  CHECK(cover.pairs_checked > 0);
}

TEST_CASE("uncertified witness is rejected by lift") {
  FracIdeal M = ideal_M();
  FracIdeal twoR = ideal_principal(O3, O3.q(O3.from_int(2)));
  IndependenceWitness bad;
  bad.I = M;
  bad.parts = {twoR}; // not a cover
  CHECK_THROWS_AS(lift_to_semigroup_cover(bad), error);
}

TEST_CASE("Q[t]: proper constructible containments have infinite index") {
  std::vector<FracIdeal> ideals;
  for (long a = -2; a <= 2; ++a) {
    ideals.push_back(ideal_principal(QT, QT.q(QT.poly_from({mpq_class(a), 1}))));
    ideals.push_back(
        ideal_principal(QT, QT.q(QT.poly_from({mpq_class(a), mpq_class(0), 1}))));
  }
  for (const auto& I : ideals)
    for (const auto& J : ideals) {
      if (ideal_eq(I, J)) continue;
      if (ideal_subset(I, J)) CHECK(ideal_index(J, I).infinite);
    }
}
