#include "spectrum.hpp"

#include <algorithm>
#include <set>

namespace idealis {

long LevelFn::at(const std::string& key) const {
  for (const auto& [P, e] : terms)
    if (P.key() == key) return e;
  return 0;
}

LevelFn level_make(std::vector<std::pair<PrimeIdeal, long>> terms) {
  LevelFn m;
  std::set<std::string> seen;
  for (auto& [P, e] : terms) {
    if (e < 0) fail_invalid("level function values must be >= 0");
    if (!seen.insert(P.key()).second) fail_invalid("duplicate prime in level function");
    if (e > 0) m.terms.emplace_back(P, e);
  }
  std::sort(m.terms.begin(), m.terms.end(),
            [](const auto& a, const auto& b) { return a.first.key() < b.first.key(); });
  return m;
}

bool level_leq(const LevelFn& m, const LevelFn& n) {
  for (const auto& [P, e] : m.terms)
    if (e > n.at(P.key())) return false;
  return true;
}

bool level_eq(const LevelFn& m, const LevelFn& n) { return level_leq(m, n) && level_leq(n, m); }

LevelFn level_plus_divisor(const LevelFn& m, const DivisorVector& dv) {
  std::vector<std::pair<PrimeIdeal, long>> terms = m.terms;
  for (const auto& [P, e] : dv.terms) {
    if (e < 0) fail_invalid("level shift needs a nonnegative divisor");
    bool found = false;
    for (auto& [Q, f] : terms)
      if (Q.key() == P.key()) {
        f += e;
        found = true;
      }
    if (!found) terms.emplace_back(P, e);
  }
  return level_make(std::move(terms));
}

json level_to_json(const LevelFn& m) {
  json j = json::object();
  for (const auto& [P, e] : m.terms) j[P.key()] = e;
  return j;
}

LevelFn level_from_json(const Ring& r, const json& j) {
  if (!j.is_object()) fail_invalid("level function JSON must be an object");
  std::vector<std::pair<PrimeIdeal, long>> terms;
  for (auto it = j.begin(); it != j.end(); ++it)
    terms.emplace_back(prime_from_key(r, it.key()), it.value().get<long>());
  return level_make(std::move(terms));
}

json character_to_json(const CharacterAtLevel& chi) {
  const Ring& r = chi.ideal.ring;
  json j;
  j["component"] = r.to_string(chi.component);
  j["level"] = level_to_json(chi.level);
  j["ideal"] = ideal_to_json(chi.ideal);
  j["residue"] = r.to_string(chi.residue);
  return j;
}

CharacterAtLevel character_from_json(const Ring& r, const json& j) {
  CharacterAtLevel chi;
  chi.level = level_from_json(r, j.at("level"));
  chi.ideal = ideal_from_json(r, j.at("ideal"));
  chi.ideal_factors = factor_divisorial(chi.ideal);
  for (const auto& [P, e] : chi.ideal_factors.terms)
    if (e < 0 || e > chi.level.at(P.key()))
      fail_invalid("character ideal does not lie in I_m for the given level");
  chi.residue = ideal_reduce_mod(chi.ideal, r.parse_elem(j.at("residue").get<std::string>()));
  chi.component = j.contains("component") ? r.parse_elem(j.at("component").get<std::string>())
                                          : r.one();
  if (r.is_zero(chi.component)) fail_invalid("component tag must be nonzero");
  return chi;
}

std::vector<FracIdeal> ideals_at_level(const Ring& r, const LevelFn& m) {
  if (!r.predicates().is_dedekind)
    fail_unsupported("ideals_at_level: Dedekind ring required");
  std::vector<FracIdeal> out;
  size_t k = m.terms.size();
  std::vector<long> exps(k, 0);
  while (true) {
    DivisorVector dv;
    for (size_t i = 0; i < k; ++i)
      if (exps[i] > 0) dv.terms.emplace_back(m.terms[i].first, exps[i]);
    out.push_back(recompose(r, dv));
    size_t pos = 0;
    while (pos < k && ++exps[pos] > m.terms[pos].second) {
      exps[pos] = 0;
      ++pos;
    }
    if (pos >= k) break;
  }
  std::sort(out.begin(), out.end(), [](const FracIdeal& A, const FracIdeal& B) {
    Index ia = ideal_index_in_ring(A), ib = ideal_index_in_ring(B);
    if (!(ia == ib)) return ia.value < ib.value;
    return ideal_key(A) < ideal_key(B);
  });
  return out;
}

std::vector<CharacterAtLevel> spec_level(const Ring& r, const LevelFn& m) {
  for (const auto& [P, e] : m.terms)
    if (P.norm().infinite)
      fail_invalid("spec_level: window contains an inf-type prime (infinite quotient)");
  std::vector<CharacterAtLevel> out;
  for (const FracIdeal& I : ideals_at_level(r, m)) {
    DivisorVector dv = factor_divisorial(I);
    for (const QElem& rep : ideal_coset_reps(ideal_ring(r), I)) {
      CharacterAtLevel chi;
      chi.level = m;
      chi.ideal = I;
      chi.ideal_factors = dv;
      chi.residue = *r.q_integral(rep);
      chi.component = r.one();
      out.push_back(std::move(chi));
    }
  }
  return out;
}

CharacterAtLevel project(const Ring& r, const CharacterAtLevel& chi, const LevelFn& m) {
  if (!level_leq(m, chi.level)) fail_invalid("project: target level is not <= current level");
  DivisorVector dv;
  for (const auto& [P, e] : chi.ideal_factors.terms) {
    long cut = std::min(e, m.at(P.key()));
    if (cut > 0) dv.terms.emplace_back(P, cut);
  }
  CharacterAtLevel out;
  out.level = m;
  out.ideal = recompose(r, dv);
  out.ideal_factors = dv;
  out.residue = ideal_reduce_mod(out.ideal, chi.residue);
  out.component = chi.component;
  return out;
}

CharacterAtLevel act(const Ring& r, const CharacterAtLevel& chi, const Elem& x, const Elem& w,
                     const Elem& c) {
  if (r.is_zero(c)) fail_invalid("act: c must be nonzero");
  if (r.is_zero(w)) fail_invalid("act: w must be nonzero");
  DivisorVector vc = factor_divisorial(ideal_principal(r, r.q(c)));
  CharacterAtLevel out;
  out.level = level_plus_divisor(chi.level, vc);
  out.ideal = ideal_scale(r.q(c), chi.ideal);
  out.ideal_factors = factor_divisorial(out.ideal);
  // residue -a*x + c*r, reduced modulo c*I
  Elem res = r.add(r.neg(r.mul(chi.component, x)), r.mul(c, chi.residue));
  out.residue = ideal_reduce_mod(out.ideal, res);
  out.component = r.mul(chi.component, w);
  return out;
}

bool closure_membership(const SubsetWindow& win, const std::vector<bool>& S) {
  size_t n = win.primes.size();
  if (n > 24) fail_invalid("closure_membership: window too large");
  if (S.size() != n) fail_invalid("closure_membership: subset outside window");
  for (const auto& T : win.family)
    if (T.size() != n) fail_invalid("closure_membership: family member outside window");
  auto mask = [n](const std::vector<bool>& v) {
    unsigned long m = 0;
    for (size_t i = 0; i < n; ++i)
      if (v[i]) m |= 1ul << i;
    return m;
  };
  unsigned long s = mask(S);
  std::vector<unsigned long> fam;
  for (const auto& T : win.family) fam.push_back(mask(T));
  // every basic open U_F = {X : F cap X = empty} containing S must meet the family
  for (unsigned long F = 0; F < (1ul << n); ++F) {
    if (F & s) continue; // S not in U_F
    bool meets = false;
    for (unsigned long T : fam)
      if ((F & T) == 0) {
        meets = true;
        break;
      }
    if (!meets) return false;
  }
  return true;
}

std::vector<std::pair<QElem, QElem>> enumerate_group_elements(const Ring& r, long N) {
  // b-candidates: 0 and then the canonical nonzero enumeration; a-candidates:
  // the canonical nonzero enumeration; pairs ordered by (max position, b, a)
  std::vector<QElem> nonzero;
  r.enumerate_qelements(
      [&](const QElem& v) {
        nonzero.push_back(v);
        return nonzero.size() < static_cast<size_t>(4 * N + 16);
      },
      64);
  std::vector<QElem> bs = {r.qzero()};
  bs.insert(bs.end(), nonzero.begin(), nonzero.end());
  std::vector<std::pair<QElem, QElem>> out;
  for (size_t shell = 0; out.size() < static_cast<size_t>(N) && shell < bs.size(); ++shell) {
    for (size_t ib = 0; ib <= shell && out.size() < static_cast<size_t>(N); ++ib) {
      for (size_t ia = 0; ia <= shell && out.size() < static_cast<size_t>(N); ++ia) {
        if (std::max(ib, ia) != shell) continue;
        if (ia >= nonzero.size() || ib >= bs.size()) continue;
        const QElem& b = bs[ib];
        const QElem& a = nonzero[ia];
        if (r.q_is_zero(b) && r.qeq(a, r.qone())) continue; // identity
        out.emplace_back(b, a);
      }
    }
  }
  if (out.size() < static_cast<size_t>(N))
    fail_exhausted("group element enumeration ran out of candidates");
  return out;
}

namespace {

long valuation_q(const PrimeIdeal& P, const QElem& x) {
  const Ring& r = P.ring;
  if (r.q_is_zero(x)) fail_invalid("valuation of zero");
  return valuation(P, x);
}

} // namespace

ChainResult trivial_stabilizer_chain(const Ring& r, long N,
                                     const std::vector<PrimeIdeal>& window,
                                     const std::vector<size_t>& S, long depth,
                                     const std::vector<std::pair<QElem, QElem>>* group) {
  if (!r.predicates().is_dedekind)
    fail_unsupported("trivial_stabilizer_chain: Dedekind ring required");
  if (r.kind() == RingKind::poly_q)
    fail_unsupported("trivial_stabilizer_chain: P_fin is empty over Q[t]");
  for (size_t s : S)
    if (s >= window.size()) fail_invalid("window too small for S");

  std::vector<std::pair<QElem, QElem>> elems;
  if (group) {
    elems = *group;
    for (const auto& [b, a] : elems) {
      if (r.q_is_zero(a)) fail_invalid("group element with a = 0");
      if (r.q_is_zero(b) && r.qeq(a, r.qone()))
        fail_invalid("enumeration contains the identity");
    }
    if (static_cast<long>(elems.size()) < N)
      fail_invalid("fewer group elements than requested steps");
  } else {
    elems = enumerate_group_elements(r, N);
  }

  // q_1, q_2, ...: the S primes; p_1, p_2, ...: enumeration of P_fin
  std::vector<PrimeIdeal> qs;
  for (size_t s : S) qs.push_back(window[s]);
  std::set<std::string> s_keys;
  for (const auto& q : qs) s_keys.insert(q.key());
  std::set<std::string> window_keys;
  for (const auto& p : window) window_keys.insert(p.key());

  std::vector<PrimeIdeal> fin;
  for (long bound = 8; static_cast<long>(fin.size()) < N; bound *= 2) {
    fin = primes_up_to(r, bound);
    if (bound > 100000) fail_exhausted("P_fin enumeration exhausted");
  }

  ChainResult out;
  out.fin_enumeration.assign(fin.begin(), fin.begin() + N);

  Elem r_prev = r.zero();
  FracIdeal I_prev = ideal_ring(r);
  FracIdeal R = ideal_ring(r);

  for (long i = 1; i <= N; ++i) {
    const auto& [b, a] = elems[i - 1];
    const PrimeIdeal& pi = fin[i - 1];
    bool a_is_one = r.qeq(a, r.qone());

    DivisorVector prev_dv = factor_divisorial(I_prev);
    // exponent targets: freeze everything, then raise the q's and p_i
    std::map<std::string, std::pair<PrimeIdeal, long>> target;
    for (const auto& [P, e] : prev_dv.terms) target[P.key()] = {P, e};
    long qcount = std::min<long>(i, static_cast<long>(qs.size()));
    for (long k = 0; k < qcount; ++k) {
      auto& slot = target[qs[k].key()];
      if (slot.second == 0) slot.first = qs[k];
      slot.second = std::max(slot.second, i);
    }
    long pi_floor;
    if (a_is_one) {
      if (r.q_is_zero(b)) fail_invalid("group element (0, 1) has no separating coset");
      pi_floor = valuation_q(pi, b) + 1;
    } else {
      QElem am1 = r.qsub(a, r.qone());
      pi_floor = valuation_q(pi, am1) + std::abs(valuation_q(pi, a)) +
                 valuation_ideal(pi, I_prev) + 1;
    }
    {
      auto& slot = target[pi.key()];
      if (slot.second == 0) slot.first = pi;
      slot.second = std::max({slot.second, pi_floor, 0L});
    }
    DivisorVector jdv;
    for (auto& [k, pe] : target)
      if (pe.second != 0) jdv.terms.push_back(pe);
    FracIdeal J = recompose(r, jdv);

    // choose s with (s + J) disjoint from (b + a s + a J) inside r_prev + I_prev
    Elem s_elem = r_prev;
    if (a_is_one) {
      if (ideal_contains(J, b)) fail(errc::internal, "chain: b lies in J despite valuations");
    } else {
      QElem am1 = r.qsub(a, r.qone());
      FracIdeal E = ideal_scale(r.qinv(am1), ideal_add(J, ideal_scale(a, J)));
      QElem excl_center = r.qneg(r.qdiv(b, am1));
      QElem delta = r.qsub(r.q(r_prev), excl_center);
      if (ideal_contains(E, delta)) {
        // shift by z in I_prev with v_{p_i}(z) = v_{p_i}(I_prev); then
        // s - center has valuation v_{p_i}(I_prev) < v of everything in E
        std::vector<std::pair<PrimeIdeal, long>> pres;
        bool has_pi = false;
        for (const auto& [P, e] : prev_dv.terms) {
          pres.emplace_back(P, e);
          if (P.key() == pi.key()) has_pi = true;
        }
        if (!has_pi) pres.emplace_back(pi, valuation_ideal(pi, I_prev));
        QElem z = approximate(r, pres);
        auto zi = r.q_integral(z);
        if (!zi || !ideal_contains(I_prev, z))
          fail(errc::internal, "chain: approximation element not in I");
        s_elem = r.add(r_prev, *zi);
        QElem delta2 = r.qsub(r.q(s_elem), excl_center);
        if (ideal_contains(E, delta2))
          fail(errc::internal, "chain: excluded coset not avoided");
      }
    }

    ChainStep step;
    step.b = b;
    step.a = a;
    // canonical representative; shifting by J changes neither the coset nor
    // any of the conditions
    step.residue = ideal_reduce_mod(J, s_elem);
    step.ideal = J;

    // condition I: (s + J) cap (b + a s + a J) = empty
    QElem lhs = r.qsub(r.q(step.residue), r.qadd(b, r.qmul(a, r.q(step.residue))));
    FracIdeal sum = ideal_add(J, ideal_scale(a, J));
    step.cond_disjoint = !ideal_contains(sum, lhs);

    // condition II
    step.cond_valuations_ok = true;
    for (long k = 0; k < qcount; ++k) {
      long v = valuation_ideal(qs[k], J);
      step.cond_valuations.push_back(v);
      if (v < i) step.cond_valuations_ok = false;
    }

    // condition III: window primes outside S keep their valuation
    step.cond_frozen = true;
    for (const auto& P : window) {
      if (s_keys.count(P.key())) continue;
      if (P.key() == pi.key()) continue; // may be raised at its own step
      if (valuation_ideal(P, J) != valuation_ideal(P, I_prev)) step.cond_frozen = false;
    }

    step.nested = ideal_subset(J, I_prev) &&
                  ideal_contains(I_prev, r.qsub(r.q(step.residue), r.q(r_prev)));

    r_prev = step.residue;
    I_prev = J;
    out.steps.push_back(std::move(step));
  }

  out.all_conditions_hold = true;
  for (const auto& st : out.steps)
    if (!st.cond_disjoint || !st.cond_valuations_ok || !st.cond_frozen || !st.nested)
      out.all_conditions_hold = false;

  // re-verify condition III across the whole chain: once p_i is passed, its
  // valuation never changes again (for p_i in the window and outside S)
  for (size_t i = 0; i < out.steps.size(); ++i) {
    const PrimeIdeal& pi = out.fin_enumeration[i];
    if (s_keys.count(pi.key())) continue;
    if (!window_keys.count(pi.key())) continue;
    long vi = valuation_ideal(pi, out.steps[i].ideal);
    for (size_t j = i + 1; j < out.steps.size(); ++j)
      if (valuation_ideal(pi, out.steps[j].ideal) != vi) out.all_conditions_hold = false;
  }
  return out;
}

} // namespace idealis
