#include "indep.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace idealis {

namespace {

std::vector<mpz_class> prime_factors(mpz_class n) {
  std::vector<mpz_class> out;
  for (mpz_class p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

// all coset representatives of I modulo the meet of the given parts are
// covered by some part
bool covered_by_enumeration(const FracIdeal& I, const std::vector<FracIdeal>& parts,
                            long coset_cap) {
  FracIdeal L = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) L = ideal_intersect(L, parts[i]);
  Index n = ideal_index(I, L);
  if (n.infinite || n.value > coset_cap)
    fail_exhausted("cover test: quotient I/(meet of parts) exceeds the enumeration cap");
  for (const QElem& rep : ideal_coset_reps(I, L)) {
    bool hit = false;
    for (const auto& J : parts)
      if (ideal_contains(J, rep)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

} // namespace

bool is_union_cover(const FracIdeal& I, const std::vector<FracIdeal>& parts0, CoverNote* note,
                    long coset_cap) {
  std::vector<FracIdeal> parts;
  for (size_t i = 0; i < parts0.size(); ++i) {
    if (!ideal_subset(parts0[i], I)) fail_invalid("is_union_cover: part not contained in I");
    if (ideal_eq(parts0[i], I)) return true;
    Index idx = ideal_index(I, parts0[i]);
    if (idx.infinite) {
      if (note) note->dropped_infinite_index.push_back(i);
      continue;
    }
    parts.push_back(parts0[i]);
  }
  if (parts.empty()) return false;

  // drop parts contained in another part; the union is unchanged
  std::vector<FracIdeal> maximal;
  for (size_t i = 0; i < parts.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < parts.size(); ++j) {
      if (i == j) continue;
      bool sub = ideal_subset(parts[i], parts[j]);
      bool equal = sub && ideal_subset(parts[j], parts[i]);
      if (sub && (!equal || j < i)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(parts[i]);
  }

  // density shortcut: when the index reciprocals sum below 1, no cover
  mpq_class density = 0;
  std::vector<mpz_class> indices;
  for (const auto& J : maximal) {
    mpz_class m = ideal_index(I, J).value;
    indices.push_back(m);
    density += mpq_class(1) / mpq_class(m);
  }
  if (density < 1) {
    if (note) note->used_density_shortcut = true;
    return false;
  }

  // when every index is a prime power the test splits prime by prime:
  // a cover exists iff for some p the parts of p-power index already cover
  bool all_prime_power = true;
  std::map<std::string, std::vector<size_t>> by_prime;
  for (size_t i = 0; i < indices.size(); ++i) {
    auto ps = prime_factors(indices[i]);
    if (ps.size() != 1) {
      all_prime_power = false;
      break;
    }
    by_prime[ps[0].get_str()].push_back(i);
  }
  if (all_prime_power && by_prime.size() > 1) {
    if (note) note->used_prime_split = true;
    for (const auto& [p, idxs] : by_prime) {
      std::vector<FracIdeal> group;
      for (size_t i : idxs) group.push_back(maximal[i]);
      if (covered_by_enumeration(I, group, coset_cap)) return true;
    }
    return false;
  }

  return covered_by_enumeration(I, maximal, coset_cap);
}

namespace {

CosetCertificate build_certificate(const FracIdeal& I, const std::vector<FracIdeal>& parts) {
  CosetCertificate cert;
  cert.meet = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) cert.meet = ideal_intersect(cert.meet, parts[i]);
  const Ring& r = I.ring;
  for (const QElem& rep : ideal_coset_reps(I, cert.meet)) {
    size_t who = parts.size();
    for (size_t i = 0; i < parts.size(); ++i)
      if (ideal_contains(parts[i], rep)) {
        who = i;
        break;
      }
    if (who == parts.size()) fail(errc::internal, "certificate build on a non-cover");
    auto re = r.q_integral(rep);
    if (!re) fail(errc::internal, "certificate rep not integral");
    cert.assignments.emplace_back(*re, who);
  }
  return cert;
}

// constructible membership for subideal candidates: integral and divisorial
// (exact for the noetherian rings supported here)
std::vector<FracIdeal> constructible_subideals(const FracIdeal& I, long rel_bound) {
  std::vector<FracIdeal> out;
  for (auto& J : ideal_subideals(I, rel_bound))
    if (ideal_eq(ideal_div_closure(J), J)) out.push_back(std::move(J));
  return out;
}

std::string parts_key(const std::vector<FracIdeal>& parts) {
  std::vector<std::string> keys;
  for (const auto& J : parts) keys.push_back(ideal_key(J));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + "|";
  return out;
}

} // namespace

IndependenceResult independence_check(const Ring& r, long bound) {
  if (bound < 2) fail_invalid("independence_check: bound must be >= 2");
  IndependenceResult res;
  res.bound = bound;
  auto sat = enumerate_constructible(r, bound);
  res.saturation_rounds = sat.rounds;

  for (const FracIdeal& I : sat.ideals) {
    ++res.ideals_tested;
    std::vector<FracIdeal> candidates = constructible_subideals(I, bound);
    if (candidates.empty()) continue;

    if (r.is_pid_class()) {
      // a principal ideal contains its generator and no proper subideal does;
      // the generator separates I from any finite union of proper subideals
      for (const auto& J : candidates)
        if (ideal_contains(J, I.gen)) fail(errc::internal, "proper subideal contains generator");
      continue;
    }

    // keep the inclusion-maximal candidates; a minimal cover only uses these
    std::vector<FracIdeal> maximal;
    for (size_t i = 0; i < candidates.size(); ++i) {
      bool dominated = false;
      for (size_t j = 0; j < candidates.size() && !dominated; ++j)
        if (i != j && ideal_subset(candidates[i], candidates[j]) &&
            !ideal_eq(candidates[i], candidates[j]))
          dominated = true;
      if (!dominated) maximal.push_back(candidates[i]);
    }

    if (!is_union_cover(I, maximal)) continue;

    // a cover exists; report the minimal witness: fewest parts, then smallest
    // maximal relative index, then lexicographically smallest key set
    const size_t n = maximal.size();
    for (size_t k = 2; k <= n; ++k) {
      std::vector<std::vector<FracIdeal>> covers;
      std::vector<size_t> pick(k);
      std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t start) {
        if (pos == k) {
          std::vector<FracIdeal> sel;
          for (size_t idx : pick) sel.push_back(maximal[idx]);
          if (is_union_cover(I, sel)) covers.push_back(std::move(sel));
          return;
        }
        for (size_t i = start; i + (k - pos) <= n; ++i) {
          pick[pos] = i;
          rec(pos + 1, i + 1);
        }
      };
      rec(0, 0);
      if (covers.empty()) continue;
      auto score = [&](const std::vector<FracIdeal>& sel) {
        mpz_class mx = 0;
        for (const auto& J : sel) mx = std::max(mx, mpz_class(ideal_index(I, J).value));
        return std::make_pair(mx, parts_key(sel));
      };
      std::sort(covers.begin(), covers.end(),
                [&](const auto& A, const auto& B) { return score(A) < score(B); });
      IndependenceWitness w;
      w.I = I;
      w.parts = covers.front();
      w.certificate = build_certificate(I, w.parts);
      res.independent = false;
      res.witness = std::move(w);
      return res;
    }
    fail(errc::internal, "full pool covers but no finite subset does");
  }
  return res;
}

bool verify_witness_by_sampling(const IndependenceWitness& w, int samples, uint64_t seed) {
  const Ring& r = w.I.ring;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> d(-1000, 1000);
  for (int s = 0; s < samples; ++s) {
    QElem x;
    if (r.is_pid_class()) {
      Elem e;
      switch (r.kind()) {
        case RingKind::integers: e = r.from_int(d(rng)); break;
        default: {
          std::uniform_int_distribution<int> dd(0, 3);
          std::vector<mpq_class> c(dd(rng) + 1);
          for (auto& q : c) q = d(rng);
          e = r.poly_from(c);
          break;
        }
      }
      x = r.qmul(w.I.gen, r.q(e));
    } else {
      mpz_class i = d(rng), j = d(rng);
      Vec2 v{i * w.I.lat.a, i * w.I.lat.b + j * w.I.lat.c};
      x = r.qcanon(QElem{Elem{QuadInt{v.u, v.v}}, r.quad(w.I.den, 0)});
    }
    if (!ideal_contains(w.I, x)) return false;
    bool hit = false;
    for (const auto& J : w.parts)
      if (ideal_contains(J, x)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

SemigroupCosetCover lift_to_semigroup_cover(const IndependenceWitness& w) {
  const Ring& r = w.I.ring;
  if (!is_union_cover(w.I, w.parts)) fail_invalid("lift: witness is not certified");

  SemigroupCosetCover out;
  for (const auto& part : w.parts) {
    for (const QElem& rep : ideal_coset_reps(w.I, part)) {
      auto re = r.q_integral(rep);
      if (!re) fail_invalid("lift: witness ideal is not integral");
      out.cosets.push_back({*re, part});
    }
  }

  // verification: over the fundamental domain of I modulo the meet of the
  // parts (exhaustive for the additive coordinate) and a norm box inside I
  // for the multiplicative coordinate, membership in I x I^x must equal
  // membership in the union of the (r + I_i) x I_i^x
  FracIdeal L = w.parts[0];
  for (size_t i = 1; i < w.parts.size(); ++i) L = ideal_intersect(L, w.parts[i]);
  std::vector<QElem> xs = ideal_coset_reps(w.I, L);
  std::vector<QElem> as;
  ideal_enumerate_elements(w.I, 6, [&](const QElem& a) {
    if (!r.q_is_zero(a)) as.push_back(a);
    return as.size() < 40;
  });
  // also probe additive points outside I; the lift must not cover them
  std::vector<QElem> outside;
  r.enumerate_elements(
      [&](const Elem& e) {
        QElem qe = r.q(e);
        if (!ideal_contains(w.I, qe)) outside.push_back(qe);
        return outside.size() < 10;
      },
      6);

  auto union_member = [&](const QElem& x, const QElem& a) {
    for (const auto& entry : out.cosets) {
      if (!ideal_contains(entry.ideal, a)) continue;
      if (ideal_contains(entry.ideal, r.qsub(x, r.q(entry.residue)))) return true;
    }
    return false;
  };

  out.verified = true;
  for (const auto& a : as) {
    for (const auto& x : xs) {
      if (!union_member(x, a)) out.verified = false; // (x, a) lies in I x I^x
      ++out.pairs_checked;
    }
    for (const auto& x : outside) {
      if (union_member(x, a)) out.verified = false; // outside I x I^x
      ++out.pairs_checked;
    }
  }
  return out;
}

json witness_to_json(const IndependenceWitness& w) {
  const Ring& r = w.I.ring;
  json j;
  j["I"] = ideal_to_json(w.I);
  j["parts"] = json::array();
  for (const auto& p : w.parts) j["parts"].push_back(ideal_to_json(p));
  json cert;
  cert["intersection"] = ideal_to_json(w.certificate.meet);
  cert["cosets"] = json::array();
  for (const auto& [rep, who] : w.certificate.assignments) {
    json c;
    c["rep"] = r.to_string(rep);
    c["part"] = static_cast<long>(who);
    cert["cosets"].push_back(c);
  }
  j["certificate"] = cert;
  return j;
}

} // namespace idealis
