#ifndef IDEALIS_SPECTRUM_HPP
#define IDEALIS_SPECTRUM_HPP

#include "krull.hpp"

namespace idealis {

// finitely supported level function m: P -> N_0; only nonzero entries kept
struct LevelFn {
  std::vector<std::pair<PrimeIdeal, long>> terms; // sorted by key, exponents >= 1
  long at(const std::string& key) const;
  bool empty() const { return terms.empty(); }
};

LevelFn level_make(std::vector<std::pair<PrimeIdeal, long>> terms);
bool level_leq(const LevelFn& m, const LevelFn& n);
bool level_eq(const LevelFn& m, const LevelFn& n);
LevelFn level_plus_divisor(const LevelFn& m, const DivisorVector& dv);
json level_to_json(const LevelFn& m);
LevelFn level_from_json(const Ring& r, const json& j);

// the character chi_{r+I} of D_m, tagged with its component iota_a
struct CharacterAtLevel {
  LevelFn level;
  FracIdeal ideal;              // I in I_m
  DivisorVector ideal_factors;  // exponent vector of I
  Elem residue;                 // canonical representative of r mod I
  Elem component;               // a in R^x (the iota_a tag)
};

json character_to_json(const CharacterAtLevel& chi);
CharacterAtLevel character_from_json(const Ring& r, const json& j);

// all products prod p^(v_p), 0 <= v_p <= m_p
std::vector<FracIdeal> ideals_at_level(const Ring& r, const LevelFn& m);

// the disjoint union of R/I over I in I_m, as characters with canonical reps
std::vector<CharacterAtLevel> spec_level(const Ring& r, const LevelFn& m);

// pi_{n,m}: restrict a character from level n to level m <= n
CharacterAtLevel project(const Ring& r, const CharacterAtLevel& chi, const LevelFn& m);

// the level-shift action: for g = (x, w) scaled by c, send chi_{r+I} at
// component a to chi_{-a x + c r + c I} at level m + v(c), component a*w
CharacterAtLevel act(const Ring& r, const CharacterAtLevel& chi, const Elem& x, const Elem& w,
                     const Elem& c);

// finite window of the power-cofinite topology on 2^{P_fin}
struct SubsetWindow {
  std::vector<PrimeIdeal> primes;
  std::vector<std::vector<bool>> family; // subsets of the window
};

// S lies in the closure of the family iff every basic open {X : F cap X
// empty} containing S meets the family (checked over all F in the window)
bool closure_membership(const SubsetWindow& win, const std::vector<bool>& S);

struct ChainStep {
  QElem b, a; // the group element (b_i, a_i), a_i nonzero
  Elem residue;
  FracIdeal ideal;
  bool cond_disjoint = false;             // condition I
  std::vector<long> cond_valuations;      // condition II values
  bool cond_valuations_ok = false;        // condition II
  bool cond_frozen = false;               // condition III (window primes)
  bool nested = false;                    // r_i + I_i inside r_{i-1} + I_{i-1}
};

struct ChainResult {
  std::vector<ChainStep> steps;
  std::vector<PrimeIdeal> fin_enumeration; // the p_i actually used
  bool all_conditions_hold = false;
};

// deterministic enumeration of the first N nontrivial elements of Q x Q^*
std::vector<std::pair<QElem, QElem>> enumerate_group_elements(const Ring& r, long N);

// the decreasing chain r_1+I_1 >= r_2+I_2 >= ... of the trivial-stabilizer
// construction; S indexes the window primes designated to blow up
ChainResult trivial_stabilizer_chain(const Ring& r, long N,
                                     const std::vector<PrimeIdeal>& window,
                                     const std::vector<size_t>& S, long depth = 24,
                                     const std::vector<std::pair<QElem, QElem>>* group = nullptr);

} // namespace idealis

#endif
