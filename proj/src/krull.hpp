#ifndef IDEALIS_KRULL_HPP
#define IDEALIS_KRULL_HPP

#include <optional>

#include "forms.hpp"
#include "ideal.hpp"

namespace idealis {

// Height-one prime of a Dedekind ring (Z, maximal imaginary quadratic order,
// k[t]).  Non-maximal quadratic orders are rejected.
struct PrimeIdeal {
  Ring ring;
  FracIdeal ideal;
  enum class Kind { rational, inert, split, ramified, polynomial } kind;
  mpz_class p;    // residue characteristic (Z and quadratic kinds)
  mpz_class root; // split/ramified: the prime is (p, theta - root)
  Elem gen;       // generator for the PID kinds
  int residue_degree = 1;

  std::string key() const;
  Index norm() const;
};

// configuration for Q[t] prime enumeration (degree + coefficient height box)
struct PolyBox {
  long max_degree = 3;
  long height = 8;
};

std::vector<PrimeIdeal> primes_up_to(const Ring& r, long bound, const PolyBox& box = {});
bool prime_certify(const PrimeIdeal& P);
// parse a prime from its key: "p" (rational/inert), "p,r" (theta = r mod p),
// or a monic irreducible polynomial string
PrimeIdeal prime_from_key(const Ring& r, const std::string& key);

long valuation(const PrimeIdeal& P, const QElem& x);
long valuation_ideal(const PrimeIdeal& P, const FracIdeal& I);

struct DivisorVector {
  std::vector<std::pair<PrimeIdeal, long>> terms; // sorted by key, exponents nonzero
  long exponent_of(const std::string& key) const;
};

DivisorVector factor_divisorial(const FracIdeal& I, const PolyBox& box = {});
FracIdeal recompose(const Ring& r, const DivisorVector& dv);
json divisor_to_json(const DivisorVector& dv);

bool membership_by_valuations(const QElem& x, const FracIdeal& I, const PolyBox& box = {});

// x in Q^* with v_{p_i}(x) = n_i exactly and v >= 0 at every other prime
QElem approximate(const Ring& r, const std::vector<std::pair<PrimeIdeal, long>>& prescriptions);

// the integral ideal (R : (x)) cap R, i.e. the denominator ideal of x;
// x has no negative valuation outside a prime set S iff this ideal becomes R
// after stripping the S-valuations
FracIdeal denominator_ideal(const Ring& r, const QElem& x);

struct ClassGroup {
  std::vector<long> invariants;           // invariant factors (empty = trivial)
  std::vector<FracIdeal> representatives; // index 0 is the principal class
  std::vector<size_t> inverse_class;      // per class, the index of its inverse
  std::vector<std::vector<size_t>> table; // class multiplication table
  bool methods_agree = true;              // ideal route vs forms route
  FormClassGroup forms;                   // forms-route data (quadratic only)
  mpz_class minkowski_bound;
  long order() const { return static_cast<long>(representatives.size()); }
};

ClassGroup class_group(const Ring& r, long enumeration_bound);

// generator when the fractional ideal is principal (exact search)
std::optional<QElem> principal_generator(const FracIdeal& I);

// reduced norm form of an integral ideal (quadratic maximal orders)
QForm form_of_ideal(const FracIdeal& I);

struct PrimeDichotomy {
  bool fin = true;
  std::vector<Index> indices; // [R : p^(i)] for i = 1..max_i
  std::string class_level;    // ring-class-level argument, when available
};
PrimeDichotomy classify_prime(const PrimeIdeal& P, int max_i);

struct StabilizerReport {
  UnitGroupInfo units;
  bool all_units_fix = false;
  long nonunit_samples_moved = 0; // sampled a outside R^*, all with aI != I
};
StabilizerReport orbit_stabilizer(const FracIdeal& I, long sample_count);

struct KSummand {
  std::string class_label;
  FracIdeal rep;         // divisorial ideal representing the class
  FracIdeal inverse_rep; // (R : rep)
  bool pairing_principal = false;
  QElem pairing_generator; // generator of rep * (R : rep) after closure
};

struct KDecomposition {
  std::vector<KSummand> left;
  std::vector<KSummand> right;
  UnitGroupInfo stabilizer;
  bool index_sets_coincide = false;
};

KDecomposition ktheory_decomposition(const Ring& r, long bound);

} // namespace idealis

#endif
