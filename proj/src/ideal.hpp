#ifndef IDEALIS_IDEAL_HPP
#define IDEALIS_IDEAL_HPP

#include <string>
#include <vector>

#include "lattice.hpp"
#include "ring.hpp"

namespace idealis {

// Nonzero fractional ideal.  For the PID classes (integers, k[t]) it is a
// principal generator in the quotient field; for quadratic orders it is the
// lattice of den*I in Hermite normal form with den the least positive
// integer clearing the denominators.
struct FracIdeal {
  Ring ring;
  QElem gen;      // principal representation (PID classes)
  Lat2 lat{};     // lattice representation (quadratic orders)
  mpz_class den;  // lattice denominator, >= 1
};

FracIdeal ideal_ring(const Ring& r);
FracIdeal ideal_principal(const Ring& r, const QElem& g);
FracIdeal ideal_from_generators(const Ring& r, const std::vector<QElem>& gens);
FracIdeal ideal_canon(FracIdeal I);

bool ideal_eq(const FracIdeal& I, const FracIdeal& J);
bool ideal_contains(const FracIdeal& I, const QElem& x);
bool ideal_subset(const FracIdeal& I, const FracIdeal& J); // I <= J
bool ideal_is_integral(const FracIdeal& I);

FracIdeal ideal_mul(const FracIdeal& I, const FracIdeal& J);
FracIdeal ideal_add(const FracIdeal& I, const FracIdeal& J);
FracIdeal ideal_intersect(const FracIdeal& I, const FracIdeal& J);
FracIdeal ideal_colon(const FracIdeal& I, const FracIdeal& J); // (I : J)
FracIdeal ideal_div_closure(const FracIdeal& I);               // (R : (R : I))
FracIdeal ideal_scale(const QElem& c, const FracIdeal& I);     // c * I
// {r in R : c*r in I} for c in R\{0} and integral I
FracIdeal ideal_inverse_scale(const Elem& c, const FracIdeal& I);

Index ideal_index_in_ring(const FracIdeal& I);                    // [R : I]
Index ideal_index(const FracIdeal& J, const FracIdeal& I);        // [J : I], I <= J
std::vector<QElem> ideal_coset_reps(const FracIdeal& J, const FracIdeal& I);
// canonical representative of x modulo the integral ideal I, x in R
Elem ideal_reduce_mod(const FracIdeal& I, const Elem& x);

std::string ideal_key(const FracIdeal& I);
json ideal_to_json(const FracIdeal& I);
FracIdeal ideal_from_json(const Ring& r, const json& j);

// elements of I enumerated by height shells; callback returns false to stop
void ideal_enumerate_elements(const FracIdeal& I, long max_height,
                              const std::function<bool(const QElem&)>& fn);

struct SaturationResult {
  std::vector<FracIdeal> ideals; // sorted by (index, key)
  int rounds = 0;
  long bound = 0;
};

// Bounded saturation of the constructible family: principal integral ideals
// of index <= bound, closed under pairwise intersection and inverse scaling
// by elements of index <= bound, until no new ideal of index <= bound shows
// up.
SaturationResult enumerate_constructible(const Ring& r, long bound);

// Ideal sublattices J of I with 2 <= [I : J] <= rel_bound (module-closed;
// divisoriality is not filtered here).
std::vector<FracIdeal> ideal_subideals(const FracIdeal& I, long rel_bound);

} // namespace idealis

#endif
