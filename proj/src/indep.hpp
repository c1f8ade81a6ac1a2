#ifndef IDEALIS_INDEP_HPP
#define IDEALIS_INDEP_HPP

#include <cstdint>
#include <optional>

#include "ideal.hpp"

namespace idealis {

struct CoverNote {
  std::vector<size_t> dropped_infinite_index; // positions of discarded parts
  bool used_density_shortcut = false;
  bool used_prime_split = false;
};

// Is I equal to the union of the given subideals?  Exact; parts of infinite
// index in I are discarded (a finite union of infinite-index submodules
// cannot cover).
bool is_union_cover(const FracIdeal& I, const std::vector<FracIdeal>& parts,
                    CoverNote* note = nullptr, long coset_cap = 4000000);

struct CosetCertificate {
  FracIdeal meet; // intersection of the parts
  std::vector<std::pair<Elem, size_t>> assignments; // coset rep of I/meet -> covering part
};

struct IndependenceWitness {
  FracIdeal I;
  std::vector<FracIdeal> parts;
  CosetCertificate certificate;
};

struct IndependenceResult {
  bool independent = true; // up to the bound
  long bound = 0;
  int saturation_rounds = 0;
  size_t ideals_tested = 0;
  std::optional<IndependenceWitness> witness;
};

IndependenceResult independence_check(const Ring& r, long bound);

// re-verify a witness under an independent brute-force membership scan
bool verify_witness_by_sampling(const IndependenceWitness& w, int samples, uint64_t seed);

struct SemigroupCosetCover {
  struct Entry {
    Elem residue;
    FracIdeal ideal;
  };
  std::vector<Entry> cosets; // (r + I_i) x I_i^x, all cosets of every part
  bool verified = false;
  long pairs_checked = 0;
};

// Lift a certified ring witness I = U I_i to the double-union cover of
// I x I^x by the coset ideals (r + I_i) x I_i^x, and verify the set equality
// on an exhaustive fundamental-domain sample.
SemigroupCosetCover lift_to_semigroup_cover(const IndependenceWitness& w);

json witness_to_json(const IndependenceWitness& w);

} // namespace idealis

#endif
