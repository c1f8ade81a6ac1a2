#ifndef IDEALIS_FORMS_HPP
#define IDEALIS_FORMS_HPP

#include <functional>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace idealis {

// Primitive positive definite integral binary quadratic form a*x^2+b*x*y+c*y^2
// of negative discriminant b^2 - 4ac.
struct QForm {
  mpz_class a, b, c;
  bool operator==(const QForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const QForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
  mpz_class disc() const { return b * b - 4 * a * c; }
};

QForm form_reduce(QForm f);
QForm form_identity(const mpz_class& D);
QForm form_inverse(const QForm& f);
QForm form_compose(const QForm& f, const QForm& g);
QForm form_pow(const QForm& f, const mpz_class& e);
bool form_is_primitive(const QForm& f);

// all reduced primitive forms of discriminant D < 0
std::vector<QForm> reduced_forms(const mpz_class& D);

// invariant factors d_1 | d_2 | ... of a finite abelian group presented by a
// composition law; elements are indices 0..n-1 with identity id
std::vector<long> abelian_invariants(size_t n, size_t id,
                                     const std::function<size_t(size_t, size_t)>& mul);

struct FormClassGroup {
  mpz_class discriminant;
  std::vector<QForm> forms; // reduced forms, sorted
  std::vector<long> invariants;
  long h() const { return static_cast<long>(forms.size()); }
};

FormClassGroup form_class_group(const mpz_class& D);

} // namespace idealis

#endif
