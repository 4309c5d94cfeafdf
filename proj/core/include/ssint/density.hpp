#pragma once

#include "ssint/quadform.hpp"

namespace ssint {

// Stable exponent for counting: 1 + 2 v_ell(2m).
int density_exponent(int64_t ell, int64_t m);

// delta(ell, L, m) = ell^{a(1-rk)} #{v mod ell^a : Q(v) = m mod ell^a}
Rational local_density(int64_t ell, const IntLattice& L, int64_t m);
Rational local_density(const LocalLattice& L, int64_t m);
// same count at an explicit exponent a
Rational local_density_at(const LocalLattice& L, int64_t m, int a);
// #{v mod ell^a : Q(v) = m} (exact)
Integer local_count(const LocalLattice& L, int64_t m, int a);

// alpha(p, L, m): p^{1-rk} #{v mod p : Q(v) = m}, for diagonal a_i over Z_p
Rational hanke_alpha(int64_t p, const std::vector<Rational>& a, int64_t m);
// solutions with some unit-coefficient coordinate nonzero
Rational hanke_alpha_star(int64_t p, const std::vector<Rational>& a, int64_t m);
// p odd, v_p(m) <= 1
Rational hanke_density(int64_t p, const IntLattice& L, int64_t m);
Rational hanke_density(const LocalLattice& L, int64_t m);

} // namespace ssint
