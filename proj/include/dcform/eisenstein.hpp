#pragma once

// Constructors for the q-expansion generators: classical and
// character-pair Eisenstein series, the stabilized weight-2 series, and
// delta. Constructors document their normalization: pairs have a_1 = 1
// unless the constant term forces clearing a p-power denominator, in
// which case the whole series is scaled by p^denom_cleared.

#include <cstdint>

#include "dcform/dirichlet.hpp"
#include "dcform/series.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace dcform {

using Rational = boost::multiprecision::cpp_rational;

// Bernoulli number B_k with B_1 = -1/2 (cached).
const Rational& bernoulli(int k);

// Normalized level-1 Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1} q^m.
// Throws if the normalizing constant is not p-integral (irregular
// configuration).
Series eisenstein_level1(int k, const RingPtr& ring, std::size_t prec);

struct EisensteinSeries {
  Series s;
  int denom_cleared = 0;  // series was scaled by p^denom_cleared
};

// E_k^{chi,psi} with a_m = sum_{d|m} psi(d) chi(m/d) d^{k-1} and constant
// term 0 (cond chi > 1) or -B_{k,psi}/2k (chi trivial). level N is used
// for the conductor precondition cond(chi) cond(psi) | N.
EisensteinSeries eisenstein_pair(const DirichletCharacter& chi,
                                 const DirichletCharacter& psi, int k,
                                 std::int64_t N, const RingPtr& ring,
                                 std::size_t prec);

// Weight-2 stabilization d E_2(dz) - E_2(z), normalized to a_1 = 1:
// a_0 = (d-1)/24, a_m = sigma_1(m) - d sigma_1(m/d).
Series e2_stabilized(std::int64_t d, const RingPtr& ring, std::size_t prec);

// q prod (1-q^m)^24.
Series delta(const RingPtr& ring, std::size_t prec);

}  // namespace dcform
