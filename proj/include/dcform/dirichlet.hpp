#pragma once

// Dirichlet characters mod N with values embedded p-adically. A
// character is stored as exponent data against a fixed primitive
// (p-1)st root of unity, so value tables can be materialized in any
// unramified coefficient ring of the working prime. Only characters
// whose order divides p-1 are representable; others are rejected at
// construction ("non-embeddable character values").

#include <cstdint>
#include <string>
#include <vector>

#include "dcform/ring.hpp"

namespace dcform {

class DirichletCharacter {
 public:
  std::int64_t modulus() const { return modulus_; }
  std::int64_t conductor() const { return conductor_; }
  std::int64_t order() const { return order_; }
  bool odd() const { return odd_; }
  bool trivial() const { return order_ == 1; }
  const std::string& name() const { return name_; }
  std::int64_t p() const { return p_; }

  // exponent k in chi(a) = zeta_{p-1}^k, or -1 when gcd(a, N) > 1
  int exponent(std::int64_t a) const {
    std::int64_t r = a % modulus_;
    if (r < 0) r += modulus_;
    return exps_[(std::size_t)r];
  }

  // chi(a) as an element of `ring` (unramified, same prime)
  RingElt value(const Ring& ring, std::int64_t a) const;
  // full table chi(0..N-1)
  std::vector<RingElt> table(const Ring& ring) const;

  bool operator==(const DirichletCharacter& o) const {
    return modulus_ == o.modulus_ && exps_ == o.exps_;
  }

  // The primitive character of modulus conductor() inducing this one.
  DirichletCharacter primitize() const;

  // All characters mod N with values embeddable into Z_p (order
  // dividing p-1), in a deterministic order starting with the trivial
  // character.
  static std::vector<DirichletCharacter> all(std::int64_t N, std::int64_t p);

  // The trivial character mod N.
  static DirichletCharacter trivial_mod(std::int64_t N, std::int64_t p);

 private:
  std::int64_t modulus_ = 1;
  std::int64_t p_ = 5;
  std::int64_t conductor_ = 1;
  std::int64_t order_ = 1;
  bool odd_ = false;
  std::string name_;
  std::vector<int> exps_;  // index a mod N; -1 for non-units

  friend std::vector<DirichletCharacter> build_all(std::int64_t,
                                                   std::int64_t);
};

}  // namespace dcform
