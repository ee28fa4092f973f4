#pragma once

// Truncated p-adic coefficient rings: Z/p^t and totally ramified
// quotients O/pi^t with O = Z_p[x]/(E(x)) for an Eisenstein polynomial
// E. Elements are canonical coordinate vectors (c_0..c_{e-1}) for
// x = sum c_i pi^i, with c_i reduced mod p^ceil((t-i)/e); coordinates
// are carried mod p^(ceil(t/e)+1) during arithmetic so canonical
// reduction is exact.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dcform {

enum class RingKind { unramified, ramified };

struct RingElt {
  std::vector<std::uint64_t> c;
  bool operator==(const RingElt&) const = default;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

class Ring {
 public:
  // Z/p^trunc
  static RingPtr unramified(std::int64_t p, int trunc);
  // O/pi^trunc, eis = ascending coefficients of a monic Eisenstein
  // polynomial of degree e >= 1
  static RingPtr ramified(std::int64_t p, std::vector<std::int64_t> eis,
                          int trunc);
  // Ring for level exponent n: trunc defaults to e(n-1)+1, overridable
  // upward (working precision).
  static RingPtr make(std::int64_t p, int n,
                      const std::vector<std::int64_t>* eis = nullptr,
                      std::optional<int> trunc_override = std::nullopt);

  std::int64_t p() const { return p_; }
  RingKind kind() const { return kind_; }
  int e() const { return e_; }
  int trunc() const { return trunc_; }
  const std::vector<std::int64_t>& eis_poly() const { return eis_; }
  const std::string& id() const { return id_; }
  std::uint64_t carry_mod() const { return carry_mod_; }
  int carry_exp() const { return carry_exp_; }
  bool same_as(const Ring& o) const { return id_ == o.id_; }

  RingElt zero() const;
  RingElt one() const;
  RingElt pi() const;
  RingElt from_int(std::int64_t v) const;

  RingElt add(const RingElt& a, const RingElt& b) const;
  RingElt sub(const RingElt& a, const RingElt& b) const;
  RingElt neg(const RingElt& a) const;
  RingElt mul(const RingElt& a, const RingElt& b) const;
  RingElt mul_int(const RingElt& a, std::int64_t k) const;
  RingElt pow(const RingElt& a, std::uint64_t k) const;
  // Inverse of a unit (valuation 0); throws otherwise.
  RingElt inverse(const RingElt& a) const;
  bool is_zero(const RingElt& a) const;
  // pi-adic valuation in [0, trunc]; v(0) = trunc.
  int valuation(const RingElt& a) const;
  // A representative of a/pi^k; requires valuation(a) >= k. Only
  // determined mod pi^(trunc-k).
  RingElt div_by_pi_pow(const RingElt& a, int k) const;

  // Image of x mod p^n under Z/p^n -> O/pi^t; requires
  // e(n-1)+1 <= t <= e n so the map is a well-defined injection.
  RingElt embed_znp(std::uint64_t x, int n) const;
  // Preimage under embed_znp when it exists.
  std::optional<std::uint64_t> is_in_znp(const RingElt& a, int n) const;

  // The (p-1)st root of unity congruent to a mod pi; requires p∤a.
  RingElt teichmuller(std::uint64_t a) const;
  // Root of f lifting a simple root `seed` mod p (Newton).
  RingElt hensel_root(const std::vector<std::int64_t>& f,
                      std::uint64_t seed) const;

  // "c0,c1,...,c_{e-1}" decimal form used by the cache format.
  std::string serialize(const RingElt& a) const;
  RingElt parse(const std::string& s) const;

 private:
  Ring() = default;
  RingElt canonicalize(std::vector<std::uint64_t> raw) const;
  RingElt eval_poly(const std::vector<std::int64_t>& f,
                    const RingElt& x) const;

  std::int64_t p_ = 0;
  RingKind kind_ = RingKind::unramified;
  int e_ = 1;
  int trunc_ = 1;
  std::vector<std::int64_t> eis_;
  int carry_exp_ = 1;
  std::uint64_t carry_mod_ = 0;
  std::vector<std::uint64_t> eis_mod_;    // -a_i mod carry, i < e
  std::vector<std::uint64_t> canon_mod_;  // p^ceil((t-i)/e)
  std::vector<int> canon_exp_;
  RingElt p_over_pi_;  // Q * (-a_0/p)^{-1}, the ring element p/pi
  std::string id_;
};

}  // namespace dcform
