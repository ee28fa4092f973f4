#include "dcform/eisenstein.hpp"

#include <numeric>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "dcform/kernels.hpp"
#include "dcform/zmod.hpp"

namespace dcform {

namespace {

using boost::multiprecision::cpp_int;

// binomial table alongside the Bernoulli recurrence
const Rational& bernoulli_impl(int k, std::vector<Rational>& cache) {
  while ((int)cache.size() <= k) {
    int n = (int)cache.size();
    if (n == 0) {
      cache.emplace_back(1);
      continue;
    }
    // sum_{j=0}^{n} C(n+1, j) B_j = 0  =>  B_n = -1/(n+1) sum_{j<n} C(n+1,j) B_j
    Rational s = 0;
    cpp_int binom = 1;  // C(n+1, 0)
    for (int j = 0; j < n; ++j) {
      s += Rational(binom) * cache[(std::size_t)j];
      binom = binom * (n + 1 - j) / (j + 1);
    }
    cache.push_back(-s / (n + 1));
  }
  return cache[(std::size_t)k];
}

// p-adically scaled ring value: num / p^scale
struct PScaled {
  RingElt num;
  int scale = 0;
};

// reduce an exact rational into (unit-denominator numerator, p-power scale)
PScaled rational_to_scaled(const Rational& r, const Ring& R) {
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  int scale = 0;
  cpp_int p = R.p();
  while (den % p == 0) {
    den /= p;
    ++scale;
  }
  while (scale > 0 && num % p == 0) {
    num /= p;
    --scale;
  }
  cpp_int m = R.carry_mod();
  std::uint64_t num_m = (std::uint64_t)(((num % m) + m) % m);
  std::uint64_t den_m = (std::uint64_t)(((den % m) + m) % m);
  RingElt v{{mulmod(num_m, invmod(den_m, R.carry_mod()), R.carry_mod())}};
  return {v, scale};
}

PScaled scaled_add(const PScaled& a, const PScaled& b, const Ring& R) {
  int s = std::max(a.scale, b.scale);
  RingElt an = a.num, bn = b.num;
  for (int i = a.scale; i < s; ++i) an = R.mul_int(an, R.p());
  for (int i = b.scale; i < s; ++i) bn = R.mul_int(bn, R.p());
  return {R.add(an, bn), s};
}

PScaled scaled_mul(const PScaled& a, const PScaled& b, const Ring& R) {
  return {R.mul(a.num, b.num), a.scale + b.scale};
}

// drop unnecessary scale: divide out p while numerator allows
PScaled scaled_normalize(PScaled x, const Ring& R) {
  while (x.scale > 0 && !R.is_zero(x.num) &&
         R.valuation(x.num) >= 1) {
    x.num = R.div_by_pi_pow(x.num, 1);
    --x.scale;
  }
  if (R.is_zero(x.num)) x.scale = 0;
  return x;
}

// B_{k,psi} = sum_j C(k,j) B_j f^{j-1} S_{k-j}, S_m = sum_a psi(a) a^m,
// computed in a guard ring as numerator / p^scale.
PScaled generalized_bernoulli(int k, const DirichletCharacter& psi,
                              const Ring& G) {
  std::int64_t f = psi.conductor();
  // restrict psi to its conductor
  auto psi_vals = psi.table(G);
  PScaled acc{G.zero(), 0};
  cpp_int binom = 1;
  for (int j = 0; j <= k; ++j) {
    // S_{k-j} over a = 1..f of the primitive character values; use the
    // values of psi on residues coprime to its modulus lifted mod f
    RingElt S = G.zero();
    for (std::int64_t a = 1; a <= f; ++a) {
      // value of the primitive character underlying psi at a
      RingElt va = G.zero();
      for (std::int64_t b = a; b < a + psi.modulus() * f + 1; b += f) {
        if (std::gcd(b, psi.modulus()) == 1) {
          va = psi_vals[(std::size_t)(b % psi.modulus())];
          break;
        }
      }
      if (G.is_zero(va)) continue;
      S = G.add(S, G.mul(va, G.pow(G.from_int(a), (std::uint64_t)(k - j))));
    }
    Rational coef = Rational(binom) * bernoulli(j);
    // f^{j-1}: j = 0 contributes the 1/f
    Rational fpow = j >= 1 ? Rational(cpp_int(pow_u64((std::uint64_t)f, j - 1)))
                           : Rational(1, f);
    PScaled term = rational_to_scaled(coef * fpow, G);
    term.num = G.mul(term.num, S);
    acc = scaled_add(acc, term, G);
    binom = binom * (k - j) / (j + 1);
  }
  return scaled_normalize(acc, G);
}

void sigma_sieve(std::vector<std::uint64_t>& out, int s, std::uint64_t mod,
                 std::size_t prec) {
  out.assign(prec, 0);
  for (std::size_t d = 1; d < prec; ++d) {
    std::uint64_t dp = powmod(d, (std::uint64_t)s, mod);
    for (std::size_t m = d; m < prec; m += d) out[m] = addmod(out[m], dp, mod);
  }
}

}  // namespace

const Rational& bernoulli(int k) {
  static std::vector<Rational> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  return bernoulli_impl(k, cache);
}

Series eisenstein_level1(int k, const RingPtr& ring, std::size_t prec) {
  if (k < 4 || k % 2) throw std::invalid_argument("eisenstein_level1: k must be even >= 4");
  if (ring->e() != 1)
    throw std::invalid_argument("eisenstein_level1: unramified ring required");
  // c = -2k / B_k must be p-integral
  Rational c = Rational(-2 * k) / bernoulli(k);
  cpp_int num = boost::multiprecision::numerator(c);
  cpp_int den = boost::multiprecision::denominator(c);
  cpp_int p = ring->p();
  if (den % p == 0)
    throw std::domain_error(
        "eisenstein_level1: normalization not p-integral (irregular prime)");
  cpp_int m = ring->carry_mod();
  std::uint64_t cm = mulmod((std::uint64_t)(((num % m) + m) % m),
                            invmod((std::uint64_t)(((den % m) + m) % m),
                                   ring->carry_mod()),
                            ring->carry_mod());
  Series out(ring, prec);
  if (prec == 0) return out;
  out.u1(0) = 1 % ring->carry_mod();
  if (prec == 1) return out;
  std::vector<std::uint64_t> sig;
  sigma_sieve(sig, k - 1, ring->carry_mod(), prec);
  for (std::size_t i = 1; i < prec; ++i)
    out.u1(i) = mulmod(cm, sig[i], ring->carry_mod());
  return out;
}

EisensteinSeries eisenstein_pair(const DirichletCharacter& chi,
                                 const DirichletCharacter& psi, int k,
                                 std::int64_t N, const RingPtr& ring,
                                 std::size_t prec) {
  if (k < 1) throw std::invalid_argument("eisenstein_pair: k must be >= 1");
  if (ring->e() != 1)
    throw std::invalid_argument("eisenstein_pair: unramified ring required");
  bool parity_odd = (chi.odd() != psi.odd());
  if (parity_odd != (k % 2 == 1))
    throw std::invalid_argument("eisenstein_pair: parity violation");
  if (chi.trivial() && psi.trivial() && k == 2)
    throw std::invalid_argument(
        "eisenstein_pair: (2,1,1) excluded, use e2_stabilized");
  if (N % (chi.conductor() * psi.conductor()) != 0)
    throw std::invalid_argument("eisenstein_pair: conductor violation");
  if (chi.modulus() != chi.conductor() || psi.modulus() != psi.conductor())
    return eisenstein_pair(chi.primitize(), psi.primitize(), k, N, ring, prec);

  std::uint64_t mod = ring->carry_mod();
  Series out(ring, prec);
  auto chit = chi.table(*ring);
  auto psit = psi.table(*ring);
  // a_m = sum_{d | m} psi(d) d^{k-1} chi(m/d)
  for (std::size_t d = 1; d < prec; ++d) {
    std::uint64_t pv = psit[(std::size_t)(d % (std::size_t)psi.modulus())].c[0];
    if (pv == 0) continue;
    std::uint64_t w = mulmod(pv, powmod(d, (std::uint64_t)(k - 1), mod), mod);
    for (std::size_t m = d; m < prec; m += d) {
      std::uint64_t cv =
          chit[(std::size_t)((m / d) % (std::size_t)chi.modulus())].c[0];
      if (cv == 0) continue;
      out.u1(m) = addmod(out.u1(m), mulmod(w, cv, mod), mod);
    }
  }
  int cleared = 0;
  if (chi.trivial() && prec > 0) {
    // constant term -B_{k,psi} / 2k in a guard ring (capped to uint64)
    int guard = 4;
    while (guard > 1) {
      try {
        pow_u64((std::uint64_t)ring->p(), ring->trunc() + guard);
        break;
      } catch (const std::overflow_error&) {
        --guard;
      }
    }
    auto G = Ring::unramified(ring->p(), ring->trunc() + guard);
    PScaled b = generalized_bernoulli(k, psi, *G);
    PScaled c = scaled_mul(
        b, rational_to_scaled(Rational(-1, 2 * k), *G), *G);
    c = scaled_normalize(c, *G);
    if (c.scale > 0) {
      // clear the p-power denominator by scaling the whole series
      cleared = c.scale;
      std::uint64_t pk = pow_u64((std::uint64_t)ring->p(), cleared);
      kernels::row_scale(out.raw().data(), pk % mod, out.raw().size(), mod);
      out.u1(0) = (std::uint64_t)(c.num.c[0] % mod);
    } else {
      out.u1(0) = (std::uint64_t)(c.num.c[0] % mod);
    }
  }
  return {std::move(out), cleared};
}

Series e2_stabilized(std::int64_t d, const RingPtr& ring, std::size_t prec) {
  if (d <= 1) throw std::invalid_argument("e2_stabilized: d must be > 1");
  if (ring->e() != 1)
    throw std::invalid_argument("e2_stabilized: unramified ring required");
  std::uint64_t mod = ring->carry_mod();
  Series out(ring, prec);
  if (prec == 0) return out;
  std::vector<std::uint64_t> sig;
  sigma_sieve(sig, 1, mod, prec);
  std::uint64_t dm = (std::uint64_t)(d % (std::int64_t)mod);
  for (std::size_t m = 1; m < prec; ++m) {
    std::uint64_t v = sig[m];
    if (m % (std::size_t)d == 0)
      v = submod(v, mulmod(dm, sig[m / (std::size_t)d], mod), mod);
    out.u1(m) = v;
  }
  // a_0 = (d-1)/24
  out.u1(0) = mulmod((std::uint64_t)((d - 1) % (std::int64_t)mod),
                     invmod(24 % mod, mod), mod);
  return out;
}

Series delta(const RingPtr& ring, std::size_t prec) {
  if (ring->e() != 1)
    throw std::invalid_argument("delta: unramified ring required");
  Series out(ring, prec);
  if (prec <= 1) return out;
  std::size_t n = prec - 1;  // precision needed for eta = prod(1-q^m)
  std::uint64_t mod = ring->carry_mod();
  Series eta(ring, n);
  // Euler pentagonal number theorem
  eta.u1(0) = 1 % mod;
  for (std::int64_t j = 1;; ++j) {
    std::int64_t g1 = j * (3 * j - 1) / 2;
    std::int64_t g2 = j * (3 * j + 1) / 2;
    if (g1 >= (std::int64_t)n && g2 >= (std::int64_t)n) break;
    std::uint64_t s = (j % 2) ? mod - 1 : 1;
    if (g1 < (std::int64_t)n)
      eta.u1((std::size_t)g1) = addmod(eta.u1((std::size_t)g1), s, mod);
    if (g2 < (std::int64_t)n)
      eta.u1((std::size_t)g2) = addmod(eta.u1((std::size_t)g2), s, mod);
  }
  Series e2 = series_mul(eta, eta);
  Series e4 = series_mul(e2, e2);
  Series e8 = series_mul(e4, e4);
  Series e16 = series_mul(e8, e8);
  Series e24 = series_mul(e16, e8);
  for (std::size_t i = 0; i + 1 < prec; ++i) out.set_coeff(i + 1, e24.coeff(i));
  return out;
}

}  // namespace dcform
