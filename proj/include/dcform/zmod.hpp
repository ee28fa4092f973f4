#pragma once

// Scalar helpers for arithmetic mod p^k in a uint64.

#include <cassert>
#include <cstdint>
#include <stdexcept>

namespace dcform {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b,
                            std::uint64_t m) {
  return (std::uint64_t)(((unsigned __int128)a * b) % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b,
                            std::uint64_t m) {
  std::uint64_t s = a + b;  // both < m < 2^63, no overflow
  return s >= m ? s - m : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b,
                            std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e,
                            std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// p^e as u64; throws on overflow past 2^62 (headroom for addmod).
inline std::uint64_t pow_u64(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / p)
      throw std::overflow_error("p^e exceeds 2^62");
    r *= p;
  }
  return r;
}

// p-adic valuation of x, capped at `cap` (v(0) reports cap).
inline int val_p(std::uint64_t x, std::uint64_t p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Inverse of a unit mod m (extended Euclid). Throws if not a unit.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, newt = 1;
  std::int64_t r = (std::int64_t)m, newr = (std::int64_t)(a % m);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw std::domain_error("invmod: not a unit");
  if (t < 0) t += (std::int64_t)m;
  return (std::uint64_t)t;
}

// Deterministic Miller-Rabin, valid for all u64.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                          19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto witness = [&](std::uint64_t a) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) return false;
    }
    return true;  // composite witness
  };
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                          19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (witness(a)) return false;
  }
  return true;
}

}  // namespace dcform
