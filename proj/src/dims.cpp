#include "dcform/dims.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

#include "dcform/zmod.hpp"

namespace dcform {

namespace {

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto q : prime_divisors(n)) r = r / q * (q - 1);
  return r;
}

}  // namespace

LevelDesc LevelDesc::make(std::int64_t p, int r, std::int64_t N0) {
  if (!is_prime_u64((std::uint64_t)p) || p < 5)
    throw std::invalid_argument("level: p must be a prime >= 5");
  if (r < 1) throw std::invalid_argument("level: r must be >= 1 (p | N)");
  if (N0 < 1 || N0 % p == 0)
    throw std::invalid_argument("level: N0 must be positive and prime to p");
  LevelDesc L;
  L.p = p;
  L.r = r;
  L.N0 = N0;
  L.N = N0;
  for (int i = 0; i < r; ++i) L.N *= p;
  return L;
}

std::int64_t gamma1_index(std::int64_t N) {
  // N^2 prod(1 - 1/q^2)
  std::int64_t idx = N * N;
  for (auto q : prime_divisors(N)) idx = idx / (q * q) * (q * q - 1);
  return idx;
}

std::int64_t gamma1_cusps(std::int64_t N) {
  if (N < 5) throw std::invalid_argument("gamma1_cusps: N >= 5 required");
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= N; ++d)
    if (N % d == 0) s += euler_phi(d) * euler_phi(N / d);
  return s / 2;
}

std::int64_t gamma1_genus(std::int64_t N) {
  if (N == 1) return 0;
  if (N < 5) throw std::invalid_argument("gamma1_genus: N >= 5 required");
  // g = 1 + mu/24 - cusps/2 with mu the SL2 index (Gamma_1(N) is
  // torsion-free and -I-free for N >= 5, all cusps regular)
  std::int64_t mu = gamma1_index(N);
  std::int64_t c = gamma1_cusps(N);
  std::int64_t twelve_g = 12 + mu / 2 - 6 * c;
  if (twelve_g % 12 != 0)
    throw std::logic_error("gamma1_genus: non-integral genus");
  return twelve_g / 12;
}

namespace {

// level 1 closed forms
std::int64_t dim_level1(int k, SpaceKind kind) {
  if (k < 2 || k % 2) return 0;
  std::int64_t m = k / 12 + ((k % 12 == 2) ? 0 : 1);
  std::int64_t s = (k >= 4) ? m - 1 : 0;
  switch (kind) {
    case SpaceKind::full: return m;
    case SpaceKind::cuspidal: return s;
    case SpaceKind::eisenstein: return m - s;
  }
  return 0;
}

}  // namespace

std::int64_t dimension_oracle(int k, std::int64_t N, SpaceKind kind) {
  if (k <= 1)
    throw std::invalid_argument(
        "dimension_oracle: weight must be >= 2 (weight 1 unsupported)");
  if (N == 1) return dim_level1(k, kind);
  if (N < 5)
    throw std::invalid_argument("dimension_oracle: N in {2,3,4} unsupported");
  std::int64_t g = gamma1_genus(N);
  std::int64_t c = gamma1_cusps(N);
  std::int64_t s, m;
  if (k == 2) {
    s = g;
    m = g + c - 1;
  } else {
    // no elliptic points, no irregular cusps for N >= 5:
    // dim S_k = (k-1)(g-1) + (k-2) c / 2, dim M_k = dim S_k + c
    std::int64_t twice = 2 * (k - 1) * (g - 1) + (std::int64_t)(k - 2) * c;
    if (twice % 2 != 0) throw std::logic_error("dimension_oracle: parity");
    s = twice / 2;
    if (s < 0) s = 0;
    m = s + c;
  }
  switch (kind) {
    case SpaceKind::full: return m;
    case SpaceKind::cuspidal: return s;
    case SpaceKind::eisenstein: return m - s;
  }
  return 0;
}

std::int64_t sturm_bound(int k, std::int64_t N) {
  if (k < 1) throw std::invalid_argument("sturm_bound: k >= 1");
  std::int64_t idx = gamma1_index(N);
  return ((std::int64_t)k * idx + 11) / 12;
}

}  // namespace dcform
