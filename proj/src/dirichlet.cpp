#include "dcform/dirichlet.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dcform/zmod.hpp"

namespace dcform {

namespace {

struct UnitFactor {
  std::int64_t q;       // prime power factor of N
  std::int64_t gen;     // generator of (Z/q)^x (q odd prime power or 4)
  std::int64_t ord;     // its order
};

// factor N into prime powers; 2-part beyond 4 is rejected (two-generator
// groups never arise at the shipped levels N = p^r N0 with small odd N0)
std::vector<UnitFactor> unit_group(std::int64_t N) {
  std::vector<UnitFactor> fs;
  std::int64_t n = N;
  for (std::int64_t ell = 2; ell * ell <= n; ++ell) {
    if (n % ell) continue;
    std::int64_t q = 1;
    while (n % ell == 0) {
      q *= ell;
      n /= ell;
    }
    fs.push_back({q, 0, 0});
  }
  if (n > 1) fs.push_back({n, 0, 0});
  for (auto& f : fs) {
    if (f.q == 2) {
      f.gen = 1;
      f.ord = 1;
      continue;
    }
    if (f.q % 2 == 0) {
      if (f.q == 4) {
        f.gen = 3;
        f.ord = 2;
        continue;
      }
      throw std::invalid_argument(
          "dirichlet: 2-power levels above 4 are unsupported");
    }
    // phi(q) for q = ell^a: find the prime ell first
    std::int64_t ell = f.q;
    for (std::int64_t d = 2; d * d <= ell; ++d)
      while (ell % d == 0 && ell > d) ell /= d;
    std::int64_t ph = f.q / ell * (ell - 1);
    // find a generator by exhaustive order check (q is small)
    for (std::int64_t g = 2; g < f.q; ++g) {
      if (std::gcd(g, f.q) != 1) continue;
      std::int64_t x = g % f.q, o = 1;
      while (x != 1) {
        x = (x * g) % f.q;
        ++o;
      }
      if (o == ph) {
        f.gen = g;
        f.ord = ph;
        break;
      }
    }
    if (f.gen == 0)
      throw std::logic_error("dirichlet: no generator found");
  }
  return fs;
}

// smallest primitive root mod p
std::int64_t primitive_root(std::int64_t p) {
  for (std::int64_t g = 2; g < p; ++g) {
    std::int64_t x = g % p, o = 1;
    while (x != 1) {
      x = (x * g) % p;
      ++o;
    }
    if (o == p - 1) return g;
  }
  throw std::logic_error("dirichlet: no primitive root");
}

}  // namespace

RingElt DirichletCharacter::value(const Ring& ring, std::int64_t a) const {
  if (ring.e() != 1)
    throw std::invalid_argument("dirichlet: values need an unramified ring");
  if (ring.p() != p_)
    throw std::invalid_argument("dirichlet: wrong prime");
  int k = exponent(a);
  if (k < 0) return ring.zero();
  if (k == 0) return ring.one();
  std::int64_t g = primitive_root(p_);
  return ring.pow(ring.teichmuller((std::uint64_t)g), (std::uint64_t)k);
}

std::vector<RingElt> DirichletCharacter::table(const Ring& ring) const {
  std::vector<RingElt> t;
  t.reserve((std::size_t)modulus_);
  RingElt zeta = ring.teichmuller((std::uint64_t)primitive_root(p_));
  std::vector<RingElt> zpow((std::size_t)(p_ - 1));
  zpow[0] = ring.one();
  for (std::size_t i = 1; i < zpow.size(); ++i)
    zpow[i] = ring.mul(zpow[i - 1], zeta);
  for (std::int64_t a = 0; a < modulus_; ++a) {
    int k = exps_[(std::size_t)a];
    t.push_back(k < 0 ? ring.zero() : zpow[(std::size_t)k]);
  }
  return t;
}

DirichletCharacter DirichletCharacter::primitize() const {
  if (conductor_ == modulus_) return *this;
  DirichletCharacter chi;
  chi.modulus_ = conductor_;
  chi.p_ = p_;
  chi.conductor_ = conductor_;
  chi.order_ = order_;
  chi.odd_ = odd_;
  chi.name_ = name_ + "!";
  chi.exps_.assign((std::size_t)conductor_, -1);
  for (std::int64_t a = 0; a < conductor_; ++a) {
    if (std::gcd(a, conductor_) != 1) continue;
    // lift a mod conductor to some b coprime to the full modulus
    for (std::int64_t b = a;; b += conductor_) {
      if (std::gcd(b, modulus_) == 1) {
        chi.exps_[(std::size_t)a] = exps_[(std::size_t)(b % modulus_)];
        break;
      }
    }
  }
  if (conductor_ == 1) chi.exps_ = {0};
  return chi;
}

DirichletCharacter DirichletCharacter::trivial_mod(std::int64_t N,
                                                   std::int64_t p) {
  DirichletCharacter chi;
  chi.modulus_ = N;
  chi.p_ = p;
  chi.conductor_ = 1;
  chi.order_ = 1;
  chi.odd_ = false;
  chi.name_ = "1";
  chi.exps_.assign((std::size_t)N, -1);
  for (std::int64_t a = 0; a < N; ++a)
    if (std::gcd(a, N) == 1) chi.exps_[(std::size_t)a] = 0;
  if (N == 1) chi.exps_ = {0};
  return chi;
}

std::vector<DirichletCharacter> DirichletCharacter::all(std::int64_t N,
                                                        std::int64_t p) {
  if (N < 1) throw std::invalid_argument("dirichlet: N must be positive");
  std::vector<DirichletCharacter> out;
  if (N == 1) {
    out.push_back(trivial_mod(1, p));
    return out;
  }
  auto fs = unit_group(N);
  // enumerate exponent tuples (k_i mod ord_i) in lexicographic order
  std::vector<std::int64_t> ks(fs.size(), 0);
  while (true) {
    // order of this character: lcm of ord_i / gcd(ord_i, k_i)
    std::int64_t order = 1;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::int64_t oi =
          fs[i].ord / std::gcd(fs[i].ord, ks[i] == 0 ? fs[i].ord : ks[i]);
      order = std::lcm(order, oi);
    }
    if ((p - 1) % order == 0) {
      DirichletCharacter chi;
      chi.modulus_ = N;
      chi.p_ = p;
      chi.order_ = order;
      chi.exps_.assign((std::size_t)N, -1);
      for (std::int64_t a = 0; a < N; ++a) {
        if (std::gcd(a, N) != 1) continue;
        // discrete log in each factor by brute force
        std::int64_t kexp = 0;
        bool ok = true;
        for (std::size_t i = 0; i < fs.size(); ++i) {
          std::int64_t q = fs[i].q;
          if (q == 2) continue;
          std::int64_t target = a % q;
          std::int64_t x = 1, dl = 0;
          while (x != target) {
            x = (x * fs[i].gen) % q;
            ++dl;
            if (dl > fs[i].ord) {
              ok = false;
              break;
            }
          }
          if (!ok) break;
          // chi_i(g_i) = zeta_{ord_i}^{k_i} has order o_i = ord_i/gcd;
          // rewrite it as a power of the fixed zeta_{p-1}
          std::int64_t gc = std::gcd(fs[i].ord, ks[i]);
          std::int64_t oi = fs[i].ord / gc;
          std::int64_t ki = (ks[i] / gc) % oi;
          kexp += ((p - 1) / oi) * ((ki * dl) % oi) % (p - 1);
          kexp %= (p - 1);
        }
        if (ok) chi.exps_[(std::size_t)a] = (int)(((kexp % (p - 1)) + (p - 1)) % (p - 1));
      }
      chi.odd_ = chi.exponent(N - 1) != 0;
      // conductor: smallest divisor f of N through which chi factors
      chi.conductor_ = N;
      for (std::int64_t f = 1; f <= N; ++f) {
        if (N % f) continue;
        bool factors = true;
        for (std::int64_t a = 0; a < N && factors; ++a) {
          if (std::gcd(a, N) != 1) continue;
          for (std::int64_t b = a + 1; b < N; ++b) {
            if (std::gcd(b, N) != 1) continue;
            if ((a - b) % f == 0 && chi.exps_[(std::size_t)a] != chi.exps_[(std::size_t)b]) {
              factors = false;
              break;
            }
          }
        }
        if (factors) {
          chi.conductor_ = f;
          break;
        }
      }
      bool is_triv = (order == 1);
      chi.name_ = is_triv ? "1" : "chi" + std::to_string(N);
      if (!is_triv) {
        chi.name_ += "_";
        for (std::size_t i = 0; i < ks.size(); ++i)
          chi.name_ += (i ? "." : "") + std::to_string(ks[i]);
      }
      out.push_back(std::move(chi));
    }
    // next tuple
    std::size_t i = 0;
    for (; i < fs.size(); ++i) {
      if (++ks[i] < fs[i].ord) break;
      ks[i] = 0;
    }
    if (i == fs.size()) break;
  }
  // trivial first, then by order then name (deterministic)
  std::stable_sort(out.begin(), out.end(),
                   [](const DirichletCharacter& a, const DirichletCharacter& b) {
                     if (a.order() != b.order()) return a.order() < b.order();
                     return a.name() < b.name();
                   });
  return out;
}

}  // namespace dcform
