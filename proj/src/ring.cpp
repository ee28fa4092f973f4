#include "dcform/ring.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "dcform/zmod.hpp"

namespace dcform {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

std::uint64_t reduce_i64(std::int64_t v, std::uint64_t m) {
  std::int64_t r = v % (std::int64_t)m;
  if (r < 0) r += (std::int64_t)m;
  return (std::uint64_t)r;
}

}  // namespace

RingPtr Ring::unramified(std::int64_t p, int trunc) {
  if (!is_prime_u64((std::uint64_t)p) || p < 5)
    throw std::invalid_argument("ring: p must be a prime >= 5");
  if (trunc < 1) throw std::invalid_argument("ring: trunc must be >= 1");
  auto r = std::shared_ptr<Ring>(new Ring());
  r->p_ = p;
  r->kind_ = RingKind::unramified;
  r->e_ = 1;
  r->trunc_ = trunc;
  r->carry_exp_ = trunc;
  r->carry_mod_ = pow_u64((std::uint64_t)p, trunc);
  r->canon_mod_ = {r->carry_mod_};
  r->canon_exp_ = {trunc};
  r->id_ = "Z/" + std::to_string(p) + "^" + std::to_string(trunc);
  return r;
}

RingPtr Ring::ramified(std::int64_t p, std::vector<std::int64_t> eis,
                       int trunc) {
  if (!is_prime_u64((std::uint64_t)p) || p < 5)
    throw std::invalid_argument("ring: p must be a prime >= 5");
  if (trunc < 1) throw std::invalid_argument("ring: trunc must be >= 1");
  int e = (int)eis.size() - 1;
  if (e < 1 || eis.back() != 1)
    throw std::invalid_argument("ring: defining polynomial must be monic");
  for (int i = 0; i < e; ++i)
    if (eis[i] % p != 0)
      throw std::invalid_argument("ring: polynomial is not Eisenstein");
  if ((eis[0] / p) % p == 0)
    throw std::invalid_argument(
        "ring: constant term must be exactly divisible by p");
  if (e == 1) {
    // degree-1 Eisenstein polynomial gives O = Z_p with pi = -a_0
    return unramified(p, trunc);
  }

  auto r = std::shared_ptr<Ring>(new Ring());
  r->p_ = p;
  r->kind_ = RingKind::ramified;
  r->e_ = e;
  r->trunc_ = trunc;
  r->eis_ = eis;
  r->carry_exp_ = ceil_div(trunc, e) + 1;
  r->carry_mod_ = pow_u64((std::uint64_t)p, r->carry_exp_);
  r->canon_mod_.resize(e);
  r->canon_exp_.resize(e);
  for (int i = 0; i < e; ++i) {
    int m = std::max(0, ceil_div(trunc - i, e));
    r->canon_exp_[i] = m;
    r->canon_mod_[i] = pow_u64((std::uint64_t)p, m);
  }
  r->eis_mod_.resize(e);
  for (int i = 0; i < e; ++i)
    r->eis_mod_[i] = reduce_i64(-eis[i], r->carry_mod_);

  std::ostringstream os;
  os << "O/pi^" << trunc << "(" << p << ";eis=";
  for (size_t i = 0; i < eis.size(); ++i)
    os << (i ? "," : "") << eis[i];
  os << ")";
  r->id_ = os.str();

  // p/pi = (pi^{e-1} + a_{e-1} pi^{e-2} + ... + a_1) * (-a_0/p)^{-1}
  std::vector<std::uint64_t> q(e, 0);
  q[e - 1] = 1;
  for (int i = 1; i < e; ++i) q[i - 1] = reduce_i64(eis[i], r->carry_mod_);
  std::uint64_t u = reduce_i64(-eis[0] / p, r->carry_mod_);
  std::uint64_t uinv = invmod(u, r->carry_mod_);
  for (auto& x : q) x = mulmod(x, uinv, r->carry_mod_);
  r->p_over_pi_ = r->canonicalize(std::move(q));
  return r;
}

RingPtr Ring::make(std::int64_t p, int n, const std::vector<std::int64_t>* eis,
                   std::optional<int> trunc_override) {
  if (n < 1) throw std::invalid_argument("ring: level exponent n must be >= 1");
  int e = eis ? (int)eis->size() - 1 : 1;
  if (e < 1) throw std::invalid_argument("ring: bad polynomial degree");
  int t = e * (n - 1) + 1;
  if (trunc_override) {
    if (*trunc_override < t)
      throw std::invalid_argument("ring: trunc override below e(n-1)+1");
    t = *trunc_override;
  }
  if (eis && e > 1) return ramified(p, *eis, t);
  return unramified(p, t);
}

RingElt Ring::canonicalize(std::vector<std::uint64_t> raw) const {
  raw.resize(e_);
  for (int i = 0; i < e_; ++i) raw[i] %= canon_mod_[i];
  return RingElt{std::move(raw)};
}

RingElt Ring::zero() const { return RingElt{std::vector<std::uint64_t>(e_, 0)}; }

RingElt Ring::one() const { return from_int(1); }

RingElt Ring::pi() const {
  if (kind_ == RingKind::unramified) return from_int(p_);
  std::vector<std::uint64_t> c(e_, 0);
  c[1] = 1;
  return canonicalize(std::move(c));
}

RingElt Ring::from_int(std::int64_t v) const {
  std::vector<std::uint64_t> c(e_, 0);
  c[0] = reduce_i64(v, carry_mod_);
  return canonicalize(std::move(c));
}

RingElt Ring::add(const RingElt& a, const RingElt& b) const {
  std::vector<std::uint64_t> c(e_);
  for (int i = 0; i < e_; ++i) c[i] = addmod(a.c[i], b.c[i], carry_mod_);
  return canonicalize(std::move(c));
}

RingElt Ring::sub(const RingElt& a, const RingElt& b) const {
  std::vector<std::uint64_t> c(e_);
  for (int i = 0; i < e_; ++i) c[i] = submod(a.c[i], b.c[i], carry_mod_);
  return canonicalize(std::move(c));
}

RingElt Ring::neg(const RingElt& a) const { return sub(zero(), a); }

RingElt Ring::mul(const RingElt& a, const RingElt& b) const {
  if (e_ == 1)
    return RingElt{{mulmod(a.c[0], b.c[0], carry_mod_)}};
  std::vector<std::uint64_t> prod(2 * e_ - 1, 0);
  for (int i = 0; i < e_; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < e_; ++j) {
      prod[i + j] =
          addmod(prod[i + j], mulmod(a.c[i], b.c[j], carry_mod_), carry_mod_);
    }
  }
  // reduce degree below e via x^e = sum_i (-a_i) x^i
  for (int k = 2 * e_ - 2; k >= e_; --k) {
    std::uint64_t top = prod[k];
    if (top == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < e_; ++i) {
      prod[k - e_ + i] = addmod(prod[k - e_ + i],
                                mulmod(top, eis_mod_[i], carry_mod_),
                                carry_mod_);
    }
  }
  prod.resize(e_);
  return canonicalize(std::move(prod));
}

RingElt Ring::mul_int(const RingElt& a, std::int64_t k) const {
  std::uint64_t km = reduce_i64(k, carry_mod_);
  std::vector<std::uint64_t> c(e_);
  for (int i = 0; i < e_; ++i) c[i] = mulmod(a.c[i], km, carry_mod_);
  return canonicalize(std::move(c));
}

RingElt Ring::pow(const RingElt& a, std::uint64_t k) const {
  RingElt r = one();
  RingElt b = a;
  while (k) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

bool Ring::is_zero(const RingElt& a) const {
  return std::all_of(a.c.begin(), a.c.end(),
                     [](std::uint64_t x) { return x == 0; });
}

int Ring::valuation(const RingElt& a) const {
  int v = trunc_;
  for (int i = 0; i < e_; ++i) {
    if (a.c[i] == 0) continue;
    int vp = val_p(a.c[i], (std::uint64_t)p_, canon_exp_[i]);
    v = std::min(v, e_ * vp + i);
  }
  return v;
}

RingElt Ring::div_by_pi_pow(const RingElt& a, int k) const {
  if (k == 0) return a;
  if (valuation(a) < k)
    throw std::domain_error("div_by_pi_pow: valuation too small");
  if (kind_ == RingKind::unramified) {
    std::uint64_t pk = pow_u64((std::uint64_t)p_, k);
    return RingElt{{(a.c[0] / pk) % canon_mod_[0]}};
  }
  RingElt z = a;
  for (int s = 0; s < k; ++s) {
    // z/pi = sum_{i>=1} c_i x^{i-1} + (c_0/p) * (p/pi)
    std::vector<std::uint64_t> shifted(e_, 0);
    for (int i = 1; i < e_; ++i) shifted[i - 1] = z.c[i];
    RingElt r = canonicalize(std::move(shifted));
    if (z.c[0] != 0) {
      std::uint64_t c0p = z.c[0] / (std::uint64_t)p_;
      r = add(r, mul_int(p_over_pi_, (std::int64_t)c0p));
    }
    z = r;
  }
  return z;
}

RingElt Ring::inverse(const RingElt& a) const {
  if (valuation(a) != 0) throw std::domain_error("inverse: not a unit");
  if (e_ == 1) return RingElt{{invmod(a.c[0], carry_mod_)}};
  RingElt y = from_int((std::int64_t)invmod(a.c[0] % (std::uint64_t)p_,
                                            (std::uint64_t)p_));
  for (int it = 0; it < trunc_ + 3; ++it) {
    RingElt err = sub(one(), mul(a, y));
    if (is_zero(err)) break;
    y = add(y, mul(y, err));
  }
  if (!is_zero(sub(mul(a, y), one())))
    throw std::logic_error("inverse: Newton failed to converge");
  return y;
}

RingElt Ring::embed_znp(std::uint64_t x, int n) const {
  if (trunc_ < e_ * (n - 1) + 1)
    throw std::domain_error("embed_znp: truncation too small for Z/p^n");
  if (trunc_ > e_ * n)
    throw std::domain_error("embed_znp: truncation too large, map undefined");
  return from_int((std::int64_t)(x % pow_u64((std::uint64_t)p_, n)));
}

std::optional<std::uint64_t> Ring::is_in_znp(const RingElt& a, int n) const {
  if (trunc_ < e_ * (n - 1) + 1 || trunc_ > e_ * n)
    throw std::domain_error("is_in_znp: ring does not contain Z/p^n exactly");
  for (int i = 1; i < e_; ++i)
    if (a.c[i] != 0) return std::nullopt;
  return a.c[0];  // < p^ceil(t/e) = p^n
}

RingElt Ring::teichmuller(std::uint64_t a) const {
  if (a % (std::uint64_t)p_ == 0)
    throw std::domain_error("teichmuller: not a unit mod p");
  RingElt x = from_int((std::int64_t)(a % (std::uint64_t)p_));
  for (int it = 0; it < trunc_ + 3; ++it) {
    RingElt nx = pow(x, (std::uint64_t)p_);
    if (nx == x) break;
    x = nx;
  }
  if (!(pow(x, (std::uint64_t)p_) == x))
    throw std::logic_error("teichmuller: iteration did not stabilize");
  return x;
}

RingElt Ring::eval_poly(const std::vector<std::int64_t>& f,
                        const RingElt& x) const {
  RingElt r = zero();
  for (auto it = f.rbegin(); it != f.rend(); ++it)
    r = add(mul(r, x), from_int(*it));
  return r;
}

RingElt Ring::hensel_root(const std::vector<std::int64_t>& f,
                          std::uint64_t seed) const {
  std::vector<std::int64_t> df;
  for (size_t i = 1; i < f.size(); ++i)
    df.push_back((std::int64_t)i * f[i]);
  RingElt x = from_int((std::int64_t)(seed % (std::uint64_t)p_));
  if (!is_zero(eval_poly(f, x)) && valuation(eval_poly(f, x)) < 1)
    throw std::domain_error("hensel_root: seed is not a root mod p");
  if (valuation(eval_poly(df, x)) != 0)
    throw std::domain_error("hensel_root: root is not simple mod p");
  for (int it = 0; it < trunc_ + 3; ++it) {
    RingElt fx = eval_poly(f, x);
    if (is_zero(fx)) break;
    x = sub(x, mul(fx, inverse(eval_poly(df, x))));
  }
  if (!is_zero(eval_poly(f, x)))
    throw std::logic_error("hensel_root: Newton failed to converge");
  return x;
}

std::string Ring::serialize(const RingElt& a) const {
  std::ostringstream os;
  for (int i = 0; i < e_; ++i) os << (i ? "," : "") << a.c[i];
  return os.str();
}

RingElt Ring::parse(const std::string& s) const {
  std::vector<std::uint64_t> c;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) c.push_back(std::stoull(tok));
  if ((int)c.size() != e_)
    throw std::invalid_argument("ring parse: wrong coordinate count");
  return canonicalize(std::move(c));
}

}  // namespace dcform
