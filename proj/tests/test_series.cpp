#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dcform/series.hpp"
#include "dcform/zmod.hpp"

using namespace dcform;

namespace {

Series random_series(const RingPtr& R, std::size_t prec,
                     std::mt19937_64& rng) {
  Series f(R, prec);
  for (std::size_t i = 0; i < prec; ++i)
    f.set_coeff(i, R->from_int((std::int64_t)(rng() % R->carry_mod())));
  return f;
}

Series monomial(const RingPtr& R, std::size_t prec, std::size_t k) {
  Series f(R, prec);
  f.set_coeff(k, R->one());
  return f;
}

}  // namespace

TEST_CASE("basic products") {
  auto R = Ring::unramified(5, 6);
  auto q = monomial(R, 10, 1);
  auto q2 = series_mul(q, q);
  CHECK(q2.coeff(2) == R->one());
  CHECK(q2.coeff(1) == R->zero());

  // (1+q)(1-q) = 1 - q^2
  Series a(R, 10), b(R, 10);
  a.set_coeff(0, R->one());
  a.set_coeff(1, R->one());
  b.set_coeff(0, R->one());
  b.set_coeff(1, R->from_int(-1));
  auto c = series_mul(a, b);
  CHECK(c.coeff(0) == R->one());
  CHECK(c.coeff(1) == R->zero());
  CHECK(c.coeff(2) == R->from_int(-1));
  CHECK(c.coeff(3) == R->zero());
}

TEST_CASE("mul is commutative and associative; precision is min rule") {
  auto R = Ring::unramified(5, 6);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    auto f = random_series(R, 20, rng);
    auto g = random_series(R, 17, rng);
    auto h = random_series(R, 23, rng);
    auto fg = series_mul(f, g);
    CHECK(fg.prec() == 17);
    CHECK(fg.raw() == series_mul(g, f).raw());
    auto l = series_mul(series_mul(f, g), h);
    auto r = series_mul(f, series_mul(g, h));
    CHECK(l.raw() == r.raw());
  }
}

TEST_CASE("ring mismatch is an error") {
  auto R1 = Ring::unramified(5, 6);
  auto R2 = Ring::unramified(5, 4);
  Series a(R1, 5), b(R2, 5);
  CHECK_THROWS(series_add(a, b));
  CHECK_THROWS(series_mul(a, b));
}

TEST_CASE("theta and Leibniz") {
  auto R = Ring::unramified(5, 6);
  Series f(R, 5);
  f.set_coeff(1, R->one());
  f.set_coeff(2, R->from_int(3));
  auto tf = theta(f);
  CHECK(tf.coeff(1) == R->one());
  CHECK(tf.coeff(2) == R->from_int(6));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 25; ++t) {
    auto a = random_series(R, 30, rng);
    auto b = random_series(R, 30, rng);
    auto lhs = theta(series_mul(a, b));
    auto rhs = series_add(series_mul(theta(a), b), series_mul(a, theta(b)));
    CHECK(lhs.raw() == rhs.raw());
  }
}

TEST_CASE("u_shift") {
  auto R = Ring::unramified(5, 6);
  // q + q^5 + q^25 -> q + q^5
  Series f(R, 26);
  f.set_coeff(1, R->one());
  f.set_coeff(5, R->one());
  f.set_coeff(25, R->one());
  auto uf = u_shift(f, 5);
  CHECK(uf.prec() == 5);
  CHECK(uf.coeff(1) == R->one());
  CHECK(uf.coeff(2) == R->zero());

  // supported on prime-to-p indices -> 0
  Series g(R, 25);
  for (std::size_t i = 1; i < 25; ++i)
    if (i % 5) g.set_coeff(i, R->from_int(7));
  auto ug = u_shift(g, 5);
  for (std::size_t i = 1; i < ug.prec(); ++i)
    CHECK(ug.coeff(i) == R->zero());

  Series tiny(R, 3);
  CHECK_THROWS(u_shift(tiny, 5));
}

TEST_CASE("u_shift of theta vanishes mod p") {
  auto R = Ring::unramified(5, 6);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    auto f = random_series(R, 40, rng);
    auto u = u_shift(theta(f), 5);
    for (std::size_t i = 0; i < u.prec(); ++i)
      CHECK(u.u1(i) % 5 == 0);
  }
}

TEST_CASE("v_shift and ramified coefficient access") {
  std::vector<std::int64_t> x2m5 = {-5, 0, 1};
  auto R = Ring::make(5, 2, &x2m5);
  Series f(R, 12);
  f.set_coeff(1, R->pi());
  f.set_coeff(2, R->one());
  auto v = v_shift(f, 5);
  CHECK(v.coeff(5) == R->pi());
  CHECK(v.coeff(10) == R->one());
  CHECK(v.coeff(1) == R->zero());
  auto s = series_mul(f, f);
  CHECK(s.coeff(2) == R->mul(R->pi(), R->pi()));
}
