#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcform/dims.hpp"

using namespace dcform;

TEST_CASE("level descriptor") {
  auto L = LevelDesc::make(5, 1, 1);
  CHECK(L.N == 5);
  CHECK_THROWS(LevelDesc::make(5, 0, 1));   // r >= 1 required
  CHECK_THROWS(LevelDesc::make(5, 1, 10));  // N0 must be prime to p
  CHECK_THROWS(LevelDesc::make(4, 1, 1));
}

TEST_CASE("index, cusps, genus") {
  CHECK(gamma1_index(1) == 1);
  CHECK(gamma1_index(5) == 24);
  CHECK(gamma1_index(7) == 48);
  CHECK(gamma1_cusps(5) == 4);
  CHECK(gamma1_cusps(7) == 6);
  CHECK(gamma1_genus(5) == 0);
  CHECK(gamma1_genus(7) == 0);
  CHECK(gamma1_genus(11) == 1);
  CHECK(gamma1_genus(13) == 2);
}

TEST_CASE("dimension oracle at level 1") {
  // classical: S_12(SL2(Z)) is spanned by delta
  CHECK(dimension_oracle(12, 1, SpaceKind::cuspidal) == 1);
  CHECK(dimension_oracle(12, 1, SpaceKind::full) == 2);
  CHECK(dimension_oracle(2, 1, SpaceKind::full) == 0);
  CHECK(dimension_oracle(4, 1, SpaceKind::full) == 1);
  CHECK(dimension_oracle(4, 1, SpaceKind::cuspidal) == 0);
  CHECK(dimension_oracle(26, 1, SpaceKind::cuspidal) == 1);
  CHECK(dimension_oracle(24, 1, SpaceKind::cuspidal) == 2);
  CHECK(dimension_oracle(11, 1, SpaceKind::cuspidal) == 0);
  CHECK_THROWS(dimension_oracle(1, 1, SpaceKind::cuspidal));
  CHECK_THROWS(dimension_oracle(0, 5, SpaceKind::cuspidal));
}

TEST_CASE("dimension oracle at Gamma_1(5)") {
  CHECK(dimension_oracle(2, 5, SpaceKind::cuspidal) == 0);
  CHECK(dimension_oracle(2, 5, SpaceKind::full) == 3);
  CHECK(dimension_oracle(3, 5, SpaceKind::cuspidal) == 0);
  CHECK(dimension_oracle(3, 5, SpaceKind::eisenstein) == 4);
  // dim S_k(Gamma_1(5)) = k-3 for k >= 3, dim M_k = k+1
  for (int k = 3; k <= 20; ++k) {
    CHECK(dimension_oracle(k, 5, SpaceKind::cuspidal) == k - 3);
    CHECK(dimension_oracle(k, 5, SpaceKind::full) == k + 1);
    CHECK(dimension_oracle(k, 5, SpaceKind::eisenstein) == 4);
  }
  CHECK(dimension_oracle(12, 5, SpaceKind::cuspidal) == 9);
  // known values at Gamma_1(7): S_3 is one-dimensional (CM form)
  CHECK(dimension_oracle(3, 7, SpaceKind::cuspidal) == 1);
  CHECK(dimension_oracle(2, 7, SpaceKind::cuspidal) == 0);
}

TEST_CASE("sturm bound") {
  CHECK(sturm_bound(12, 5) == 24);
  CHECK(sturm_bound(16, 5) == 32);
  CHECK(sturm_bound(1, 1) == 1);  // ceiling of 1/12
  // the oracle formula k*index/12 at level 1, weight 12 gives 1
  CHECK(sturm_bound(12, 1) == 1);
}
