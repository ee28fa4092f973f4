#pragma once

// Level bookkeeping and the classical dimension formulas for Gamma_1(N)
// used as runtime validation oracles, plus the Sturm bound.

#include <cstdint>

namespace dcform {

struct LevelDesc {
  std::int64_t N = 0;
  std::int64_t p = 0;
  int r = 0;          // p-exponent, >= 1
  std::int64_t N0 = 0;  // prime-to-p part

  static LevelDesc make(std::int64_t p, int r, std::int64_t N0);
};

enum class SpaceKind { cuspidal, full, eisenstein };

// index [SL_2(Z) : Gamma_1(N)]
std::int64_t gamma1_index(std::int64_t N);
// number of cusps of Gamma_1(N) (N >= 5)
std::int64_t gamma1_cusps(std::int64_t N);
// genus of X_1(N) (N = 1 or N >= 5)
std::int64_t gamma1_genus(std::int64_t N);

// dim S_k / M_k / Eis_k over a characteristic-0 field, k >= 2.
// N must be 1 or >= 5 (the shipped levels p^r N0 with p >= 5 always
// are). Throws for k <= 1.
std::int64_t dimension_oracle(int k, std::int64_t N, SpaceKind kind);

// ceil(k * [SL2(Z):Gamma_1(N)] / 12)
std::int64_t sturm_bound(int k, std::int64_t N);

}  // namespace dcform
