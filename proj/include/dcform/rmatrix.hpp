#pragma once

// Howell-form elimination over a finite chain ring O/pi^t with RingElt
// entries: spans, membership and rank over base-changed coefficient
// rings. Small sizes only; the heavy lattice arithmetic lives in
// matrix.hpp over Z/p^M.

#include <vector>

#include "dcform/ring.hpp"

namespace dcform {

using RVec = std::vector<RingElt>;

struct RHowell {
  RingPtr ring;
  std::size_t cols = 0;
  std::vector<RVec> rows;       // echelon rows, pivot entry = pi^val
  std::vector<std::size_t> pivots;
  std::vector<int> pivot_vals;  // pi-valuation of each pivot
  std::size_t nrows() const { return rows.size(); }
  bool all_unit_pivots() const {
    for (int v : pivot_vals)
      if (v != 0) return false;
    return true;
  }
};

RHowell howell_r(std::vector<RVec> stack, const RingPtr& ring);

// Reduce v against the Howell rows; v is a member of the row span iff
// the returned residual is zero.
struct RReduce {
  RVec coords;  // per row (quotients applied)
  RVec residual;
  bool member;
};
RReduce r_reduce(const RHowell& h, RVec v);

}  // namespace dcform
