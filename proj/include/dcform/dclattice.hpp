#pragma once

// Divided-congruence lattices D_w: the saturation of the stacked
// cuspidal weight bases 2..w inside the coefficient space a_1..a_B,
// over the working ring Z/p^M, with provenance back to the
// weight-homogeneous rows, base change to target quotients, membership
// filtration and graded decomposition.

#include <functional>
#include <map>
#include <optional>

#include "dcform/rmatrix.hpp"
#include "dcform/spaces.hpp"

namespace dcform {

struct LatticeGen {
  int weight;      // weight of the originating cuspidal basis row
  std::size_t row; // row index within that weight basis
};

struct GradedForm {
  // f = p^{-scale} sum_i component_i with component_i of weight i
  std::map<int, Series> components;
  int scale = 0;
};

class DCLattice {
 public:
  int w = 0;
  LevelDesc level;
  std::size_t cols = 0;  // coefficients a_1..a_B
  SatEchelon ech;        // saturated unit-pivot basis with provenance
  std::vector<LatticeGen> gens;  // provenance index -> weight row
  Spaces* spaces = nullptr;

  std::size_t rank() const { return ech.rank(); }

  // q-expansion (with a_0 slot, identically 0) of basis vector i at the
  // requested precision; exactness reported alongside
  Spaces::PrecSeries basis_series(std::size_t i, std::size_t prec) const;

  // same for an arbitrary coordinate vector, optionally twisting each
  // provenance generator (by index into gens) by a scalar value in
  // Z/p^M (diamond/S_ell/[x] actions are diagonal at this level)
  Spaces::PrecSeries vector_series(
      const U64Vec& coords, std::size_t prec,
      const std::vector<std::uint64_t>* twist = nullptr) const;

  GradedForm decompose_graded(const U64Vec& coords,
                              std::size_t prec) const;
  // recombine a graded form into lattice coordinates (provenance
  // round-trip); returns nullopt if membership fails
  std::optional<U64Vec> recombine(const GradedForm& g) const;
};

// Build D_w from the validated cuspidal bases of weights 2..w.
DCLattice build_dc_lattice(int w, Spaces& spaces);

// Reduction of the saturated basis to the target ring (entries embedded
// via Z/p^n -> R); rows keep unit pivots, so the result spans D_w(R).
struct BaseChangedLattice {
  RingPtr ring;
  int w = 0;
  std::size_t cols = 0;
  std::vector<RVec> rows;
  std::vector<std::size_t> pivots;
  int n = 0;  // coefficients came through Z/p^n
};
BaseChangedLattice base_change(const DCLattice& L, const RingPtr& R, int n);

// membership of an R-coefficient vector (a_1..a_B) in span_R D_w(R)
bool base_changed_member(const BaseChangedLattice& B, const RVec& v);

// least w in [2, wmax] with f in D_w(R), 0 for the zero vector, nullopt
// if not a member of any stage (reported as "infinity" by callers).
std::optional<int> weight_filtration_of_form(
    const RVec& f, const std::vector<const BaseChangedLattice*>& stages);

}  // namespace dcform
